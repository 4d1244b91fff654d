#pragma once

#include <gtest/gtest.h>

#include "rtn/rand_gauss.hpp"
#include "rtn/spectral.hpp"

namespace rtn::test {

inline SeedSpec seed(std::uint64_t trial, const std::string& label = "test") { return SeedSpec{20260101ULL, trial, label}; }

inline Mat random_matrix(int rows, int cols, std::uint64_t trial, double var = 1.0) {
  return sample_complex_gaussian_matrix(seed(trial, "matrix"), rows, cols, var);
}

inline Mat random_hermitian(int n, std::uint64_t trial) {
  Mat G = random_matrix(n, n, trial);
  return (G + G.adjoint()) / 2.0;
}

inline Vec random_unit(int n, std::uint64_t trial) {
  Vec v = random_matrix(n, 1, trial).col(0);
  return v / v.norm();
}

inline double max_abs(const Mat& M) { return M.cwiseAbs().maxCoeff(); }

}  // namespace rtn::test
