#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "rtn/types.hpp"

namespace rtn {

// (master_seed, trial_index, stream_label) -> one 64-bit engine seed.
struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t trial_index = 0;
  std::string stream_label = "main";

  std::uint64_t derive() const;
  // same master seed and trial, different label
  SeedSpec with_label(std::string label) const;
};

// Exact Box-Muller complex normal sampler over a 64-bit Mersenne twister.
// E|g|^2 = variance; real and imaginary parts each carry variance/2.
class ComplexGaussian {
 public:
  explicit ComplexGaussian(const SeedSpec& seed) : eng_(seed.derive()) {}
  explicit ComplexGaussian(std::uint64_t raw_seed) : eng_(raw_seed) {}

  cplx operator()(double variance);
  double uniform01();  // open interval (0,1), 53-bit resolution

 private:
  std::mt19937_64 eng_;
};

Mat sample_complex_gaussian_matrix(const SeedSpec& seed, int rows, int cols, double variance);

// g_{x l r}, stored row-major in (x, l, r).
struct MpsTensor {
  int d = 0;
  int D = 0;
  std::vector<cplx> entries;

  MpsTensor() = default;
  MpsTensor(int d_, int D_);

  cplx& operator()(int x, int l, int r) { return entries[(std::size_t(x) * D + l) * D + r]; }
  const cplx& operator()(int x, int l, int r) const { return entries[(std::size_t(x) * D + l) * D + r]; }

  Mat slice(int x) const;               // D x D, (l, r)
  Mat bond_by_phys() const;             // D^2 x d, rows (l, r)
  double norm2() const;                 // sum |g|^2
  void validate() const;                // shape + finiteness
};

// g_{x l r a b}: l/r horizontal, a (up) / b (down) vertical. Row-major.
struct PepsTensor {
  int d = 0;
  int D = 0;
  std::vector<cplx> entries;

  PepsTensor() = default;
  PepsTensor(int d_, int D_);

  std::size_t index(int x, int l, int r, int a, int b) const {
    return ((((std::size_t(x) * D + l) * D + r) * D + a) * D + b);
  }
  cplx& operator()(int x, int l, int r, int a, int b) { return entries[index(x, l, r, a, b)]; }
  const cplx& operator()(int x, int l, int r, int a, int b) const { return entries[index(x, l, r, a, b)]; }

  // D x D horizontal slice (l, r) at fixed physical x and vertical (a, b)
  Mat slice(int x, int a, int b) const;
  double norm2() const;
  void validate() const;
};

MpsTensor sample_mps_tensor(const SeedSpec& seed, int d, int D);
PepsTensor sample_peps_tensor(const SeedSpec& seed, int d, int D);

}  // namespace rtn
