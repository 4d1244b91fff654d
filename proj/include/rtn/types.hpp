#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace rtn {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

// Error taxonomy. The CLI maps these onto exit codes 2/3/4.
struct InvalidParameter : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct NumericalFailure : std::runtime_error {
  double residual;
  explicit NumericalFailure(const std::string& what, double res = 0.0)
      : std::runtime_error(what), residual(res) {}
};

struct ResourceLimit : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A sample that is valid but lands on a (measure-zero) degenerate set:
// singular Sigma, rank-deficient Q, vanishing norm.
struct DegenerateSample : NumericalFailure {
  using NumericalFailure::NumericalFailure;
};

// Default cap on the number of complex amplitudes any single object may hold.
inline constexpr double kDefaultMemoryBudget = 2e8;

// Integer power with overflow guard against a budget; throws ResourceLimit.
std::int64_t checked_pow(std::int64_t base, int exp, double budget = kDefaultMemoryBudget);

}  // namespace rtn
