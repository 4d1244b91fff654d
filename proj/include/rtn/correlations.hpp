#pragma once

#include <limits>
#include <vector>

#include <Eigen/SparseCore>

#include "rtn/tensors.hpp"
#include "rtn/transfer.hpp"

namespace rtn {

using SpMat = Eigen::SparseMatrix<cplx>;

struct CorrelationProfile {
  std::vector<int> separations;
  std::vector<double> values;
  double fit_rate = 0.0;  // tau_decay
  double fit_length = std::numeric_limits<double>::infinity();
  int window_lo = 0, window_hi = -1;
  double residual = 0.0;
  bool fit_ok = false;
};

// Apply an operator on d^{|sites|} to the listed sites (in order) of a state.
Vec apply_local(const StateVector& s, const Mat& op, const std::vector<int>& sites);

// |<A A'>/<1> - <A><A'>/<1>^2| with A on R and A' on R'
double correlation_direct(const StateVector& s, const Mat& A, const std::vector<int>& R, const Mat& Ap,
                          const std::vector<int>& Rp);

// Boundary operator of an observable A on the physical index of T's Kraus list.
// transfer form  At = prefactor sum_{x,y} A_{yx} K_x (x) conj(K_y)   (At = T for A = Id),
// Hermitian form Ah = prefactor sum_{x,y} A_{yx} vec(K_x) vec(K_y)^* (partial trace of (A (x) Id)|chi><chi|);
// At = realign(Ah).
struct BoundaryOperator {
  Mat transfer_form;
  Mat hermitian_form;
};
BoundaryOperator boundary_operator(const TransferOperator& T, const SpMat& A);
BoundaryOperator boundary_operator(const TransferOperator& T, const Mat& A);

// |Tr(At T^k At' T^{N-k-2})/Tr(T^N) - Tr(At T^{N-1}) Tr(At' T^{N-1})/Tr(T^N)^2|.
// Evaluated in the eigenbasis of T with the dominant contributions cancelled
// analytically, so values far below machine epsilon relative to 1 stay accurate.
double correlation_transfer(const Mat& T, const Mat& At, const Mat& Atp, int k, int N);
// Same quantity from plain matrix powers (reference path).
double correlation_transfer_plain(const Mat& T, const Mat& At, const Mat& Atp, int k, int N);

struct CorrelationBound {
  double value = 0.0;
  bool applicable = false;
};
CorrelationBound correlation_bound(double lambda_modulus, double eps, int k, int kp, double normA, double normAp,
                               int n);

struct FitResult {
  double rate = 0.0;
  double length = std::numeric_limits<double>::infinity();
  double residual = 0.0;
};
// least-squares slope of log(values[k]) against k over k in [lo, hi] (points above 1e-12 floor)
FitResult correlation_length_fit(const std::vector<double>& values, int lo, int hi);

// gamma(k) for k = 0..N-2 and a fit over k in [1, hi], where hi is the largest k with
// gamma(k) > 1e-12 gamma(0), capped at floor((N-2)/2) on a ring (beyond it the
// other way round the ring is shorter).
CorrelationProfile correlation_profile(const Mat& T, const Mat& At, const Mat& Atp, int N);

// Sparse unit-norm Hermitian observables usable at large d:
// 0 clock cosine, 1 clock sine, 2 shift (X + X^*)/2, 3 shift i(X^* - X)/2, 4+ random +-1 diagonals.
SpMat sparse_observable(int d, int id, const SeedSpec& seed);
// Dense Hermitian observable with unit operator norm (small d).
Mat random_hermitian_unit(int d, const SeedSpec& seed);

}  // namespace rtn
