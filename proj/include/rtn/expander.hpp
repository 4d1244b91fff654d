#pragma once

#include <vector>

#include "rtn/transfer.hpp"

namespace rtn {

// CP map X -> sum_x K_x X K_x^*
struct Channel {
  int D = 0;
  std::vector<Mat> kraus;
  double tp_residual = 0.0;  // || sum K^* K - Id ||_op
  int kraus_rank = 0;        // number of nonzero Kraus operators
  bool sandwich = false;
  Mat sigma_inv_sqrt;  // Sigma^{-1/2} when built by normalize_channel
};

Channel make_channel(std::vector<Mat> kraus);

struct FixedPoint {
  Mat rho;
  double purity = 0.0;
  double entropy_lower_bound = 0.0;  // -log purity
  int iterations = 0;
  double residual = 0.0;
};

struct ExpanderReport {
  double m_lower = 0.0;
  int k = 0;
  double eps = 0.0;
};

// Sigma = prefactor sum_x K_x^* K_x  (= (1/d) sum G^* G for an MPS transfer operator)
Mat sigma(const TransferOperator& T);

// Default: K^_x = G_x Sigma^{-1/2} / sqrt(d), exactly trace preserving.
// sandwich: X -> Sigma^{-1/2} T(X) Sigma^{-1/2}, i.e. Kraus Sigma^{-1/2} G_x / sqrt(d); isospectral.
Channel normalize_channel(const TransferOperator& T, bool sandwich = false);

// D^2 x D^2 matrix form sum_x K_x (x) conj(K_x) (row-major vec convention)
Mat channel_matrix(const Channel& ch);
// Same from an existing transfer matrix: T (S (x) conj S) or (S (x) conj S) T with S = Sigma^{-1/2}
Mat channel_matrix(const Channel& ch, const TransferOperator& T);

Mat apply_channel(const Channel& ch, const Mat& X);

// M_phi with vec_rm(M_phi) = phi
Mat vec_to_matrix(const Vec& phi);

// Iterate from Id/D with Hermitisation and trace renormalisation until ||T(rho) - rho||_2 <= tol.
// If a matrix form is supplied it is used for the iteration.
FixedPoint fixed_point(const Channel& ch, double tol = 1e-12, int max_iter = 10000,
                       const Mat* matrix_form = nullptr);

ExpanderReport expander_report(const Channel& ch, const FixedPoint& fp, const Mat* matrix_form = nullptr);

struct Trajectory {
  std::vector<Mat> states;
  std::vector<double> distances;  // || rho_s - rho^ ||_2
  double max_trace_error = 0.0;
};
Trajectory iterate_channel(const Channel& ch, const Mat& rho0, int t, const FixedPoint& fp,
                           const Mat* matrix_form = nullptr);

// || Mhat - T / lambda_1(T) ||_op on matrix forms (2->2 norm under the Hilbert-Schmidt isometry)
double two_to_two_distance(const Mat& channel_matrix_form, const Mat& transfer_matrix_form);

}  // namespace rtn
