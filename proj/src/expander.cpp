#include "rtn/expander.hpp"

#include <cmath>

#include "rtn/spectral.hpp"

namespace rtn {

namespace {

// vec_rm(A X B^*) = (A (x) conj B) vec_rm(X), applied to every column of M
Mat kron_left(const Mat& A, const Mat& B, const Mat& M, int D) {
  Mat out(M.rows(), M.cols());
  for (Eigen::Index c = 0; c < M.cols(); ++c) out.col(c) = vec_rm(A * unvec_rm(M.col(c), D) * B.adjoint());
  return out;
}

double tp_residual_of(const std::vector<Mat>& kraus, int D) {
  Mat s = Mat::Zero(D, D);
  for (const auto& k : kraus) s.noalias() += k.adjoint() * k;
  return operator_norm(s - Mat::Identity(D, D));
}

}  // namespace

Channel make_channel(std::vector<Mat> kraus) {
  if (kraus.empty()) throw InvalidParameter("make_channel: empty Kraus list");
  Channel ch;
  ch.D = int(kraus[0].rows());
  for (const auto& k : kraus)
    if (k.rows() != ch.D || k.cols() != ch.D) throw InvalidParameter("make_channel: Kraus shape mismatch");
  ch.kraus = std::move(kraus);
  ch.tp_residual = tp_residual_of(ch.kraus, ch.D);
  for (const auto& k : ch.kraus)
    if (k.cwiseAbs().maxCoeff() > 0.0) ++ch.kraus_rank;
  return ch;
}

Mat sigma(const TransferOperator& T) {
  const int n = T.dim();
  Mat s = Mat::Zero(n, n);
  for (const auto& k : T.kraus()) s.noalias() += k.adjoint() * k;
  s *= T.prefactor();
  return (s + s.adjoint()) * 0.5;
}

Channel normalize_channel(const TransferOperator& T, bool sandwich) {
  Mat S = sigma(T);
  auto [ev, V] = eigh(S);
  const double top = ev(ev.size() - 1);
  if (!(top > 0.0) || ev(0) <= 1e-12 * top) throw DegenerateSample("normalize_channel: Sigma is near-singular", ev(0));
  Mat Sih = V * ev.cwiseInverse().cwiseSqrt().asDiagonal() * V.adjoint();
  Sih = ((Sih + Sih.adjoint()) * 0.5).eval();
  const double s = std::sqrt(T.prefactor());
  std::vector<Mat> k;
  k.reserve(T.kraus().size());
  for (const auto& g : T.kraus()) k.push_back(sandwich ? Mat(s * Sih * g) : Mat(s * g * Sih));
  Channel ch = make_channel(std::move(k));
  ch.sandwich = sandwich;
  ch.sigma_inv_sqrt = std::move(Sih);
  return ch;
}

Mat channel_matrix(const Channel& ch) {
  const int D = ch.D;
  Mat B(Eigen::Index(D) * D, Eigen::Index(ch.kraus.size()));
  for (std::size_t x = 0; x < ch.kraus.size(); ++x) B.col(Eigen::Index(x)) = vec_rm(ch.kraus[x]);
  Mat W(B.rows(), B.rows());
  W.noalias() = B * B.adjoint();
  return realign(W, D, D);
}

Mat channel_matrix(const Channel& ch, const TransferOperator& T) {
  if (ch.sigma_inv_sqrt.rows() != T.dim()) throw InvalidParameter("channel_matrix: channel not built from T");
  const Mat& S = ch.sigma_inv_sqrt;
  const Mat& M = T.matrix_form();
  const int D = T.dim();
  if (ch.sandwich) return kron_left(S, S, M, D);  // (S (x) conj S) T
  // T (S (x) conj S) = [ (S (x) conj S)^T T^T ]^T and (S (x) conj S)^T = conj(S) (x) S = conj(S) (x) conj(conj S)
  Mat Sc = S.conjugate();
  return kron_left(Sc, Sc, M.transpose(), D).transpose();
}

Mat apply_channel(const Channel& ch, const Mat& X) {
  if (X.rows() != ch.D || X.cols() != ch.D) throw InvalidParameter("apply_channel: dimension mismatch");
  Mat Y = Mat::Zero(ch.D, ch.D), tmp(ch.D, ch.D);
  for (const auto& k : ch.kraus) {
    tmp.noalias() = k * X;
    Y.noalias() += tmp * k.adjoint();
  }
  return Y;
}

Mat vec_to_matrix(const Vec& phi) {
  const int D = int(std::lround(std::sqrt(double(phi.size()))));
  if (Eigen::Index(D) * D != phi.size()) throw InvalidParameter("vec_to_matrix: length must be D^2");
  return unvec_rm(phi, D);
}

namespace {

Mat step(const Channel& ch, const Mat& rho, const Mat* mf) {
  if (mf) return unvec_rm(*mf * vec_rm(rho), ch.D);
  return apply_channel(ch, rho);
}

}  // namespace

FixedPoint fixed_point(const Channel& ch, double tol, int max_iter, const Mat* matrix_form) {
  const int D = ch.D;
  Mat rho = Mat::Identity(D, D) / double(D);
  FixedPoint fp;
  for (int it = 1; it <= max_iter; ++it) {
    Mat next = step(ch, rho, matrix_form);
    next = ((next + next.adjoint()) * 0.5).eval();
    const cplx tr = next.trace();
    if (std::abs(tr) == 0.0) throw NumericalFailure("fixed_point: trace vanished");
    next /= tr.real();
    Mat img = step(ch, next, matrix_form);
    fp.residual = (img - next).norm();
    rho = std::move(next);
    fp.iterations = it;
    if (fp.residual <= tol) {
      // polish: keep stepping while the residual still halves, so that rho is
      // accurate to rounding rather than just to tol
      for (int extra = 0; extra < 200; ++extra) {
        Mat cand = step(ch, rho, matrix_form);
        cand = ((cand + cand.adjoint()) * 0.5).eval();
        cand /= cand.trace().real();
        const double res = (step(ch, cand, matrix_form) - cand).norm();
        if (!(res < 0.5 * fp.residual)) break;
        rho = std::move(cand);
        fp.residual = res;
        ++fp.iterations;
      }
      fp.rho = rho;
      fp.purity = (rho * rho).trace().real();
      fp.entropy_lower_bound = -std::log(fp.purity);
      return fp;
    }
  }
  throw NumericalFailure("fixed_point: no convergence", fp.residual);
}

ExpanderReport expander_report(const Channel& ch, const FixedPoint& fp, const Mat* matrix_form) {
  ExpanderReport r;
  r.m_lower = 1.0 / fp.purity;
  r.k = ch.kraus_rank;
  Mat local;
  if (!matrix_form) {
    local = channel_matrix(ch);
    matrix_form = &local;
  }
  auto ev = eigs_by_modulus(*matrix_form);
  r.eps = ev.size() > 1 ? std::abs(ev[1]) : 0.0;
  return r;
}

Trajectory iterate_channel(const Channel& ch, const Mat& rho0, int t, const FixedPoint& fp, const Mat* matrix_form) {
  if (rho0.rows() != ch.D || rho0.cols() != ch.D || t < 0) throw InvalidParameter("iterate_channel: bad input");
  Trajectory tr;
  Mat rho = rho0;
  const double t0 = rho0.trace().real();
  for (int s = 0; s <= t; ++s) {
    if (s > 0) rho = step(ch, rho, matrix_form);
    tr.max_trace_error = std::max(tr.max_trace_error, std::abs(rho.trace() - t0));
    tr.distances.push_back((rho - fp.rho).norm());
    tr.states.push_back(rho);
  }
  return tr;
}

double two_to_two_distance(const Mat& channel_matrix_form, const Mat& transfer_matrix_form) {
  auto ev = eigs_by_modulus(transfer_matrix_form);
  if (std::abs(ev[0]) == 0.0) throw DegenerateSample("two_to_two_distance: vanishing transfer spectrum");
  return operator_norm(channel_matrix_form - transfer_matrix_form / ev[0]);
}

}  // namespace rtn
