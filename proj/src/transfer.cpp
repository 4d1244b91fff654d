#include "rtn/transfer.hpp"

#include <cmath>

namespace rtn {

Vec vec_rm(const Mat& X) {
  const Eigen::Index n = X.rows(), m = X.cols();
  Vec v(n * m);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < m; ++j) v(i * m + j) = X(i, j);
  return v;
}

Mat unvec_rm(const Vec& v, int n) {
  if (v.size() != Eigen::Index(n) * n) throw InvalidParameter("unvec_rm: size mismatch");
  Mat X(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) X(i, j) = v(Eigen::Index(i) * n + j);
  return X;
}

Mat flip_matrix(int n) {
  Mat F = Mat::Zero(Eigen::Index(n) * n, Eigen::Index(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) F(Eigen::Index(j) * n + i, Eigen::Index(i) * n + j) = 1.0;
  return F;
}

TransferOperator::TransferOperator(TransferKind kind, int D, int N, std::vector<Mat> kraus, double prefactor)
    : kind_(kind), D_(D), N_(N), kraus_(std::move(kraus)), prefactor_(prefactor), cache_(std::make_shared<Cache>()) {
  if (D < 1 || N < 1 || kraus_.empty()) throw InvalidParameter("TransferOperator: empty or malformed");
  dim_ = int(checked_pow(D, N));
  for (const auto& k : kraus_)
    if (k.rows() != dim_ || k.cols() != dim_) throw InvalidParameter("TransferOperator: Kraus size mismatch");
}

bool TransferOperator::has_matrix_form() const { return cache_->built; }

const Mat& TransferOperator::matrix_form(double budget) const {
  const double n2 = double(dim_) * dim_;
  if (n2 * n2 > budget) throw ResourceLimit("transfer matrix form exceeds memory budget");
  std::call_once(cache_->once, [&] {
    // sum_x K (x) conj(K) is the realignment of sum_x vec(K) vec(K)^*
    const Eigen::Index nk = Eigen::Index(kraus_.size());
    Mat B(Eigen::Index(dim_) * dim_, nk);
    for (Eigen::Index x = 0; x < nk; ++x) B.col(x) = vec_rm(kraus_[x]);
    Mat W(B.rows(), B.rows());
    W.noalias() = B * B.adjoint();
    cache_->m = realign(W, dim_, dim_) * prefactor_;
    cache_->built = true;
  });
  return cache_->m;
}

void TransferOperator::apply_vec(const Vec& in, Vec& out) const {
  Mat X = unvec_rm(in, dim_);
  Mat Y = Mat::Zero(dim_, dim_);
  for (const auto& k : kraus_) Y.noalias() += k * X * k.adjoint();
  out = vec_rm(Y) * prefactor_;
}

namespace {

void apply_vec_adjoint(const TransferOperator& T, const Vec& in, Vec& out) {
  const int n = T.dim();
  Mat X = unvec_rm(in, n);
  Mat Y = Mat::Zero(n, n);
  for (const auto& k : T.kraus()) Y.noalias() += k.adjoint() * X * k;
  out = vec_rm(Y) * T.prefactor();
}

}  // namespace

TransferOperator mps_transfer(const MpsTensor& t) {
  t.validate();
  std::vector<Mat> k(t.d);
  const double s = std::sqrt(double(t.d));
  for (int x = 0; x < t.d; ++x) k[x] = t.slice(x) * s;
  return TransferOperator(TransferKind::mps, t.D, 1, std::move(k), 1.0 / t.d);
}

namespace {

TransferOperator peps_column_transfer(const std::vector<const PepsTensor*>& rows, TransferKind kind) {
  const int N = int(rows.size());
  const int d = rows[0]->d, D = rows[0]->D;
  for (auto* r : rows) {
    r->validate();
    if (r->d != d || r->D != D) throw InvalidParameter("peps transfer: tensors must share d and D");
  }
  const std::int64_t nx = checked_pow(d, N);
  const std::int64_t dim = checked_pow(D, N);
  if (double(nx) * double(dim) * double(dim) > kDefaultMemoryBudget)
    throw ResourceLimit("PEPS Kraus list exceeds memory budget");
  // A_x = D^{-N/2} sum_a (x)_i G_{a_{i-1} a_i x_i} with G = sqrt(dD) raw slice
  //     = d^{N/2} * raw column matrix; prefactor d^{-N}
  const double s = std::pow(double(d), 0.5 * N);
  std::vector<Mat> k(nx);
  std::vector<int> x(N);
  for (std::int64_t c = 0; c < nx; ++c) {
    std::int64_t r = c;
    for (int i = N - 1; i >= 0; --i) {
      x[i] = int(r % d);
      r /= d;
    }
    k[c] = peps_column_matrix(rows, x) * s;
  }
  return TransferOperator(kind, D, N, std::move(k), std::pow(double(d), -N));
}

}  // namespace

TransferOperator peps_transfer(const PepsTensor& t, int N) {
  if (N < 1) throw InvalidParameter("peps_transfer: N >= 1");
  std::vector<const PepsTensor*> rows(N, &t);
  return peps_column_transfer(rows, TransferKind::peps_column);
}

TransferOperator peps_transfer_independent(const std::vector<PepsTensor>& tensors) {
  if (tensors.empty()) throw InvalidParameter("peps_transfer_independent: need N >= 1 tensors");
  std::vector<const PepsTensor*> rows;
  for (const auto& t : tensors) rows.push_back(&t);
  return peps_column_transfer(rows, TransferKind::peps_column_independent);
}

MpsTensor peps_reshaped_mps(const PepsTensor& t) {
  t.validate();
  const int D = t.D;
  MpsTensor m(t.d * D * D, D);
  const double s = 1.0 / std::sqrt(double(D));
  for (int x = 0; x < t.d; ++x)
    for (int l = 0; l < D; ++l)
      for (int r = 0; r < D; ++r)
        for (int a = 0; a < D; ++a)
          for (int b = 0; b < D; ++b) m((x * D + l) * D + r, a, b) = t(x, l, r, a, b) * s;
  return m;
}

Mat apply_cp(const TransferOperator& T, const Mat& X) {
  const int n = T.dim();
  if (X.rows() != n || X.cols() != n) throw InvalidParameter("apply_cp: dimension mismatch");
  Mat Y = Mat::Zero(n, n);
  Mat tmp(n, n);
  for (const auto& k : T.kraus()) {
    tmp.noalias() = k * X;
    Y.noalias() += tmp * k.adjoint();
  }
  Y *= T.prefactor();
  const double xs = X.cwiseAbs().maxCoeff();
  if (xs == 0.0) return Y;
  const bool herm_in = (X - X.adjoint()).cwiseAbs().maxCoeff() <= 1e-12 * xs;
  if (herm_in) {
    const double ys = std::max(Y.cwiseAbs().maxCoeff(), 1e-300);
    if ((Y - Y.adjoint()).cwiseAbs().maxCoeff() > 1e-8 * ys)
      throw NumericalFailure("apply_cp: Hermiticity lost beyond rounding");
    Y = ((Y + Y.adjoint()) * 0.5).eval();
  }
  return Y;
}

double overlap_psi(const TransferOperator& T) {
  // <psi|T|psi> = Tr(T(Id)) / dim
  const int n = T.dim();
  cplx acc = 0.0;
  for (const auto& k : T.kraus()) acc += (k * k.adjoint()).trace();
  acc *= T.prefactor() / double(n);
  if (std::abs(acc.imag()) > 1e-10 * (1.0 + std::abs(acc)))
    throw NumericalFailure("overlap_psi: imaginary part too large", std::abs(acc.imag()));
  return acc.real();
}

std::pair<double, double> deflated_norms(const TransferOperator& T) {
  const Mat& M = T.matrix_form();
  Vec psi = max_entangled(T.dim());
  Vec Mpsi = M * psi;
  Mat right = M - Mpsi * psi.adjoint();
  Mat left = M - psi * (psi.adjoint() * M);
  return {operator_norm(right), operator_norm(left)};
}

TransferGap transfer_gap(const TransferOperator& T, const SpectralOptions& opt) {
  TransferGap g;
  const int n = T.dim();
  const int n2 = n * n;
  Mat cp_id = apply_cp(T, Mat::Identity(n, n));
  Vec psi = max_entangled(n);
  if (n2 <= opt.dense_threshold) {
    const Mat& M = T.matrix_form();
    g.summary = upper_gap(M, opt);
    g.certificate = gap_certificate(M, cp_id, psi);
    return g;
  }
  LinearOp a = [&T](const Vec& in, Vec& out) { T.apply_vec(in, out); };
  LinearOp ah = [&T](const Vec& in, Vec& out) { apply_vec_adjoint(T, in, out); };
  g.summary = upper_gap(a, ah, n2, opt);

  GapCertificate& c = g.certificate;
  c.delta = std::max(0.0, 1.0 - lambda_min_hermitian(cp_id));
  Vec tpsi(n2);
  a(psi, tpsi);
  c.epsilon = std::max(0.0, std::abs(psi.dot(tpsi)) - 1.0);
  auto top_sv = [&](const LinearOp& f, const LinearOp& fh) {
    LinearOp neg = [&](const Vec& in, Vec& out) {
      Vec t(n2);
      f(in, t);
      fh(t, out);
      out = -out;
    };
    HermResult h = lowest_eigs_hermitian(neg, n2, 1, opt.tol_iterative, opt.krylov_dim, opt.max_iter);
    return std::sqrt(std::max(0.0, -h.values(0)));
  };
  auto proj = [&](const Vec& v) { return Vec(v - psi * psi.dot(v)); };
  LinearOp r = [&](const Vec& in, Vec& out) { a(proj(in), out); };
  LinearOp rh = [&](const Vec& in, Vec& out) {
    Vec t(n2);
    ah(in, t);
    out = proj(t);
  };
  LinearOp l = [&](const Vec& in, Vec& out) {
    Vec t(n2);
    a(in, t);
    out = proj(t);
  };
  LinearOp lh = [&](const Vec& in, Vec& out) { ah(proj(in), out); };
  c.eta = std::max(top_sv(r, rh), top_sv(l, lh));
  c.bound = 1.0 - 2.0 * c.delta - c.epsilon - 2.0 * c.eta;
  auto ok = [](double v) { return v >= 0.0 && v < 0.2; };
  c.applicable = ok(c.delta) && ok(c.epsilon) && ok(c.eta);
  return g;
}

}  // namespace rtn
