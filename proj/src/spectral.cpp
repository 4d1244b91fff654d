#include "rtn/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "lapack_bridge.hpp"

namespace rtn {

namespace {

// modulus desc, then real desc, then imag desc
bool modulus_order(const cplx& a, const cplx& b) {
  double ma = std::abs(a), mb = std::abs(b);
  if (ma != mb) return ma > mb;
  if (a.real() != b.real()) return a.real() > b.real();
  return a.imag() > b.imag();
}

void require_square(const Mat& M, const char* who) {
  if (M.rows() != M.cols() || M.rows() == 0) throw InvalidParameter(std::string(who) + ": matrix must be square and nonempty");
  if (!M.allFinite()) throw InvalidParameter(std::string(who) + ": non-finite entries");
}

}  // namespace

std::vector<cplx> eigs_by_modulus(const Mat& M) {
  require_square(M, "eigs_by_modulus");
  std::vector<cplx> w = lapack::eigenvalues(M);
  std::sort(w.begin(), w.end(), modulus_order);
  return w;
}

std::pair<std::vector<cplx>, Mat> eig_general(const Mat& M) {
  require_square(M, "eig_general");
  if (!M.allFinite()) throw InvalidParameter("eig_general: non-finite entries");
  return lapack::eig(M);
}

RVec singular_values(const Mat& M) {
  if (M.size() == 0) return RVec();
  if (!M.allFinite()) throw InvalidParameter("singular_values: non-finite entries");
  return lapack::singular_values(M);
}

SvdResult svd_thin(const Mat& M) {
  if (!M.allFinite()) throw InvalidParameter("svd_thin: non-finite entries");
  auto r = lapack::svd_thin(M);
  return {std::move(r.U), std::move(r.s), std::move(r.V)};
}

double operator_norm(const Mat& M) {
  if (M.size() == 0) return 0.0;
  return singular_values(M)(0);
}

namespace {

Mat hermitize_checked(const Mat& A, double herm_tol) {
  if (A.rows() != A.cols()) throw InvalidParameter("Hermitian solver: matrix must be square");
  Mat h = (A + A.adjoint()) * 0.5;
  double skew = (A - A.adjoint()).cwiseAbs().maxCoeff();
  double scale = A.cwiseAbs().maxCoeff();
  // cheap entrywise screen first; operator norms only when close to the limit
  if (skew > herm_tol * std::max(scale, 1e-300)) {
    double s = operator_norm(A - A.adjoint());
    if (s > herm_tol * std::max(operator_norm(A), 1e-300))
      throw InvalidParameter("Hermitian solver: input is not Hermitian");
  }
  return h;
}

}  // namespace

RVec eigvalsh(const Mat& A, double herm_tol) {
  return lapack::eigh(hermitize_checked(A, herm_tol), false).first;
}

std::pair<RVec, Mat> eigh(const Mat& A, double herm_tol) {
  return lapack::eigh(hermitize_checked(A, herm_tol), true);
}

double lambda_min_hermitian(const Mat& A, double herm_tol) { return eigvalsh(A, herm_tol)(0); }

Mat realign(const Mat& M, int n, int m) {
  if (n < 1 || m < 1 || M.rows() != Eigen::Index(n) * m || M.cols() != Eigen::Index(n) * m)
    throw InvalidParameter("realign: matrix must be nm x nm");
  Mat R(n * n, m * m);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l) R(i * n + j, k * m + l) = M(i * m + k, j * m + l);
  return R;
}

Vec max_entangled(int D) {
  if (D < 1) throw InvalidParameter("max_entangled: D >= 1");
  Vec v = Vec::Zero(Eigen::Index(D) * D);
  const double a = 1.0 / std::sqrt(double(D));
  for (int i = 0; i < D; ++i) v(Eigen::Index(i) * D + i) = a;
  return v;
}

SpectralSummary upper_gap(const Mat& M, const SpectralOptions& opt) {
  require_square(M, "upper_gap");
  const int n = int(M.rows());
  if (n > opt.dense_threshold) {
    LinearOp a = [&M](const Vec& in, Vec& out) { out.noalias() = M * in; };
    LinearOp ah = [&M](const Vec& in, Vec& out) { out.noalias() = M.adjoint() * in; };
    return upper_gap(a, ah, n, opt);
  }
  SpectralSummary s;
  s.method = SolveMethod::dense;
  auto ev = eigs_by_modulus(M);
  s.lambda1 = ev[0];
  s.lambda2_modulus = n > 1 ? std::abs(ev[1]) : 0.0;  // 1x1 convention
  s.gap = std::abs(s.lambda1) - s.lambda2_modulus;
  RVec sv = singular_values(M);
  s.s1 = sv(0);
  s.s2 = n > 1 ? sv(1) : 0.0;
  s.residual = 0.0;
  return s;
}

SpectralSummary upper_gap(const LinearOp& apply, const LinearOp& apply_adjoint, int dim,
                          const SpectralOptions& opt) {
  if (dim < 1) throw InvalidParameter("upper_gap: dim >= 1");
  SpectralSummary s;
  s.method = SolveMethod::iterative;
  const double tol = opt.tol_iterative;

  cplx l1;
  Vec v1;
  double res1;
  try {
    PowerResult p = power_iteration(apply, dim, tol, opt.max_iter);
    l1 = p.value;
    v1 = p.vector;
    res1 = p.residual;
  } catch (const NumericalFailure&) {
    // slow power convergence (|lambda2| ~ |lambda1|): fall back to Krylov-Schur
    EigResult e = largest_modulus_eigs(apply, dim, 1, tol, opt.krylov_dim, opt.max_iter);
    l1 = e.values[0];
    v1 = e.vectors.col(0);
    res1 = e.residuals(0);
  }
  s.lambda1 = l1;
  double res2 = 0.0;
  if (dim > 1) {
    Vec v = v1 / v1.norm();
    LinearOp defl = [&](const Vec& in, Vec& out) {
      Vec t = in - v * v.dot(in);
      apply(t, out);
    };
    EigResult e2 = largest_modulus_eigs(defl, dim, 1, tol * std::max(std::abs(l1), 1.0), opt.krylov_dim,
                                        opt.max_iter);
    s.lambda2_modulus = std::abs(e2.values[0]);
    res2 = e2.residuals(0);
  }
  s.gap = std::abs(s.lambda1) - s.lambda2_modulus;

  LinearOp neg_gram = [&](const Vec& in, Vec& out) {
    Vec t(dim);
    apply(in, t);
    apply_adjoint(t, out);
    out = -out;
  };
  int cnt = std::min(2, dim);
  HermResult h = lowest_eigs_hermitian(neg_gram, dim, cnt, tol * std::max(std::norm(l1), 1.0), opt.krylov_dim,
                                       opt.max_iter);
  s.s1 = std::sqrt(std::max(0.0, -h.values(0)));
  s.s2 = cnt > 1 ? std::sqrt(std::max(0.0, -h.values(1))) : 0.0;
  s.residual = std::max(res1, res2);
  return s;
}

GapCertificate gap_certificate(const Mat& M, const Mat& cp_identity_image, const Vec& phi) {
  require_square(M, "gap_certificate");
  if (phi.size() != M.rows()) throw InvalidParameter("gap_certificate: phi dimension mismatch");
  const Eigen::Index D = cp_identity_image.rows();
  if (cp_identity_image.cols() != D || D * D != M.rows())
    throw InvalidParameter("gap_certificate: cp_identity_image must be D x D with D^2 = dim(M)");
  GapCertificate c;
  c.delta = std::max(0.0, 1.0 - lambda_min_hermitian(cp_identity_image));
  cplx ov = phi.dot(M * phi);
  c.epsilon = std::max(0.0, std::abs(ov) - 1.0);
  Vec Mphi = M * phi;
  Mat right = M - Mphi * phi.adjoint();             // M (Id - phi phi*)
  Mat left = M - phi * (phi.adjoint() * M);         // (Id - phi phi*) M
  c.eta = std::max(operator_norm(right), operator_norm(left));
  c.bound = 1.0 - 2.0 * c.delta - c.epsilon - 2.0 * c.eta;
  auto ok = [](double v) { return v >= 0.0 && v < 0.2; };
  c.applicable = ok(c.delta) && ok(c.epsilon) && ok(c.eta);
  return c;
}

}  // namespace rtn
