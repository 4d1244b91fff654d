// Restarted Krylov eigensolvers: Krylov-Schur for general operators, and the
// same machinery (with a Hermitian projected problem) for lowest eigenvalues.

#include <algorithm>
#include <cmath>
#include <numeric>

#include "lapack_bridge.hpp"
#include "rtn/rand_gauss.hpp"
#include "rtn/spectral.hpp"

namespace rtn {

namespace {

using Better = bool (*)(const cplx&, const cplx&);

bool by_modulus(const cplx& a, const cplx& b) {
  double ma = std::abs(a), mb = std::abs(b);
  if (ma != mb) return ma > mb;
  if (a.real() != b.real()) return a.real() > b.real();
  return a.imag() > b.imag();
}
bool by_smallest_real(const cplx& a, const cplx& b) { return a.real() < b.real(); }

Vec random_unit(int n, std::uint64_t salt) {
  ComplexGaussian g(0x5eedc0ffee123457ULL ^ salt);
  Vec v(n);
  for (int i = 0; i < n; ++i) v(i) = g(1.0);
  return v / v.norm();
}

// Orthogonalize w against the first k columns of V twice (CGS2); returns coefficients.
Vec cgs2(const Mat& V, int k, Vec& w) {
  Vec h = Vec::Zero(k);
  if (k == 0) return h;
  for (int pass = 0; pass < 2; ++pass) {
    Vec c = V.leftCols(k).adjoint() * w;
    w.noalias() -= V.leftCols(k) * c;
    h += c;
  }
  return h;
}

// eigenvector of upper-triangular T (size k) for diagonal index i
Vec tri_eigvec(const Mat& T, int i) {
  Vec y = Vec::Zero(T.rows());
  y(i) = 1.0;
  const cplx lam = T(i, i);
  double scale = std::max(T.cwiseAbs().maxCoeff(), 1e-300);
  for (int j = i - 1; j >= 0; --j) {
    cplx s = 0;
    for (int l = j + 1; l <= i; ++l) s += T(j, l) * y(l);
    cplx den = T(j, j) - lam;
    if (std::abs(den) < 1e-14 * scale) den = 1e-14 * scale;
    y(j) = -s / den;
  }
  return y / y.norm();
}

struct KsOut {
  std::vector<cplx> theta;
  Mat X;
  RVec res;
  int iterations = 0;
};

KsOut krylov_schur(const LinearOp& A, int n, int nev, double tol, int m, int max_restarts, const Vec* start,
                   bool herm, Better better) {
  if (n < 1 || nev < 1 || nev > n) throw InvalidParameter("Krylov solver: need 1 <= count <= dim");
  m = std::min(n, std::max(m, 2 * nev + 8));
  const int keep = (m == n) ? m : std::min(m - 1, nev + std::max(1, (m - nev) / 2));

  Mat V = Mat::Zero(n, m + 1);
  Mat H = Mat::Zero(m + 1, m);
  Vec v0 = (start && start->size() == n && start->norm() > 0) ? Vec(*start / start->norm()) : random_unit(n, 1);
  V.col(0) = v0;
  int k = 0;
  int matvecs = 0;
  Vec w(n);
  double anorm = 0.0;

  for (int restart = 0; restart < max_restarts; ++restart) {
    for (int j = k; j < m; ++j) {
      A(V.col(j), w);
      ++matvecs;
      double wn0 = w.norm();
      Vec h = cgs2(V, j + 1, w);
      H.col(j).head(j + 1) = h;
      double beta = w.norm();
      anorm = std::max(anorm, std::max(wn0, h.cwiseAbs().maxCoeff()));
      if (beta <= 1e-13 * std::max(anorm, 1e-300)) {
        // invariant subspace; continue with a fresh orthogonal direction
        H(j + 1, j) = 0.0;
        if (j + 1 < n) {
          Vec r = random_unit(n, 1000 + restart * 131 + j);
          cgs2(V, j + 1, r);
          V.col(j + 1) = r / r.norm();
        } else {
          V.col(j + 1).setZero();
        }
      } else {
        H(j + 1, j) = beta;
        V.col(j + 1) = w / beta;
      }
    }

    Mat T = H.topLeftCorner(m, m);
    Mat Z;
    if (herm) {
      Mat Hs = (T + T.adjoint()) * 0.5;
      auto [vals, vecs] = lapack::eigh(Hs, true);
      std::vector<int> p(m);
      std::iota(p.begin(), p.end(), 0);
      std::stable_sort(p.begin(), p.end(), [&](int a, int b) { return better(cplx(vals(a)), cplx(vals(b))); });
      T = Mat::Zero(m, m);
      Z.resize(m, m);
      for (int i = 0; i < m; ++i) {
        T(i, i) = vals(p[i]);
        Z.col(i) = vecs.col(p[i]);
      }
    } else {
      lapack::schur(T, Z);
      std::vector<int> p(m);
      std::iota(p.begin(), p.end(), 0);
      std::stable_sort(p.begin(), p.end(), [&](int a, int b) { return better(T(a, a), T(b, b)); });
      if (keep < m) {
        std::vector<int> sel(p.begin(), p.begin() + keep);
        lapack::reorder_schur(T, Z, sel);
      }
    }

    // wanted Ritz values are the best `nev` on the leading diagonal block
    std::vector<int> lead(keep);
    std::iota(lead.begin(), lead.end(), 0);
    std::stable_sort(lead.begin(), lead.end(), [&](int a, int b) { return better(T(a, a), T(b, b)); });

    const cplx hlast = H(m, m - 1);
    Vec b = (hlast * Z.row(m - 1)).transpose();  // coupling of the new residual direction
    Mat Tk = T.topLeftCorner(keep, keep);
    KsOut out;
    out.res.resize(nev);
    Mat Y(keep, nev);
    bool conv = true;
    for (int q = 0; q < nev; ++q) {
      int i = lead[q];
      Vec y = herm ? Vec(Vec::Unit(keep, i)) : tri_eigvec(Tk, i);
      Y.col(q) = y;
      out.theta.push_back(T(i, i));
      out.res(q) = std::abs(b.head(keep).cwiseProduct(y).sum());
      if (!(out.res(q) <= tol)) conv = false;
    }
    if (conv || m == n || restart + 1 == max_restarts) {
      out.X = V.leftCols(m) * (Z.leftCols(keep) * Y);
      for (int q = 0; q < nev; ++q) out.X.col(q).normalize();
      out.iterations = matvecs;
      if (!conv && m != n)
        throw NumericalFailure("Krylov solver did not converge", out.res.maxCoeff());
      return out;
    }

    Mat Vk = V.leftCols(m) * Z.leftCols(keep);
    Vec vnext = V.col(m);
    V.leftCols(keep) = Vk;
    V.col(keep) = vnext;
    H.setZero();
    H.topLeftCorner(keep, keep) = T.topLeftCorner(keep, keep);
    H.row(keep).head(keep) = b.head(keep).transpose();
    k = keep;
  }
  throw NumericalFailure("Krylov solver: no restarts allowed");
}

}  // namespace

EigResult largest_modulus_eigs(const LinearOp& apply, int dim, int count, double tol, int krylov_dim,
                               int max_restarts, const Vec* start) {
  KsOut o = krylov_schur(apply, dim, count, tol, krylov_dim, max_restarts, start, false, by_modulus);
  EigResult r;
  r.values = o.theta;
  r.vectors = o.X;
  r.residuals = o.res;
  r.iterations = o.iterations;
  return r;
}

HermResult lowest_eigs_hermitian(const LinearOp& apply, int dim, int count, double tol, int krylov_dim,
                                 int max_restarts, const Vec* start) {
  KsOut o = krylov_schur(apply, dim, count, tol, krylov_dim, max_restarts, start, true, by_smallest_real);
  HermResult r;
  r.values.resize(count);
  for (int i = 0; i < count; ++i) r.values(i) = o.theta[i].real();
  r.vectors = o.X;
  r.residuals = o.res;
  r.iterations = o.iterations;
  return r;
}

PowerResult power_iteration(const LinearOp& apply, int dim, double tol, int max_iter, const Vec* start) {
  if (dim < 1) throw InvalidParameter("power_iteration: dim >= 1");
  Vec v = (start && start->size() == dim && start->norm() > 0) ? Vec(*start / start->norm()) : random_unit(dim, 7);
  Vec w(dim);
  PowerResult r;
  for (int it = 1; it <= max_iter; ++it) {
    apply(v, w);
    cplx lam = v.dot(w);
    double res = (w - lam * v).norm();
    r.value = lam;
    r.vector = v;
    r.residual = res;
    r.iterations = it;
    if (res <= tol * std::max(std::abs(lam), 1e-300)) return r;
    double wn = w.norm();
    if (wn == 0.0) return r;  // nilpotent direction: eigenvalue 0
    v = w / wn;
  }
  throw NumericalFailure("power iteration did not converge", r.residual);
}

}  // namespace rtn
