#include "rtn/correlations.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rtn/spectral.hpp"

namespace rtn {

Vec apply_local(const StateVector& s, const Mat& op, const std::vector<int>& sites) {
  const int n = s.num_sites, d = s.site_dim;
  const int m = int(sites.size());
  if (m == 0 || m > n) throw InvalidParameter("apply_local: bad support");
  const std::int64_t dm = checked_pow(d, m);
  if (op.rows() != dm || op.cols() != dm) throw InvalidParameter("apply_local: operator dimension mismatch");
  std::vector<char> used(n, 0);
  for (int q : sites) {
    if (q < 0 || q >= n || used[q]) throw InvalidParameter("apply_local: bad site list");
    used[q] = 1;
  }
  std::vector<std::int64_t> stride(n);
  for (int q = 0; q < n; ++q) stride[q] = checked_pow(d, n - 1 - q);
  std::vector<int> others;
  for (int q = 0; q < n; ++q)
    if (!used[q]) others.push_back(q);
  // local offsets of the support, sites[0] most significant
  std::vector<std::int64_t> loc(dm);
  for (std::int64_t c = 0; c < dm; ++c) {
    std::int64_t r = c, o = 0;
    for (int q = m - 1; q >= 0; --q) {
      o += (r % d) * stride[sites[q]];
      r /= d;
    }
    loc[c] = o;
  }
  const std::int64_t nb = s.amplitudes.size() / dm;
  Mat G(dm, nb);
  std::vector<std::int64_t> base(nb);
  for (std::int64_t c = 0; c < nb; ++c) {
    std::int64_t r = c, o = 0;
    for (int q = int(others.size()) - 1; q >= 0; --q) {
      o += (r % d) * stride[others[q]];
      r /= d;
    }
    base[c] = o;
    for (std::int64_t j = 0; j < dm; ++j) G(j, c) = s.amplitudes(o + loc[j]);
  }
  Mat H = op * G;
  Vec out(s.amplitudes.size());
  for (std::int64_t c = 0; c < nb; ++c)
    for (std::int64_t j = 0; j < dm; ++j) out(base[c] + loc[j]) = H(j, c);
  return out;
}

double correlation_direct(const StateVector& s, const Mat& A, const std::vector<int>& R, const Mat& Ap,
                          const std::vector<int>& Rp) {
  for (int a : R)
    if (std::find(Rp.begin(), Rp.end(), a) != Rp.end())
      throw InvalidParameter("correlation_direct: supports overlap");
  const double z = s.norm2();
  if (!(z > 0.0)) throw DegenerateSample("correlation_direct: zero state");
  const Vec& chi = s.amplitudes;
  Vec vA = apply_local(s, A, R);
  Vec vAp = apply_local(s, Ap, Rp);
  StateVector sp{s.site_dim, s.num_sites, vAp};
  Vec vAAp = apply_local(sp, A, R);
  const cplx eA = chi.dot(vA), eAp = chi.dot(vAp), eAAp = chi.dot(vAAp);
  return std::abs(eAAp / z - eA * eAp / (z * z));
}

namespace {

Mat hermitian_boundary_from_c(const TransferOperator& T, const Mat& B, const Mat& C) {
  Mat Ah(B.rows(), B.rows());
  Ah.noalias() = B * C;
  Ah *= T.prefactor();
  return (Ah + Ah.adjoint()) * 0.5;
}

Mat kraus_columns(const TransferOperator& T) {
  const auto& k = T.kraus();
  Mat B(Eigen::Index(T.dim()) * T.dim(), Eigen::Index(k.size()));
  for (std::size_t x = 0; x < k.size(); ++x) B.col(Eigen::Index(x)) = vec_rm(k[x]);
  return B;
}

cplx ipow(cplx z, int n) {
  cplx r = 1.0;
  while (n > 0) {
    if (n & 1) r *= z;
    z *= z;
    n >>= 1;
  }
  return r;
}

void check_args(const Mat& T, const Mat& At, const Mat& Atp, int k, int N) {
  if (T.rows() != T.cols() || At.rows() != T.rows() || At.cols() != T.cols() || Atp.rows() != T.rows() ||
      Atp.cols() != T.cols())
    throw InvalidParameter("correlation_transfer: dimension mismatch");
  if (N < 2 || k < 0 || k > N - 2) throw InvalidParameter("correlation_transfer: need 0 <= k <= N-2");
}

}  // namespace

BoundaryOperator boundary_operator(const TransferOperator& T, const SpMat& A) {
  const Eigen::Index nk = Eigen::Index(T.kraus().size());
  if (A.rows() != nk || A.cols() != nk) throw InvalidParameter("boundary_operator: observable dimension mismatch");
  Mat B = kraus_columns(T);
  Mat Bh = B.adjoint();
  Mat C = SpMat(A.transpose()) * Bh;
  BoundaryOperator out;
  out.hermitian_form = hermitian_boundary_from_c(T, B, C);
  out.transfer_form = realign(out.hermitian_form, T.dim(), T.dim());
  return out;
}

BoundaryOperator boundary_operator(const TransferOperator& T, const Mat& A) {
  const Eigen::Index nk = Eigen::Index(T.kraus().size());
  if (A.rows() != nk || A.cols() != nk) throw InvalidParameter("boundary_operator: observable dimension mismatch");
  Mat B = kraus_columns(T);
  Mat C = A.transpose() * B.adjoint();
  BoundaryOperator out;
  out.hermitian_form = hermitian_boundary_from_c(T, B, C);
  out.transfer_form = realign(out.hermitian_form, T.dim(), T.dim());
  return out;
}

double correlation_transfer_plain(const Mat& T, const Mat& At, const Mat& Atp, int k, int N) {
  check_args(T, At, Atp, k, N);
  auto mpow = [&](int p) {
    Mat R = Mat::Identity(T.rows(), T.cols());
    for (int i = 0; i < p; ++i) R = R * T;
    return R;
  };
  const Mat Tk = mpow(k), Tm = mpow(N - k - 2), T1 = mpow(N - 1);
  const cplx z = (T1 * T).trace();
  if (std::abs(z) < 1e-30) throw DegenerateSample("correlation_transfer: Tr(T^N) vanishes");
  const cplx s = (At * Tk * Atp * Tm).trace();
  const cplx a = (At * T1).trace(), b = (Atp * T1).trace();
  return std::abs(s / z - a * b / (z * z));
}

double correlation_transfer(const Mat& T, const Mat& At, const Mat& Atp, int k, int N) {
  check_args(T, At, Atp, k, N);
  auto [vals, V] = eig_general(T);
  const Eigen::Index n = T.rows();
  std::vector<int> p(n);
  for (int i = 0; i < n; ++i) p[i] = i;
  std::stable_sort(p.begin(), p.end(), [&](int x, int y) { return std::abs(vals[x]) > std::abs(vals[y]); });
  Mat Vs(n, n);
  std::vector<cplx> lam(n);
  for (int i = 0; i < n; ++i) {
    Vs.col(i) = V.col(p[i]);
    lam[i] = vals[p[i]];
  }
  Eigen::PartialPivLU<Mat> lu(Vs);
  const double cond = 1.0 / std::max(lu.rcond(), 1e-300);
  if (std::abs(lam[0]) == 0.0 || cond > 1e10) return correlation_transfer_plain(T, At, Atp, k, N);
  const Mat Vinv = lu.inverse();
  const Mat a = Vinv * At * Vs, b = Vinv * Atp * Vs;
  const int m = N - k - 2;
  std::vector<cplx> mu(n), muk(n), mum(n), mu1(n), muN(n);
  for (int i = 0; i < n; ++i) {
    mu[i] = lam[i] / lam[0];
    muk[i] = ipow(mu[i], k);
    mum[i] = ipow(mu[i], m);
    mu1[i] = ipow(mu[i], N - 1);
    muN[i] = ipow(mu[i], N);
  }
  // S = Tr(a mu^k b mu^m), Z = sum mu^N, A = sum a_ii mu^{N-1}, B likewise; remove the (0,0) parts
  cplx Sp = 0.0, Zp = 0.0, Ap = 0.0, Bp = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != 0 || j != 0) Sp += a(j, i) * muk[i] * b(i, j) * mum[j];
  for (int i = 1; i < n; ++i) {
    Zp += muN[i];
    Ap += a(i, i) * mu1[i];
    Bp += b(i, i) * mu1[i];
  }
  const cplx a0 = a(0, 0), b0 = b(0, 0);
  const cplx Z = 1.0 + Zp;
  if (std::abs(Z) * std::pow(std::abs(lam[0]), N) < 1e-30) throw DegenerateSample("correlation_transfer: Tr(T^N) vanishes");
  // S Z - A B with the leading a0 b0 terms cancelled exactly
  const cplx num = Sp + a0 * b0 * Zp + Sp * Zp - a0 * Bp - b0 * Ap - Ap * Bp;
  return std::abs(num) / (std::norm(lam[0]) * std::norm(Z));
}

CorrelationBound correlation_bound(double lambda_modulus, double eps, int k, int kp, double normA, double normAp,
                               int n) {
  if (!(eps > 0.0 && eps < 1.0)) throw InvalidParameter("correlation_bound: eps must lie in (0, 1)");
  if (!(lambda_modulus > 0.0) || k < 0 || kp < 0 || n < 1 || normA < 0 || normAp < 0)
    throw InvalidParameter("correlation_bound: invalid arguments");
  CorrelationBound b;
  const double ek = std::pow(eps, k);
  b.value = 10.0 * ek * normA * normAp / (lambda_modulus * lambda_modulus * (1.0 - ek) * (1.0 - ek));
  b.applicable = k <= kp && std::log(double(n)) / std::log(1.0 / eps) - 2.0 <= double(kp);
  return b;
}

FitResult correlation_length_fit(const std::vector<double>& values, int lo, int hi) {
  if (lo < 0 || hi >= int(values.size()) || lo > hi) throw InvalidParameter("correlation_length_fit: bad window");
  double vmax = 0.0;
  for (int k = lo; k <= hi; ++k) vmax = std::max(vmax, values[k]);
  const double floor = 1e-12 * vmax;
  std::vector<double> xs, ys;
  for (int k = lo; k <= hi; ++k)
    if (values[k] > floor && values[k] > 0.0) {
      xs.push_back(k);
      ys.push_back(std::log(values[k]));
    }
  if (xs.size() < 3) throw NumericalFailure("correlation_length_fit: fewer than 3 points above floor");
  const double n = double(xs.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  const double slope = sxy / sxx;
  FitResult f;
  f.rate = -slope;
  f.length = f.rate > 0.0 ? 1.0 / f.rate : std::numeric_limits<double>::infinity();
  double rss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double e = ys[i] - (my + slope * (xs[i] - mx));
    rss += e * e;
  }
  f.residual = std::sqrt(rss / n);
  return f;
}

CorrelationProfile correlation_profile(const Mat& T, const Mat& At, const Mat& Atp, int N) {
  CorrelationProfile p;
  for (int k = 0; k <= N - 2; ++k) {
    p.separations.push_back(k);
    p.values.push_back(correlation_transfer(T, At, Atp, k, N));
  }
  int hi = 0;
  for (int k = 1; k <= (N - 2) / 2; ++k)
    if (p.values[k] > 1e-12 * p.values[0]) hi = k;
  p.window_lo = 1;
  p.window_hi = hi;
  if (hi >= 3) {
    try {
      FitResult f = correlation_length_fit(p.values, 1, hi);
      p.fit_rate = f.rate;
      p.fit_length = f.length;
      p.residual = f.residual;
      p.fit_ok = true;
    } catch (const NumericalFailure&) {
      p.fit_ok = false;
    }
  }
  return p;
}

SpMat sparse_observable(int d, int id, const SeedSpec& seed) {
  if (d < 1 || id < 0) throw InvalidParameter("sparse_observable: bad arguments");
  std::vector<Eigen::Triplet<cplx>> trip;
  const double w = 2.0 * std::numbers::pi / d;
  double norm = 0.0;
  switch (id) {
    case 0:
    case 1:
      for (int x = 0; x < d; ++x) {
        const double v = id == 0 ? std::cos(w * x) : std::sin(w * x);
        trip.emplace_back(x, x, v);
        norm = std::max(norm, std::abs(v));
      }
      break;
    case 2:
    case 3: {
      // X|x> = |x+1>; eigenvalues of the combinations are cos / sin of w j
      for (int j = 0; j < d; ++j) norm = std::max(norm, std::abs(id == 2 ? std::cos(w * j) : std::sin(w * j)));
      if (d == 1) {
        if (id == 2) trip.emplace_back(0, 0, 1.0);
        break;
      }
      for (int x = 0; x < d; ++x) {
        const int y = (x + 1) % d;
        // (X + X^*)/2 : <y|.|x> = 1/2 and <x|.|y> = 1/2; i(X^* - X)/2 : <y|.|x> = -i/2, <x|.|y> = i/2
        const cplx up = id == 2 ? cplx(0.5, 0.0) : cplx(0.0, -0.5);
        trip.emplace_back(y, x, up);
        trip.emplace_back(x, y, std::conj(up));
      }
      break;
    }
    default: {
      ComplexGaussian g(seed.with_label("observable-" + std::to_string(id)));
      for (int x = 0; x < d; ++x) trip.emplace_back(x, x, g.uniform01() < 0.5 ? -1.0 : 1.0);
      norm = 1.0;
    }
  }
  SpMat A(d, d);
  A.setFromTriplets(trip.begin(), trip.end());
  if (norm > 1e-14) A /= norm;
  return A;
}

Mat random_hermitian_unit(int d, const SeedSpec& seed) {
  Mat G = sample_complex_gaussian_matrix(seed, d, d, 1.0);
  Mat H = (G + G.adjoint()) * 0.5;
  return H / operator_norm(H);
}

}  // namespace rtn
