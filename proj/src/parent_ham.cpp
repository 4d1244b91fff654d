#include "rtn/parent_ham.hpp"

#include <algorithm>
#include <cmath>

#include <unsupported/Eigen/KroneckerProduct>

namespace rtn {

Mat two_site_map(const MpsTensor& t) {
  t.validate();
  const int d = t.d, D = t.D;
  Mat Q(Eigen::Index(d) * d, D * D);
  std::vector<Mat> s(d);
  for (int x = 0; x < d; ++x) s[x] = t.slice(x);
  Mat P(D, D);
  for (int x1 = 0; x1 < d; ++x1)
    for (int x2 = 0; x2 < d; ++x2) {
      P.noalias() = s[x1] * s[x2];
      const Eigen::Index row = Eigen::Index(x1) * d + x2;
      for (int l = 0; l < D; ++l)
        for (int r = 0; r < D; ++r) Q(row, l * D + r) = P(l, r);
    }
  return Q;
}

Mat w_operator(const MpsTensor& t) {
  t.validate();
  Mat B = t.bond_by_phys();
  Mat W(B.rows(), B.rows());
  W.noalias() = B * B.adjoint();
  return W;
}

Mat peps_two_site_map(const PepsTensor& t, ProjectorOrientation orientation, double budget) {
  t.validate();
  if (orientation == ProjectorOrientation::mps) throw InvalidParameter("peps_two_site_map: need a PEPS orientation");
  const int d = t.d, D = t.D;
  const std::int64_t cols = checked_pow(D, 6, budget);
  if (double(d) * d * double(cols) > budget) throw ResourceLimit("PEPS two-site map exceeds memory budget");
  Mat Q = Mat::Zero(Eigen::Index(d) * d, cols);
  const bool horiz = orientation == ProjectorOrientation::peps_horizontal;
  for (int x1 = 0; x1 < d; ++x1)
    for (int x2 = 0; x2 < d; ++x2) {
      const Eigen::Index row = Eigen::Index(x1) * d + x2;
      for (std::int64_t c = 0; c < cols; ++c) {
        int idx[6];
        std::int64_t r = c;
        for (int q = 5; q >= 0; --q) {
          idx[q] = int(r % D);
          r /= D;
        }
        cplx acc = 0.0;
        if (horiz) {
          // (l, a, b | r', a', b'), left r = right l = m
          for (int m = 0; m < D; ++m) acc += t(x1, idx[0], m, idx[1], idx[2]) * t(x2, m, idx[3], idx[4], idx[5]);
        } else {
          // (l, r, a | l', r', b'), top b = bottom a = m
          for (int m = 0; m < D; ++m) acc += t(x1, idx[0], idx[1], idx[2], m) * t(x2, idx[3], idx[4], m, idx[5]);
        }
        Q(row, c) = acc;
      }
    }
  return Q;
}

GroundProjector ground_projector(const Mat& Q, ProjectorOrientation orientation) {
  const Eigen::Index n2 = Q.rows();
  const int d = int(std::lround(std::sqrt(double(n2))));
  if (Eigen::Index(d) * d != n2) throw InvalidParameter("ground_projector: rows of Q must be d^2");
  GroundProjector p;
  p.d = d;
  p.orientation = orientation;
  p.expected_rank = int(Q.cols());
  SvdResult svd = svd_thin(Q);
  p.singular_values = svd.s;
  p.rank = numerical_rank(svd.s, Q.rows(), Q.cols());
  p.rank_deficient = p.rank < std::min<Eigen::Index>(Q.cols(), n2);
  p.basis = svd.U.leftCols(p.rank);
  // P~ = scale Q Q^* = U (scale s^2) U^*, Pi = U_r U_r^*
  const double scale = std::sqrt(double(Q.cols()));
  double dist = 0.0;
  for (Eigen::Index i = 0; i < svd.s.size(); ++i) {
    const double v = scale * svd.s(i) * svd.s(i);
    dist = std::max(dist, i < p.rank ? std::abs(v - 1.0) : v);
  }
  p.ptilde_distance = dist;
  return p;
}

Mat projector_overlap(const GroundProjector& proj) {
  const int d = proj.d, r = proj.rank;
  const Mat& U = proj.basis;
  // C[(y', k), (y, k')] = sum_x conj(U[(y', x), k]) U[(x, y), k']
  Mat A1(Eigen::Index(d) * r, d), A2(d, Eigen::Index(d) * r);
  for (int y = 0; y < d; ++y)
    for (int x = 0; x < d; ++x)
      for (int k = 0; k < r; ++k) {
        A1(Eigen::Index(y) * r + k, x) = std::conj(U(Eigen::Index(y) * d + x, k));
        A2(x, Eigen::Index(y) * r + k) = U(Eigen::Index(x) * d + y, k);
      }
  Mat C(A1.rows(), A2.cols());
  C.noalias() = A1 * A2;
  Mat K(Eigen::Index(r) * d, Eigen::Index(r) * d);
  for (int k = 0; k < r; ++k)
    for (int y = 0; y < d; ++y)
      for (int kp = 0; kp < r; ++kp)
        for (int yp = 0; yp < d; ++yp)
          K(Eigen::Index(k) * d + y, Eigen::Index(kp) * d + yp) =
              C(Eigen::Index(yp) * r + k, Eigen::Index(y) * r + kp);
  return K;
}

namespace {

// For projections P, Q with range bases B1, B2: ||[P, Q]|| = max_i s_i sqrt(1 - s_i^2)
// over the cosines s_i of the principal angles, i.e. the singular values of B1^* B2.
double commutator_from_cosines(const RVec& s) {
  double best = 0.0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    const double c = std::min(1.0, std::max(0.0, s(i)));
    best = std::max(best, c * std::sqrt(std::max(0.0, 1.0 - c * c)));
  }
  return best;
}

// K = X Y in the layout K[(k, y), (y', k')], inner index (l, a, l', r') of size D^4,
// using the orthonormal range basis U = Q M^{-1/2}.
std::pair<Mat, Mat> mps_overlap_factor(const MpsTensor& t) {
  const int d = t.d, D = t.D, D2 = D * D;
  Mat Q = two_site_map(t);
  Mat M = Q.adjoint() * Q;
  auto [ev, V] = eigh(M);
  if (ev(0) <= 1e-12 * ev(D2 - 1)) throw DegenerateSample("two-site map is not injective", ev(0));
  Mat S = V * ev.cwiseInverse().cwiseSqrt().asDiagonal() * V.adjoint();  // M^{-1/2}, Hermitian
  Mat W = w_operator(t);
  const int J = D2 * D2;
  auto jidx = [&](int l, int a, int lp, int rp) { return ((l * D + a) * D + lp) * D + rp; };
  // Z[(l, a, l', r'), y, k] accumulated as X
  Mat X = Mat::Zero(Eigen::Index(D2) * d, J);
  Mat Y(J, Eigen::Index(d) * D2);
  for (int k = 0; k < D2; ++k)
    for (int l = 0; l < D; ++l)
      for (int a = 0; a < D; ++a)
        for (int lp = 0; lp < D; ++lp)
          for (int rp = 0; rp < D; ++rp) {
            // coefficient c_b = sum_r conj(S[(l, r), k]) W[(l', b), (a, r)]
            for (int b = 0; b < D; ++b) {
              cplx c = 0.0;
              for (int r = 0; r < D; ++r) c += std::conj(S(l * D + r, k)) * W(lp * D + b, a * D + r);
              if (c == 0.0) continue;
              for (int y = 0; y < d; ++y) X(Eigen::Index(k) * d + y, jidx(l, a, lp, rp)) += c * t(y, b, rp);
            }
          }
  for (int l = 0; l < D; ++l)
    for (int a = 0; a < D; ++a)
      for (int lp = 0; lp < D; ++lp)
        for (int rp = 0; rp < D; ++rp)
          for (int yp = 0; yp < d; ++yp)
            for (int kp = 0; kp < D2; ++kp)
              Y(jidx(l, a, lp, rp), Eigen::Index(yp) * D2 + kp) = std::conj(t(yp, l, a)) * S(lp * D + rp, kp);
  return {std::move(X), std::move(Y)};
}

}  // namespace

double commutator_norm(const GroundProjector& proj) {
  if (proj.rank == 0) return 0.0;
  if (double(proj.rank) * proj.d * double(proj.rank) * proj.d > kDefaultMemoryBudget)
    throw ResourceLimit("commutator_norm: overlap matrix exceeds memory budget");
  return commutator_from_cosines(singular_values(projector_overlap(proj)));
}

double commutator_norm_mps(const MpsTensor& t) {
  auto [X, Y] = mps_overlap_factor(t);
  const Eigen::Index J = X.cols();
  // thin factors only pay off (and only exist) when the outer dimension exceeds the inner one
  if (X.rows() <= J) return commutator_from_cosines(singular_values(X * Y));
  // singular values of X Y = those of Rx Ry^* for X = Qx Rx, Y^* = Qy Ry
  Eigen::HouseholderQR<Mat> qx(X), qy(Y.adjoint());
  Mat Rx = qx.matrixQR().topRows(J).triangularView<Eigen::Upper>();
  Mat Ry = qy.matrixQR().topRows(J).triangularView<Eigen::Upper>();
  return commutator_from_cosines(singular_values(Rx * Ry.adjoint()));
}

double commutator_norm_dense(const GroundProjector& proj) {
  const int d = proj.d;
  const double n = double(d) * d * d;
  if (n * n > kDefaultMemoryBudget) throw ResourceLimit("commutator_norm_dense: d^6 exceeds memory budget");
  Mat P = proj.projector();
  Mat Id = Mat::Identity(d, d);
  Mat A = Eigen::kroneckerProduct(P, Id);
  Mat B = Eigen::kroneckerProduct(Id, P);
  return operator_norm(A * B - B * A);
}

// ---------------------------------------------------------------------------

ParentHamiltonian::ParentHamiltonian(Geometry g, int N, int d, std::vector<GroundProjector> projectors,
                                     std::vector<Edge> edges)
    : geometry_(g), N_(N), d_(d), projectors_(std::move(projectors)), edges_(std::move(edges)) {
  if (N < 2 || d < 1) throw InvalidParameter("ParentHamiltonian: need N >= 2 and d >= 1");
  for (const auto& p : projectors_)
    if (p.d != d) throw InvalidParameter("ParentHamiltonian: projector site dimension mismatch");
  const int n = num_sites();
  for (const auto& e : edges_)
    if (e.s1 < 0 || e.s2 < 0 || e.s1 >= n || e.s2 >= n || e.s1 == e.s2 || e.projector < 0 ||
        e.projector >= int(projectors_.size()))
      throw InvalidParameter("ParentHamiltonian: malformed edge");
  dim_ = checked_pow(d, n);
  build_offsets(kDefaultMemoryBudget);
}

void ParentHamiltonian::build_offsets(double budget) {
  const int n = num_sites();
  const std::int64_t nb = dim_ / (std::int64_t(d_) * d_);
  if (double(nb) * double(edges_.size()) > budget) throw ResourceLimit("ParentHamiltonian: offsets exceed budget");
  std::vector<std::int64_t> stride(n);
  for (int s = 0; s < n; ++s) stride[s] = checked_pow(d_, n - 1 - s);
  bases_.clear();
  for (const auto& e : edges_) {
    std::vector<int> others;
    for (int s = 0; s < n; ++s)
      if (s != e.s1 && s != e.s2) others.push_back(s);
    std::vector<std::int64_t> off(nb);
    for (std::int64_t c = 0; c < nb; ++c) {
      std::int64_t r = c, o = 0;
      for (int q = int(others.size()) - 1; q >= 0; --q) {
        o += (r % d_) * stride[others[q]];
        r /= d_;
      }
      off[c] = o;
    }
    bases_.push_back(std::move(off));
  }
}

ParentHamiltonian ParentHamiltonian::ring(const MpsTensor& t, int N) {
  if (N < 2) throw InvalidParameter("ring: N >= 2");
  GroundProjector p = ground_projector(two_site_map(t), ProjectorOrientation::mps);
  std::vector<Edge> edges;
  for (int i = 0; i < N; ++i) edges.push_back({i, (i + 1) % N, 0});
  ParentHamiltonian H(Geometry::ring, N, t.d, {std::move(p)}, std::move(edges));
  H.mps_ = t;
  return H;
}

ParentHamiltonian ParentHamiltonian::torus(const PepsTensor& t, int N) {
  if (N < 2) throw InvalidParameter("torus: N >= 2");
  std::vector<GroundProjector> ps;
  ps.push_back(ground_projector(peps_two_site_map(t, ProjectorOrientation::peps_horizontal),
                                ProjectorOrientation::peps_horizontal));
  ps.push_back(ground_projector(peps_two_site_map(t, ProjectorOrientation::peps_vertical),
                                ProjectorOrientation::peps_vertical));
  std::vector<Edge> edges;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) edges.push_back({i * N + j, i * N + (j + 1) % N, 0});
  for (int j = 0; j < N; ++j)
    for (int i = 0; i < N; ++i) edges.push_back({i * N + j, ((i + 1) % N) * N + j, 1});
  return ParentHamiltonian(Geometry::torus, N, t.d, std::move(ps), std::move(edges));
}

void ParentHamiltonian::matvec(const Vec& in, Vec& out) const {
  if (in.size() != dim_) throw InvalidParameter("hamiltonian matvec: dimension mismatch");
  out = Vec::Zero(dim_);
  const int n = num_sites();
  const Eigen::Index dd = Eigen::Index(d_) * d_;
  Mat G, C;
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    const Edge& ed = edges_[e];
    const Mat& B = projectors_[ed.projector].basis;
    const std::int64_t st1 = checked_pow(d_, n - 1 - ed.s1), st2 = checked_pow(d_, n - 1 - ed.s2);
    const auto& off = bases_[e];
    const Eigen::Index nb = Eigen::Index(off.size());
    G.resize(dd, nb);
    for (Eigen::Index c = 0; c < nb; ++c)
      for (int x1 = 0; x1 < d_; ++x1)
        for (int x2 = 0; x2 < d_; ++x2) G(x1 * d_ + x2, c) = in(off[c] + x1 * st1 + x2 * st2);
    if (B.cols() > 0) {
      C.noalias() = B.adjoint() * G;
      G.noalias() -= B * C;
    }
    for (Eigen::Index c = 0; c < nb; ++c)
      for (int x1 = 0; x1 < d_; ++x1)
        for (int x2 = 0; x2 < d_; ++x2) out(off[c] + x1 * st1 + x2 * st2) += G(x1 * d_ + x2, c);
  }
}

Mat ParentHamiltonian::dense(double budget) const {
  if (double(dim_) * double(dim_) > budget) throw ResourceLimit("dense Hamiltonian exceeds budget");
  Mat H(dim_, dim_);
  Vec e = Vec::Zero(dim_), col;
  for (std::int64_t j = 0; j < dim_; ++j) {
    e(j) = 1.0;
    matvec(e, col);
    H.col(j) = col;
    e(j) = 0.0;
  }
  return (H + H.adjoint()) * 0.5;
}

namespace {

HamiltonianGap gram_gap(const ParentHamiltonian& H, double tol) {
  const int d = H.site_dim();
  const GroundProjector& p = H.projectors()[0];
  const int r = p.rank;
  const int n = r * d;
  // Ks acts in the (k, y) layout on both sides
  LinearOp ks, ksh;
  Mat Kexp, X, Y;
  if (H.mps_tensor()) {
    auto f = mps_overlap_factor(*H.mps_tensor());
    X = std::move(f.first);
    Y = std::move(f.second);
    // X rows (k, y); Y columns (y', k') -> permute to (k', y')
    ks = [&, d, r](const Vec& v, Vec& out) {
      Vec w(n);
      for (int k = 0; k < r; ++k)
        for (int y = 0; y < d; ++y) w(Eigen::Index(y) * r + k) = v(Eigen::Index(k) * d + y);
      out = X * (Y * w);
    };
    ksh = [&, d, r](const Vec& v, Vec& out) {
      Vec w = Y.adjoint() * (X.adjoint() * v);
      out.resize(n);
      for (int k = 0; k < r; ++k)
        for (int y = 0; y < d; ++y) out(Eigen::Index(k) * d + y) = w(Eigen::Index(y) * r + k);
    };
  } else {
    Kexp = projector_overlap(p);
    ks = [&](const Vec& v, Vec& out) { out = Kexp * v; };
    ksh = [&](const Vec& v, Vec& out) { out = Kexp.adjoint() * v; };
  }
  // 3 Id - G
  LinearOp op = [&, n](const Vec& v, Vec& out) {
    out.resize(3 * Eigen::Index(n));
    Vec a, b;
    Vec v1 = v.segment(0, n), v2 = v.segment(n, n), v3 = v.segment(2 * Eigen::Index(n), n);
    Vec g1 = v1, g2 = v2, g3 = v3;
    ks(v2, a);
    ksh(v3, b);
    g1 += a + b;
    ksh(v1, a);
    ks(v3, b);
    g2 += a + b;
    ks(v1, a);
    ksh(v2, b);
    g3 += a + b;
    out.segment(0, n) = 3.0 * v1 - g1;
    out.segment(n, n) = 3.0 * v2 - g2;
    out.segment(2 * Eigen::Index(n), n) = 3.0 * v3 - g3;
  };
  HermResult h = lowest_eigs_hermitian(op, 3 * n, 2, tol);
  HamiltonianGap g;
  g.ground_energy = h.values(0);
  g.gap = h.values(1);
  g.method = GapMethod::gram;
  g.residual = h.residuals.maxCoeff();
  return g;
}

}  // namespace

HamiltonianGap hamiltonian_gap(const ParentHamiltonian& H, GapMethod method, double tol, double krylov_limit) {
  const std::int64_t dim = H.dim();
  if (dim < 2) throw InvalidParameter("hamiltonian_gap: need at least two states");
  if (method == GapMethod::automatic) {
    if (double(dim) <= krylov_limit)
      method = GapMethod::krylov;
    else if (H.geometry() == Geometry::ring && H.N() == 3)
      method = GapMethod::gram;
    else
      throw ResourceLimit("hamiltonian_gap: dimension beyond Krylov budget");
  }
  HamiltonianGap g;
  g.method = method;
  switch (method) {
    case GapMethod::dense: {
      RVec ev = eigvalsh(H.dense());
      g.ground_energy = ev(0);
      g.gap = ev(1);
      return g;
    }
    case GapMethod::krylov: {
      LinearOp op = [&H](const Vec& in, Vec& out) { H.matvec(in, out); };
      HermResult h = lowest_eigs_hermitian(op, int(dim), 2, tol);
      g.ground_energy = h.values(0);
      g.gap = h.values(1);
      g.residual = h.residuals.maxCoeff();
      return g;
    }
    case GapMethod::gram:
      if (H.geometry() != Geometry::ring || H.N() != 3 || H.projectors().size() != 1)
        throw InvalidParameter("hamiltonian_gap: Gram reduction needs a ring of 3 sites");
      return gram_gap(H, tol);
    default:
      break;
  }
  throw InvalidParameter("hamiltonian_gap: unknown method");
}

}  // namespace rtn
