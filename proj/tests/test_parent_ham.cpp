#include <algorithm>
#include <unsupported/Eigen/KroneckerProduct>

#include "rtn/parent_ham.hpp"
#include "rtn/transfer.hpp"
#include "test_util.hpp"

namespace rtn {
namespace {

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

TEST(TwoSiteMap, Scalar) {
  MpsTensor t = sample_mps_tensor(test::seed(1), 1, 1);
  Mat Q = two_site_map(t);
  EXPECT_NEAR(std::abs(Q(0, 0) - t.entries[0] * t.entries[0]), 0.0, 1e-15);
}

TEST(TwoSiteMap, ActionMatchesContraction) {
  const int d = 4, D = 2;
  MpsTensor t = sample_mps_tensor(test::seed(2), d, D);
  Mat Q = two_site_map(t);
  for (int k = 0; k < 20; ++k) {
    Vec u = test::random_unit(D * D, 100 + k);
    Vec out = Q * u;
    for (int x1 = 0; x1 < d; ++x1)
      for (int x2 = 0; x2 < d; ++x2) {
        cplx acc = 0;
        for (int l = 0; l < D; ++l)
          for (int a = 0; a < D; ++a)
            for (int r = 0; r < D; ++r) acc += t(x1, l, a) * t(x2, a, r) * u(l * D + r);
        EXPECT_NEAR(std::abs(out(x1 * d + x2) - acc), 0.0, 1e-12);
      }
  }
}

// M[(l,r),(l',r')] = sum_{x1,x2,a,a'} conj(g(x1,l,a) g(x2,a,r)) g(x1,l',a') g(x2,a',r')
TEST(TwoSiteMap, GramMatchesDiagramSum) {
  const int d = 3, D = 2;
  MpsTensor t = sample_mps_tensor(test::seed(3), d, D);
  Mat Q = two_site_map(t);
  Mat M = Q.adjoint() * Q;
  Mat ref = Mat::Zero(4, 4);
  for (int l = 0; l < D; ++l)
    for (int r = 0; r < D; ++r)
      for (int lp = 0; lp < D; ++lp)
        for (int rp = 0; rp < D; ++rp)
          for (int x1 = 0; x1 < d; ++x1)
            for (int x2 = 0; x2 < d; ++x2)
              for (int a = 0; a < D; ++a)
                for (int ap = 0; ap < D; ++ap)
                  ref(l * D + r, lp * D + rp) +=
                      std::conj(t(x1, l, a) * t(x2, a, r)) * t(x1, lp, ap) * t(x2, ap, rp);
  EXPECT_LT(test::max_abs(M - ref), 1e-14);
}

TEST(WOperator, ScalarAndWishartMean) {
  MpsTensor t1 = sample_mps_tensor(test::seed(4), 1, 1);
  EXPECT_NEAR(std::abs(w_operator(t1)(0, 0) - std::norm(t1.entries[0])), 0.0, 1e-15);
  const int d = 64, D = 2, n = 10000;
  Mat sum = Mat::Zero(4, 4);
  RMat sq = RMat::Zero(4, 4);
  for (int s = 0; s < n; ++s) {
    Mat W = w_operator(sample_mps_tensor(SeedSpec{4, std::uint64_t(s), "w"}, d, D)) * double(D);
    sum += W;
    sq += W.cwiseAbs2();
  }
  const Mat mean = sum / double(n);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const double sigma = std::sqrt(std::max(sq(i, j) / n - std::norm(mean(i, j)), 1e-30) / n);
      EXPECT_LE(std::abs(mean(i, j) - (i == j ? 1.0 : 0.0)), 4.0 * sigma);
    }
}

TEST(WOperator, ConcentrationFrequency) {
  const int d = 4096, D = 2, n = 500;
  int ok = 0;
  for (int s = 0; s < n; ++s) {
    Mat W = w_operator(sample_mps_tensor(test::seed(s, "wc"), d, D)) * double(D);
    if (operator_norm(W - Mat::Identity(4, 4)) <= 6.0 * D / std::sqrt(double(d))) ++ok;
  }
  EXPECT_GE(double(ok) / n, 1.0 - 2.0 * std::exp(-D * D / 4.0) - 0.05);
}

TEST(GroundProjector, RangeAndRank) {
  for (int s = 0; s < 100; ++s) {
    Mat Q = two_site_map(sample_mps_tensor(test::seed(s, "gp"), 5, 2));
    GroundProjector p = ground_projector(Q);
    ASSERT_EQ(p.rank, 4);
    EXPECT_FALSE(p.rank_deficient);
    EXPECT_LT(test::max_abs(p.projector() * Q - Q), 1e-12);
  }
}

TEST(GroundProjector, RejectsNonSquareRowCount) { EXPECT_THROW(ground_projector(Mat::Zero(5, 2)), InvalidParameter); }

TEST(GroundProjector, PtildeDistanceDecreasesWithD) {
  std::vector<double> med;
  for (int d : {16, 64, 256}) {
    std::vector<double> v;
    for (int s = 0; s < 30; ++s)
      v.push_back(ground_projector(two_site_map(sample_mps_tensor(test::seed(s, "pt"), d, 2))).ptilde_distance);
    med.push_back(median(v));
  }
  EXPECT_GT(med[0], med[1]);
  EXPECT_GT(med[1], med[2]);
}

TEST(CommutatorNorm, IdentityProjectorCommutes) {
  GroundProjector p;
  p.d = 3;
  p.rank = 9;
  p.expected_rank = 9;
  p.basis = Mat::Identity(9, 9);
  EXPECT_LT(commutator_norm(p), 1e-12);
  EXPECT_LT(commutator_norm_dense(p), 1e-12);
}

TEST(CommutatorNorm, ProductStateMatchesDense) {
  MpsTensor t = sample_mps_tensor(test::seed(5), 3, 1);
  GroundProjector p = ground_projector(two_site_map(t));
  EXPECT_EQ(p.rank, 1);
  // cosines within rounding of 1 resolve c sqrt(1 - c^2) only to about sqrt(machine epsilon)
  EXPECT_NEAR(commutator_norm(p), commutator_norm_dense(p), 1e-7);
}

TEST(CommutatorNorm, FastPathsMatchDense) {
  for (int s = 0; s < 10; ++s) {
    MpsTensor t = sample_mps_tensor(test::seed(s, "cm"), 3, 2);
    GroundProjector p = ground_projector(two_site_map(t));
    const double dense = commutator_norm_dense(p);
    EXPECT_NEAR(commutator_norm(p), dense, 1e-10);
    EXPECT_NEAR(commutator_norm_mps(t), dense, 1e-10);
  }
}

TEST(CommutatorNorm, RandomSubspaceMatchesDense) {
  const int d = 4;
  Mat Q = test::random_matrix(d * d, 5, 3);
  GroundProjector p = ground_projector(Q);
  EXPECT_NEAR(commutator_norm(p), commutator_norm_dense(p), 1e-10);
}

TEST(CommutatorNorm, DecreasesWithD) {
  std::vector<double> med;
  for (int d : {16, 64, 256}) {
    std::vector<double> v;
    for (int s = 0; s < 30; ++s) v.push_back(commutator_norm_mps(sample_mps_tensor(test::seed(s, "cmd"), d, 2)));
    med.push_back(median(v));
  }
  EXPECT_GT(med[0], med[1]);
  EXPECT_GT(med[1], med[2]);
}

TEST(PepsTwoSiteMap, Scalar) {
  PepsTensor t = sample_peps_tensor(test::seed(6), 1, 1);
  for (auto o : {ProjectorOrientation::peps_horizontal, ProjectorOrientation::peps_vertical}) {
    Mat Q = peps_two_site_map(t, o);
    ASSERT_EQ(Q.size(), 1);
    EXPECT_NEAR(std::abs(Q(0, 0) - t.entries[0] * t.entries[0]), 0.0, 1e-15);
  }
  EXPECT_THROW(peps_two_site_map(t, ProjectorOrientation::mps), InvalidParameter);
}

TEST(PepsTwoSiteMap, DegenerateBondIsProduct) {
  PepsTensor t = sample_peps_tensor(test::seed(7), 9, 1);
  Mat Q = peps_two_site_map(t, ProjectorOrientation::peps_horizontal);
  for (int x1 = 0; x1 < 9; ++x1)
    for (int x2 = 0; x2 < 9; ++x2)
      EXPECT_NEAR(std::abs(Q(x1 * 9 + x2, 0) - t.entries[x1] * t.entries[x2]), 0.0, 1e-15);
}

TEST(PepsTwoSiteMap, SpotEntriesMatchContraction) {
  const int d = 17, D = 2;
  PepsTensor t = sample_peps_tensor(test::seed(8), d, D);
  Mat H = peps_two_site_map(t, ProjectorOrientation::peps_horizontal);
  Mat V = peps_two_site_map(t, ProjectorOrientation::peps_vertical);
  // horizontal column (l,a,b | r',a',b') = (1,0,1 | 1,1,0); vertical (l,r,a | l',r',b') = (0,1,1 | 1,0,1)
  const int ch = 0b101110, cv = 0b011101;
  for (int x1 : {0, 5, 16})
    for (int x2 : {1, 16}) {
      cplx h = 0, v = 0;
      for (int m = 0; m < D; ++m) {
        h += t(x1, 1, m, 0, 1) * t(x2, m, 1, 1, 0);
        v += t(x1, 0, 1, 1, m) * t(x2, 1, 0, m, 1);
      }
      EXPECT_NEAR(std::abs(H(x1 * d + x2, ch) - h), 0.0, 1e-14);
      EXPECT_NEAR(std::abs(V(x1 * d + x2, cv) - v), 0.0, 1e-14);
    }
}

TEST(PepsTwoSiteMap, GenericRank) {
  for (int s = 0; s < 20; ++s) {
    PepsTensor t = sample_peps_tensor(test::seed(s, "prk"), 17, 2);
    EXPECT_EQ(ground_projector(peps_two_site_map(t, ProjectorOrientation::peps_horizontal)).rank, 64);
    EXPECT_EQ(ground_projector(peps_two_site_map(t, ProjectorOrientation::peps_vertical)).rank, 64);
  }
}

TEST(Hamiltonian, AnnihilatesSampledState) {
  for (int N : {3, 4, 5}) {
    MpsTensor t = sample_mps_tensor(test::seed(N, "gs"), 5, 2);
    ParentHamiltonian H = ParentHamiltonian::ring(t, N);
    Vec chi = mps_state(t, N).amplitudes, out;
    H.matvec(chi, out);
    EXPECT_LE(out.norm(), 1e-8 * chi.norm() * double(H.edges().size()));
  }
}

TEST(Hamiltonian, TorusAnnihilatesSampledState) {
  PepsTensor t = sample_peps_tensor(test::seed(9), 3, 1);
  ParentHamiltonian H = ParentHamiltonian::torus(t, 2);
  EXPECT_EQ(H.edges().size(), 8u);
  Vec chi = peps_state(t, 2).amplitudes, out;
  H.matvec(chi, out);
  EXPECT_LE(out.norm(), 1e-8 * chi.norm() * 8.0);
}

TEST(Hamiltonian, IdentityProjectorsGiveZeroOperator) {
  GroundProjector p;
  p.d = 2;
  p.rank = 4;
  p.expected_rank = 4;
  p.basis = Mat::Identity(4, 4);
  ParentHamiltonian H(Geometry::ring, 4, 2, {p}, {{0, 1, 0}, {1, 2, 0}, {2, 3, 0}, {3, 0, 0}});
  EXPECT_EQ(test::max_abs(H.dense()), 0.0);
}

TEST(Hamiltonian, DenseMatchesMatvec) {
  MpsTensor t = sample_mps_tensor(test::seed(10), 5, 2);
  ParentHamiltonian H = ParentHamiltonian::ring(t, 3);
  ASSERT_EQ(H.dim(), 125);
  Mat Hd = H.dense();
  EXPECT_LT(test::max_abs(Hd - Hd.adjoint()), 1e-14);
  for (int k = 0; k < 20; ++k) {
    Vec v = test::random_unit(125, 300 + k), out;
    H.matvec(v, out);
    EXPECT_LT((out - Hd * v).cwiseAbs().maxCoeff(), 1e-12);
  }
}

// dense sum of (1 - Pi) over ring edges built with Kronecker products
TEST(Hamiltonian, DenseMatchesKroneckerAssembly) {
  const int d = 3, N = 4;
  MpsTensor t = sample_mps_tensor(test::seed(11), d, 2);
  ParentHamiltonian H = ParentHamiltonian::ring(t, N);
  const Mat h = Mat::Identity(d * d, d * d) - H.projectors()[0].projector();
  const int n = 81;
  Mat ref = Mat::Zero(n, n);
  for (int i = 0; i < N - 1; ++i) {
    Mat L = Mat::Identity(int(std::pow(d, i)), int(std::pow(d, i)));
    Mat R = Mat::Identity(int(std::pow(d, N - i - 2)), int(std::pow(d, N - i - 2)));
    Mat lh = Eigen::kroneckerProduct(L, h);
    ref += Eigen::kroneckerProduct(lh, R);
  }
  // wrap-around edge (x_{N-1}, x_0)
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const int a0 = a / 27, am = (a / 3) % 9, aN = a % 3, b0 = b / 27, bm = (b / 3) % 9, bN = b % 3;
      if (am != bm) continue;
      ref(a, b) += h(aN * d + a0, bN * d + b0);
    }
  EXPECT_LT(test::max_abs(H.dense() - ref), 1e-13);
}

TEST(Hamiltonian, GapMethodsAgree) {
  for (int s = 0; s < 5; ++s) {
    MpsTensor t = sample_mps_tensor(test::seed(s, "hg"), 5, 2);
    ParentHamiltonian H = ParentHamiltonian::ring(t, 3);
    HamiltonianGap dense = hamiltonian_gap(H, GapMethod::dense);
    HamiltonianGap kry = hamiltonian_gap(H, GapMethod::krylov);
    HamiltonianGap gram = hamiltonian_gap(H, GapMethod::gram);
    EXPECT_LE(std::abs(dense.ground_energy), 1e-6);
    EXPECT_NEAR(dense.gap, kry.gap, 1e-6);
    EXPECT_NEAR(dense.gap, gram.gap, 1e-6);
    EXPECT_NEAR(kry.ground_energy, dense.ground_energy, 1e-6);
    EXPECT_GE(lambda_min_hermitian(H.dense()), -1e-10);
  }
}

TEST(Hamiltonian, TorusGapMethodsAgree) {
  PepsTensor t = sample_peps_tensor(test::seed(12), 3, 1);
  ParentHamiltonian H = ParentHamiltonian::torus(t, 2);
  HamiltonianGap dense = hamiltonian_gap(H, GapMethod::dense);
  HamiltonianGap kry = hamiltonian_gap(H, GapMethod::krylov);
  EXPECT_NEAR(dense.gap, kry.gap, 1e-6);
  EXPECT_LE(std::abs(kry.ground_energy), 1e-6);
}

TEST(Hamiltonian, GapTrendInPhysicalDimension) {
  std::vector<double> med;
  for (int d : {5, 16, 64}) {
    std::vector<double> v;
    for (int s = 0; s < 10; ++s)
      v.push_back(hamiltonian_gap(ParentHamiltonian::ring(sample_mps_tensor(test::seed(s, "trend"), d, 2), 3)).gap);
    med.push_back(median(v));
  }
  EXPECT_LE(med[0], med[1]);
  EXPECT_LE(med[1], med[2]);
}

TEST(Hamiltonian, Arguments) {
  MpsTensor t = sample_mps_tensor(test::seed(13), 5, 2);
  EXPECT_THROW(ParentHamiltonian::ring(t, 1), InvalidParameter);
  EXPECT_THROW(ParentHamiltonian::ring(sample_mps_tensor(test::seed(13), 40, 2), 6).dense(), ResourceLimit);
}

}  // namespace
}  // namespace rtn
