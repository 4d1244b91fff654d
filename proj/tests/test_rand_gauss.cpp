#include <set>

#include "rtn/rand_gauss.hpp"
#include "test_util.hpp"

namespace rtn {
namespace {

TEST(RandGauss, ZeroVarianceGivesZeroMatrix) {
  Mat m = sample_complex_gaussian_matrix(test::seed(1), 1, 1, 0.0);
  ASSERT_EQ(m.rows(), 1);
  EXPECT_EQ(m(0, 0), cplx(0.0, 0.0));
}

TEST(RandGauss, SameSeedIsBitIdentical) {
  Mat a = sample_complex_gaussian_matrix(test::seed(7), 5, 3, 2.0);
  Mat b = sample_complex_gaussian_matrix(test::seed(7), 5, 3, 2.0);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 3; ++j) {
      EXPECT_EQ(a(i, j).real(), b(i, j).real());
      EXPECT_EQ(a(i, j).imag(), b(i, j).imag());
    }
}

TEST(RandGauss, DifferentStreamsDiffer) {
  SeedSpec s{1, 2, "a"};
  EXPECT_NE(s.derive(), s.with_label("b").derive());
  EXPECT_NE(s.derive(), (SeedSpec{1, 3, "a"}).derive());
  EXPECT_NE(s.derive(), (SeedSpec{2, 2, "a"}).derive());
  std::set<std::uint64_t> seen;
  for (std::uint64_t t = 0; t < 10000; ++t) seen.insert(SeedSpec{0, t, "x"}.derive());
  EXPECT_EQ(seen.size(), 10000u);
}

TEST(RandGauss, NegativeVarianceOrShapeRejected) {
  EXPECT_THROW(sample_complex_gaussian_matrix(test::seed(1), 1, 1, -1.0), InvalidParameter);
  EXPECT_THROW(sample_complex_gaussian_matrix(test::seed(1), -1, 1, 1.0), InvalidParameter);
}

TEST(RandGauss, UnitVarianceMeanSquareOverFreshSeeds) {
  double s = 0.0, re2 = 0.0;
  const int n = 100000;
  for (int t = 0; t < n; ++t) {
    cplx g = sample_complex_gaussian_matrix(SeedSpec{99, std::uint64_t(t), "mc"}, 1, 1, 1.0)(0, 0);
    s += std::norm(g);
    re2 += g.real() * g.real();
  }
  EXPECT_GE(s / n, 0.98);
  EXPECT_LE(s / n, 1.02);
  // real part carries half the variance
  EXPECT_NEAR(re2 / n, 0.5, 0.02);
}

TEST(RandGauss, MpsScalarCase) {
  MpsTensor t = sample_mps_tensor(test::seed(3), 1, 1);
  ASSERT_EQ(t.entries.size(), 1u);
  EXPECT_TRUE(std::isfinite(std::abs(t.entries[0])));
}

TEST(RandGauss, MpsExpectedNormIsD) {
  double s = 0.0;
  const int n = 10000;
  for (int t = 0; t < n; ++t) s += sample_mps_tensor(SeedSpec{5, std::uint64_t(t), "mps"}, 3, 2).norm2();
  EXPECT_NEAR(s / n / 2.0, 1.0, 0.05);
}

TEST(RandGauss, PepsExpectedNormIsDSquared) {
  double s = 0.0;
  const int n = 4000;
  for (int t = 0; t < n; ++t) s += sample_peps_tensor(SeedSpec{6, std::uint64_t(t), "peps"}, 3, 2).norm2();
  EXPECT_NEAR(s / n / 4.0, 1.0, 0.05);
}

TEST(RandGauss, TensorsDeterministic) {
  MpsTensor a = sample_mps_tensor(test::seed(11), 4, 3), b = sample_mps_tensor(test::seed(11), 4, 3);
  EXPECT_EQ(a.entries, b.entries);
  PepsTensor p = sample_peps_tensor(test::seed(11), 3, 2), q = sample_peps_tensor(test::seed(11), 3, 2);
  EXPECT_EQ(p.entries, q.entries);
}

TEST(RandGauss, InvalidDimensions) {
  EXPECT_THROW(sample_mps_tensor(test::seed(1), 0, 2), InvalidParameter);
  EXPECT_THROW(sample_peps_tensor(test::seed(1), 2, 0), InvalidParameter);
}

}  // namespace
}  // namespace rtn
