#include "rtn/tensors.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>

#include <unsupported/Eigen/KroneckerProduct>

#include "rtn/spectral.hpp"

namespace rtn {

namespace {

// Visit every word x_0..x_{L-1} over alphabet d (x_0 most significant) with the
// ordered product of slices; prefix products are reused between neighbours.
template <class F>
void for_each_word_product(const std::vector<Mat>& slices, int L, F&& f) {
  const int d = int(slices.size());
  const Eigen::Index D = slices[0].rows();
  std::vector<int> x(L, 0);
  std::vector<Mat> prefix(L, Mat(D, D));
  prefix[0] = slices[0];
  for (int k = 1; k < L; ++k) prefix[k].noalias() = prefix[k - 1] * slices[0];
  std::int64_t idx = 0;
  while (true) {
    f(idx, x, prefix[L - 1]);
    ++idx;
    int k = L - 1;
    while (k >= 0 && x[k] == d - 1) x[k--] = 0;
    if (k < 0) break;
    ++x[k];
    for (int j = k; j < L; ++j) {
      if (j == 0)
        prefix[0] = slices[x[0]];
      else
        prefix[j].noalias() = prefix[j - 1] * slices[x[j]];
    }
  }
}

std::vector<Mat> mps_slices(const MpsTensor& t) {
  std::vector<Mat> s(t.d);
  for (int x = 0; x < t.d; ++x) s[x] = t.slice(x);
  return s;
}

}  // namespace

int numerical_rank(const RVec& sv, Eigen::Index rows, Eigen::Index cols) {
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  const double thr = double(std::max(rows, cols)) * std::numeric_limits<double>::epsilon() * sv(0);
  int r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > thr) ++r;
  return r;
}

RankedMap with_rank(Mat m) {
  RankedMap out;
  out.singular_values = singular_values(m);
  out.rank = numerical_rank(out.singular_values, m.rows(), m.cols());
  out.map = std::move(m);
  return out;
}

StateVector mps_state(const MpsTensor& t, int N, double budget) {
  t.validate();
  if (N < 1) throw InvalidParameter("mps_state: N >= 1");
  const std::int64_t dim = checked_pow(t.d, N, budget);
  StateVector s{t.d, N, Vec(dim)};
  auto slices = mps_slices(t);
  for_each_word_product(slices, N, [&](std::int64_t i, const std::vector<int>&, const Mat& P) {
    s.amplitudes(i) = P.trace();
  });
  return s;
}

Mat peps_column_matrix(const std::vector<const PepsTensor*>& rows, const std::vector<int>& x) {
  const int N = int(rows.size());
  const int D = rows[0]->D;
  // P[u][a]: partial Kronecker product with open top bond u of row 0 and open bond a below row i
  std::vector<Mat> P(std::size_t(D) * D);
  for (int u = 0; u < D; ++u)
    for (int a = 0; a < D; ++a) P[u * D + a] = rows[0]->slice(x[0], u, a);
  for (int i = 1; i < N; ++i) {
    std::vector<Mat> Q(std::size_t(D) * D);
    const Eigen::Index n = P[0].rows();
    std::vector<Mat> S(std::size_t(D) * D);
    for (int a = 0; a < D; ++a)
      for (int b = 0; b < D; ++b) S[a * D + b] = rows[i]->slice(x[i], a, b);
    for (int u = 0; u < D; ++u)
      for (int b = 0; b < D; ++b) {
        Mat acc = Mat::Zero(n * D, n * D);
        for (int a = 0; a < D; ++a) acc += Eigen::kroneckerProduct(P[u * D + a], S[a * D + b]);
        Q[u * D + b] = std::move(acc);
      }
    P.swap(Q);
  }
  Mat A = Mat::Zero(P[0].rows(), P[0].cols());
  for (int u = 0; u < D; ++u) A += P[u * D + u];
  return A;
}

StateVector peps_state(const PepsTensor& t, int N, double budget) {
  t.validate();
  if (N < 1) throw InvalidParameter("peps_state: N >= 1");
  const std::int64_t dim = checked_pow(t.d, N * N, budget);
  const std::int64_t ncol = checked_pow(t.d, N, budget);
  checked_pow(t.D, 2 * N, budget);
  // Column matrices on raw entries. The column normalisation 1/(d^{N/2} D^N) of the
  // unit-variance convention is exactly absorbed by the raw variance 1/(d D^2).
  std::vector<const PepsTensor*> rows(N, &t);
  std::vector<Mat> cols(ncol);
  std::vector<int> x(N, 0);
  for (std::int64_t c = 0; c < ncol; ++c) {
    std::int64_t r = c;
    for (int i = N - 1; i >= 0; --i) {
      x[i] = int(r % t.d);
      r /= t.d;
    }
    cols[c] = peps_column_matrix(rows, x);
  }
  StateVector s{t.d, N * N, Vec(dim)};
  // place value of site (i, j) in the flat row-major index
  std::vector<std::int64_t> place(N * N);
  for (int k = 0; k < N * N; ++k) place[k] = checked_pow(t.d, N * N - 1 - k, budget);
  for_each_word_product(cols, N, [&](std::int64_t, const std::vector<int>& cw, const Mat& P) {
    std::int64_t flat = 0;
    for (int j = 0; j < N; ++j) {
      std::int64_t c = cw[j];
      for (int i = N - 1; i >= 0; --i) {
        flat += (c % t.d) * place[i * N + j];
        c /= t.d;
      }
    }
    s.amplitudes(flat) = P.trace();
  });
  return s;
}

RankedMap mps_injectivity_map(const MpsTensor& t, int L, double budget) {
  t.validate();
  if (L < 1) throw InvalidParameter("mps_injectivity_map: L >= 1");
  const std::int64_t rows = checked_pow(t.d, L, budget);
  if (double(rows) * t.D * t.D > budget) throw ResourceLimit("injectivity map exceeds memory budget");
  Mat m(rows, t.D * t.D);
  auto slices = mps_slices(t);
  const int D = t.D;
  for_each_word_product(slices, L, [&](std::int64_t i, const std::vector<int>&, const Mat& P) {
    for (int a = 0; a < D; ++a)
      for (int b = 0; b < D; ++b) m(i, a * D + b) = P(a, b);
  });
  return with_rank(std::move(m));
}

RankedMap peps_injectivity_map(const PepsTensor& t, int K, int L, double budget) {
  t.validate();
  if (K < 1 || L < 1) throw InvalidParameter("peps_injectivity_map: K, L >= 1");
  const int d = t.d, D = t.D;
  const std::int64_t rows = checked_pow(d, K * L, budget);
  const std::int64_t cols = checked_pow(D, 2 * (K + L), budget);
  if (double(rows) * double(cols) > budget) throw ResourceLimit("injectivity map exceeds memory budget");
  // bond variables: h(i, j) j=0..L, v(i, j) i=0..K
  const int nh = K * (L + 1), nv = (K + 1) * L;
  auto H = [&](int i, int j) { return i * (L + 1) + j; };
  auto Vb = [&](int i, int j) { return nh + i * L + j; };
  const int nb = nh + nv;
  const std::int64_t nconf = checked_pow(D, nb, budget);
  Mat m = Mat::Zero(rows, cols);
  std::vector<int> bond(nb, 0);
  std::vector<int> x(K * L, 0);
  for (std::int64_t c = 0; c < nconf; ++c) {
    std::int64_t r = c;
    for (int q = nb - 1; q >= 0; --q) {
      bond[q] = int(r % D);
      r /= D;
    }
    std::int64_t col = 0;
    for (int i = 0; i < K; ++i) col = col * D + bond[H(i, 0)];
    for (int i = 0; i < K; ++i) col = col * D + bond[H(i, L)];
    for (int j = 0; j < L; ++j) col = col * D + bond[Vb(0, j)];
    for (int j = 0; j < L; ++j) col = col * D + bond[Vb(K, j)];
    for (std::int64_t p = 0; p < rows; ++p) {
      std::int64_t rr = p;
      for (int s = K * L - 1; s >= 0; --s) {
        x[s] = int(rr % d);
        rr /= d;
      }
      cplx prod = 1.0;
      for (int i = 0; i < K && prod != 0.0; ++i)
        for (int j = 0; j < L; ++j)
          prod *= t(x[i * L + j], bond[H(i, j)], bond[H(i, j + 1)], bond[Vb(i, j)], bond[Vb(i + 1, j)]);
      m(p, col) += prod;
    }
  }
  return with_rank(std::move(m));
}

MpsTensor block_mps(const MpsTensor& t, int L, double budget) {
  t.validate();
  if (L < 1) throw InvalidParameter("block_mps: L >= 1");
  const std::int64_t dL = checked_pow(t.d, L, budget);
  if (double(dL) * t.D * t.D > budget) throw ResourceLimit("blocked tensor exceeds memory budget");
  MpsTensor out(int(dL), t.D);
  auto slices = mps_slices(t);
  const int D = t.D;
  for_each_word_product(slices, L, [&](std::int64_t i, const std::vector<int>&, const Mat& P) {
    for (int l = 0; l < D; ++l)
      for (int r = 0; r < D; ++r) out(int(i), l, r) = P(l, r);
  });
  return out;
}

void write_state_csv(const StateVector& s, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw InvalidParameter("cannot open " + path);
  f << "index,re,im\n" << std::setprecision(17);
  for (Eigen::Index i = 0; i < s.amplitudes.size(); ++i)
    f << i << ',' << s.amplitudes(i).real() << ',' << s.amplitudes(i).imag() << '\n';
}

}  // namespace rtn
