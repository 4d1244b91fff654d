#pragma once
// Thin LAPACKE wrappers; the only translation unit set that sees lapacke.h.

#include <complex>
#include <vector>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include "rtn/types.hpp"

namespace rtn::lapack {

inline std::vector<cplx> eigenvalues(Mat a) {
  const lapack_int n = lapack_int(a.rows());
  std::vector<cplx> w(n);
  lapack_int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'N', n, a.data(), n, w.data(), nullptr, 1, nullptr, 1);
  if (info != 0) throw NumericalFailure("zgeev failed, info=" + std::to_string(info));
  return w;
}

// eigenvalues plus right eigenvectors (columns)
inline std::pair<std::vector<cplx>, Mat> eig(Mat a) {
  const lapack_int n = lapack_int(a.rows());
  std::vector<cplx> w(n);
  Mat vr(n, n);
  lapack_int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'V', n, a.data(), n, w.data(), nullptr, 1, vr.data(), n);
  if (info != 0) throw NumericalFailure("zgeev failed, info=" + std::to_string(info));
  return {w, vr};
}

inline RVec singular_values(Mat a) {
  const lapack_int m = lapack_int(a.rows()), n = lapack_int(a.cols());
  RVec s(std::min(m, n));
  lapack_int info = LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'N', m, n, a.data(), m, s.data(), nullptr, 1, nullptr, 1);
  if (info != 0) throw NumericalFailure("zgesdd failed, info=" + std::to_string(info));
  return s;
}

// thin SVD: U (m x k), s (k), V (n x k), k = min(m, n)
struct Svd {
  Mat U;
  RVec s;
  Mat V;
};
inline Svd svd_thin(Mat a) {
  const lapack_int m = lapack_int(a.rows()), n = lapack_int(a.cols());
  const lapack_int k = std::min(m, n);
  Svd out;
  out.U.resize(m, k);
  out.s.resize(k);
  Mat vt(k, n);
  lapack_int info =
      LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'S', m, n, a.data(), m, out.s.data(), out.U.data(), m, vt.data(), k);
  if (info != 0) throw NumericalFailure("zgesdd failed, info=" + std::to_string(info));
  out.V = vt.adjoint();
  return out;
}

// ascending eigenvalues of a Hermitian matrix (lower triangle used)
inline std::pair<RVec, Mat> eigh(Mat a, bool vectors) {
  const lapack_int n = lapack_int(a.rows());
  RVec w(n);
  lapack_int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, vectors ? 'V' : 'N', 'L', n, a.data(), n, w.data());
  if (info != 0) throw NumericalFailure("zheevd failed, info=" + std::to_string(info));
  if (!vectors) a.resize(0, 0);
  return {w, a};
}

// complex Schur form A = Z T Z*
inline void schur(Mat& t, Mat& z) {
  const lapack_int n = lapack_int(t.rows());
  std::vector<cplx> w(n);
  z.resize(n, n);
  lapack_int sdim = 0;
  lapack_int info =
      LAPACKE_zgees(LAPACK_COL_MAJOR, 'V', 'N', nullptr, n, t.data(), n, &sdim, w.data(), z.data(), n);
  if (info != 0) throw NumericalFailure("zgees failed, info=" + std::to_string(info));
}

// move the selected diagonal entries of T to the leading block
inline void reorder_schur(Mat& t, Mat& z, const std::vector<int>& selected) {
  const lapack_int n = lapack_int(t.rows());
  std::vector<lapack_logical> sel(n, 0);
  for (int i : selected) sel[i] = 1;
  std::vector<cplx> w(n);
  lapack_int m = 0;
  double s = 0, sep = 0;
  lapack_int info =
      LAPACKE_ztrsen(LAPACK_COL_MAJOR, 'N', 'V', sel.data(), n, t.data(), n, z.data(), n, w.data(), &m, &s, &sep);
  if (info != 0) throw NumericalFailure("ztrsen failed, info=" + std::to_string(info));
}

}  // namespace rtn::lapack
