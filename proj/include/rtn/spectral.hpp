#pragma once

#include <functional>
#include <string>
#include <vector>

#include "rtn/types.hpp"

namespace rtn {

enum class SolveMethod { dense, iterative };

struct SpectralSummary {
  cplx lambda1{0.0, 0.0};
  double lambda2_modulus = 0.0;
  double gap = 0.0;  // |lambda1| - lambda2_modulus
  double s1 = 0.0;
  double s2 = 0.0;
  SolveMethod method = SolveMethod::dense;
  double residual = 0.0;
};

struct GapCertificate {
  double delta = 0.0;
  double epsilon = 0.0;
  double eta = 0.0;
  double bound = 0.0;
  bool applicable = false;
};

struct SpectralOptions {
  int dense_threshold = 4096;
  double tol_dense = 1e-10;
  double tol_iterative = 1e-8;
  int max_iter = 5000;
  int krylov_dim = 40;
};

// Linear operator given only through its action.
using LinearOp = std::function<void(const Vec& in, Vec& out)>;

std::vector<cplx> eigs_by_modulus(const Mat& M);
// general eigendecomposition (unsorted): values and right eigenvectors as columns
std::pair<std::vector<cplx>, Mat> eig_general(const Mat& M);
SpectralSummary upper_gap(const Mat& M, const SpectralOptions& opt = {});
// matrix-free variant; always iterative
SpectralSummary upper_gap(const LinearOp& apply, const LinearOp& apply_adjoint, int dim,
                          const SpectralOptions& opt = {});

RVec singular_values(const Mat& M);
// thin SVD M = U diag(s) V^*, s descending
struct SvdResult {
  Mat U;
  RVec s;
  Mat V;
};
SvdResult svd_thin(const Mat& M);
double operator_norm(const Mat& M);
// Hermitian eigenvalues, ascending (Hermitized first; rejects non-Hermitian input)
RVec eigvalsh(const Mat& A, double herm_tol = 1e-8);
// Hermitian eigendecomposition, ascending; (values, vectors)
std::pair<RVec, Mat> eigh(const Mat& A, double herm_tol = 1e-8);
double lambda_min_hermitian(const Mat& A, double herm_tol = 1e-8);

// R(M)_{ij,kl} = M_{ik,jl}, M of size nm x nm -> n^2 x m^2
Mat realign(const Mat& M, int n, int m);
Vec max_entangled(int D);

// Largest-modulus eigenpairs of a general operator (Krylov-Schur).
struct EigResult {
  std::vector<cplx> values;
  Mat vectors;  // columns, unit norm
  RVec residuals;
  int iterations = 0;
};
EigResult largest_modulus_eigs(const LinearOp& apply, int dim, int count, double tol,
                               int krylov_dim = 40, int max_restarts = 500, const Vec* start = nullptr);

// Smallest algebraic eigenvalues of a Hermitian operator; ascending.
struct HermResult {
  RVec values;
  Mat vectors;
  RVec residuals;
  int iterations = 0;
};
HermResult lowest_eigs_hermitian(const LinearOp& apply, int dim, int count, double tol,
                                 int krylov_dim = 40, int max_restarts = 500, const Vec* start = nullptr);

// Dominant eigenpair by power iteration.
struct PowerResult {
  cplx value;
  Vec vector;
  double residual = 0.0;
  int iterations = 0;
};
PowerResult power_iteration(const LinearOp& apply, int dim, double tol, int max_iter,
                            const Vec* start = nullptr);

GapCertificate gap_certificate(const Mat& M, const Mat& cp_identity_image, const Vec& phi);

}  // namespace rtn
