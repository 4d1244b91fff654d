#pragma once

#include <memory>
#include <mutex>
#include <utility>
#include <vector>

#include "rtn/spectral.hpp"
#include "rtn/tensors.hpp"

namespace rtn {

enum class TransferKind { mps, peps_column, peps_column_independent };

// T = prefactor * sum_x K_x (x) conj(K_x) acting on (C^D)^{(x)N} (x) (C^D)^{(x)N}
// with the ket factor first (row index = ket * dim + bra).
class TransferOperator {
 public:
  TransferOperator(TransferKind kind, int D, int N, std::vector<Mat> kraus, double prefactor);

  TransferKind kind() const { return kind_; }
  int D() const { return D_; }
  int N() const { return N_; }
  int dim() const { return dim_; }  // D^N
  double prefactor() const { return prefactor_; }
  const std::vector<Mat>& kraus() const { return kraus_; }

  // D^{2N} x D^{2N}, built once on first use (thread-safe)
  const Mat& matrix_form(double budget = kDefaultMemoryBudget) const;
  bool has_matrix_form() const;

  // vec(X) -> vec(T(X)) without the matrix form
  void apply_vec(const Vec& in, Vec& out) const;

 private:
  TransferKind kind_;
  int D_, N_, dim_;
  std::vector<Mat> kraus_;
  double prefactor_;
  struct Cache {
    std::once_flag once;
    Mat m;
    bool built = false;
  };
  std::shared_ptr<Cache> cache_;
};

TransferOperator mps_transfer(const MpsTensor& t);
TransferOperator peps_transfer(const PepsTensor& t, int N);
TransferOperator peps_transfer_independent(const std::vector<PepsTensor>& rows);

// The MPS tensor whose transfer operator T~ satisfies <psi^N|T_N|psi^N> = Tr(T~^N):
// physical index (x, l, r) of size d D^2, bonds (a, b), entries g / sqrt(D).
MpsTensor peps_reshaped_mps(const PepsTensor& t);

// prefactor * sum_x K X K^*; Hermitian inputs give symmetrised Hermitian output
Mat apply_cp(const TransferOperator& T, const Mat& X);
double overlap_psi(const TransferOperator& T);
// (||T(Id - psi psi*)||, ||(Id - psi psi*) T||)
std::pair<double, double> deflated_norms(const TransferOperator& T);

struct TransferGap {
  SpectralSummary summary;
  GapCertificate certificate;
};
TransferGap transfer_gap(const TransferOperator& T, const SpectralOptions& opt = {});

// row-major vectorisation vec(X)_{i*n+j} = X_ij, so (A (x) conj(B)) vec(X) = vec(A X B^*)
Vec vec_rm(const Mat& X);
Mat unvec_rm(const Vec& v, int n);

// Flip F: v_{(i,j)} -> v_{(j,i)}; conj(T) = F T F^* for transfer operators.
Mat flip_matrix(int n);

}  // namespace rtn
