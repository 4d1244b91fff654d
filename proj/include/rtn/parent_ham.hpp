#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "rtn/spectral.hpp"
#include "rtn/tensors.hpp"

namespace rtn {

enum class ProjectorOrientation { mps, peps_vertical, peps_horizontal };

// Projector onto V = range(Q) on two sites, Pi = basis basis^*.
struct GroundProjector {
  int d = 0;
  int rank = 0;
  int expected_rank = 0;  // number of columns of Q (D^2 or D^6)
  bool rank_deficient = false;
  Mat basis;  // d^2 x rank, orthonormal columns
  RVec singular_values;
  // || scale * Q Q^* - Pi ||_op with scale = sqrt(cols of Q) (D for MPS, D^3 for PEPS)
  double ptilde_distance = 0.0;
  ProjectorOrientation orientation = ProjectorOrientation::mps;

  Mat projector() const { return basis * basis.adjoint(); }
};

// Q[(x1, x2), (l, r)] = sum_a g(x1, l, a) g(x2, a, r)
Mat two_site_map(const MpsTensor& t);
// W[(l, r), (l', r')] = sum_x g(x, l, r) conj(g(x, l', r'))
Mat w_operator(const MpsTensor& t);
// horizontal: left r contracted with right l, columns (l, a, b | r', a', b')
// vertical: top b contracted with bottom a, columns (l, r, a | l', r', b')
Mat peps_two_site_map(const PepsTensor& t, ProjectorOrientation orientation,
                      double budget = kDefaultMemoryBudget);

GroundProjector ground_projector(const Mat& Q, ProjectorOrientation orientation = ProjectorOrientation::mps);

// || [Pi_12 (x) Id, Id (x) Pi_23] ||_op, via the overlap K = B1^* B2 of the two ranges.
double commutator_norm(const GroundProjector& proj);
// Same quantity for an MPS tensor through a rank-D^4 factorisation of K; scales to large d.
double commutator_norm_mps(const MpsTensor& t);
// Dense 3-site reference, d^3 x d^3 matrices.
double commutator_norm_dense(const GroundProjector& proj);

enum class Geometry { ring, torus };

struct Edge {
  int s1 = 0, s2 = 0;  // the projector acts on (x_{s1}, x_{s2}) in this order
  int projector = 0;   // index into ParentHamiltonian::projectors
};

class ParentHamiltonian {
 public:
  static ParentHamiltonian ring(const MpsTensor& t, int N);
  // torus of N x N sites (i, j) -> i*N + j; projectors: 0 horizontal, 1 vertical
  static ParentHamiltonian torus(const PepsTensor& t, int N);
  // from explicit projectors (used for testing and reductions)
  ParentHamiltonian(Geometry g, int N, int d, std::vector<GroundProjector> projectors, std::vector<Edge> edges);

  Geometry geometry() const { return geometry_; }
  int N() const { return N_; }
  int site_dim() const { return d_; }
  int num_sites() const { return geometry_ == Geometry::ring ? N_ : N_ * N_; }
  std::int64_t dim() const { return dim_; }
  const std::vector<GroundProjector>& projectors() const { return projectors_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::optional<MpsTensor>& mps_tensor() const { return mps_; }

  // sum_e (v - B_e B_e^* v) on the two sites of edge e
  void matvec(const Vec& in, Vec& out) const;
  Mat dense(double budget = 1.7e7) const;

 private:
  Geometry geometry_;
  int N_, d_;
  std::int64_t dim_;
  std::vector<GroundProjector> projectors_;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::int64_t>> bases_;  // per edge: offsets with both sites at 0
  std::optional<MpsTensor> mps_;

  void build_offsets(double budget);
};

enum class GapMethod { automatic, dense, krylov, gram };

struct HamiltonianGap {
  double ground_energy = 0.0;
  double gap = 0.0;  // second-lowest eigenvalue
  GapMethod method = GapMethod::krylov;
  double residual = 0.0;
};

// automatic: Krylov on the full space up to krylov_limit, beyond that (ring N=3
// only) the Gram reduction: the lowest eigenvalues of H are 3 minus the top
// eigenvalues of [[I,K,K*],[K*,I,K],[K,K*,I]] with K the projector overlap.
HamiltonianGap hamiltonian_gap(const ParentHamiltonian& H, GapMethod method = GapMethod::automatic,
                               double tol = 1e-9, double krylov_limit = 2e6);

// K[(k, y), (k', y')] = <B1 col (k, y) | B2 col (k', y')> with B1 = U (x) Id, B2 = Id (x) U;
// k indexes the basis, y the free site.
Mat projector_overlap(const GroundProjector& proj);

}  // namespace rtn
