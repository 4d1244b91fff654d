#pragma once

#include <string>

#include "rtn/rand_gauss.hpp"

namespace rtn {

// Amplitudes of a state on num_sites sites of dimension site_dim. Site 0 is
// the most significant digit of the flat index.
struct StateVector {
  int site_dim = 0;
  int num_sites = 0;
  Vec amplitudes;

  double norm2() const { return amplitudes.squaredNorm(); }
};

struct RankedMap {
  Mat map;
  RVec singular_values;
  int rank = 0;
};

// max(rows, cols) * eps * s1 rule
int numerical_rank(const RVec& sv, Eigen::Index rows, Eigen::Index cols);
RankedMap with_rank(Mat m);

StateVector mps_state(const MpsTensor& t, int N, double budget = kDefaultMemoryBudget);
// Torus of N x N sites, site (i, j) -> index i*N + j, columns contracted left to right.
StateVector peps_state(const PepsTensor& t, int N, double budget = kDefaultMemoryBudget);

// rows (x_1..x_L), columns (a_1, a_{L+1})
RankedMap mps_injectivity_map(const MpsTensor& t, int L, double budget = kDefaultMemoryBudget);
// K rows by L columns patch. Rows: physical indices row-major over the patch.
// Columns: (left legs top->bottom, right legs top->bottom, top legs left->right,
// bottom legs left->right).
RankedMap peps_injectivity_map(const PepsTensor& t, int K, int L, double budget = kDefaultMemoryBudget);

MpsTensor block_mps(const MpsTensor& t, int L, double budget = kDefaultMemoryBudget);

// Column matrix of an N-site PEPS column for physical string x (x_0 most significant):
// sum over the periodic vertical bonds of (x) slice(x_i, a_{i-1}, a_i), raw entries.
Mat peps_column_matrix(const std::vector<const PepsTensor*>& rows, const std::vector<int>& x);

// Optional dump: "index,re,im" per amplitude.
void write_state_csv(const StateVector& s, const std::string& path);

}  // namespace rtn
