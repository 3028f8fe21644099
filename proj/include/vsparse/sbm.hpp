#pragma once

#include "vsparse/graph.hpp"

#include <cstdint>
#include <vector>

namespace vsparse {

/// Stochastic blockmodel parameters: K blocks, symmetric block communication
/// matrix B with entries in [0,1], prior pi on the unit simplex. The
/// model-space contamination transforms at rate 0 or 1 produce priors with
/// zero entries; those models carry `degenerate` instead of being rejected.
struct BlockModel {
  int num_blocks = 0;
  Matrix block_probs;  // K x K
  Vector prior;        // length K
  bool degenerate = false;
};

/// Throws std::invalid_argument when B is not symmetric in [0,1] or pi is
/// not a probability vector (positive entries unless degenerate).
void validate_model(const BlockModel& model);

BlockModel make_model(Matrix block_probs, Vector prior);

/// Draw labels iid from the prior, then each edge {i,j} independently with
/// probability B[Y_i][Y_j]. Deterministic in (model, n, seed).
LabeledGraph sample(const BlockModel& model, int n, std::uint64_t seed);

/// P(i,j) = B[Y_i][Y_j] for all pairs including the diagonal.
Matrix communication_matrix(const BlockModel& model, const LabelVector& labels);

/// Occlusion in model space: blocks double, the contaminated copy loses all
/// within-set connectivity.
///   B_occ = [[B, B], [B, 0]],   pi_occ = ((1-rate) pi, rate pi)
BlockModel occlude_model(const BlockModel& model, double rate);

/// Linkage reversion in model space: the contaminated copy's within-set
/// connectivity is complemented.
///   B_rev = [[B, B], [B, J-B]],  pi_rev = ((1-rate) pi, rate pi)
BlockModel reverse_model(const BlockModel& model, double rate);

/// Graph-space occlusion: select round(rate*n) vertices uniformly without
/// replacement and delete every edge among them. Edges between selected and
/// unselected vertices are untouched. The set is recorded in provenance.
LabeledGraph occlude_graph(const LabeledGraph& g, double rate, std::uint64_t seed);

/// Graph-space linkage reversion: complement the adjacency among the
/// selected set, diagonal kept zero.
LabeledGraph reverse_graph(const LabeledGraph& g, double rate, std::uint64_t seed);

/// Occlude at rate p, then reverse at rate p on an independently drawn set.
LabeledGraph mixed_contaminate(const LabeledGraph& g, double rate, std::uint64_t seed);

/// First and second moments of the block-column variables Q_q, where Q_q
/// takes value B[k][q] with probability pi_k:
///   m1[q]      = sum_k pi_k B[k][q]
///   m2[q]      = sum_k pi_k B[k][q]^2
///   cross[q,r] = sum_k pi_k B[k][q] B[k][r]
///   rho[q,r]   = cross[q,r] / sqrt(m2[q] m2[r])
struct MomentTable {
  Vector m1;
  Vector m2;
  Matrix cross;
  Matrix rho;
};

/// Throws when some m2[q] == 0 (all-zero block column: correlations
/// undefined).
MomentTable moments(const BlockModel& model);

/// Result of the sparse-classifier consistency condition: for each ordered
/// pair (q, r), r != q, whether
///   rho_qr^2 * m2[r]/m2[q]  <  m1[r]/m1[q]
/// holds strictly. When it holds for every pair, adjacency columns are
/// asymptotically most correlated within their own class.
struct ConditionReport {
  Matrix lhs;   // rho^2 * m2[r]/m2[q]
  Matrix rhs;   // m1[r]/m1[q]
  std::vector<std::vector<bool>> pairwise;  // [q][r], diagonal vacuously true
  std::vector<bool> satisfied_for_class;
  bool overall = true;
};

ConditionReport check_src_condition(const BlockModel& model);

/// Asymptotic un-centered correlation limits of adjacency columns:
/// diagonal (q,q) = m2[q]/m1[q], off-diagonal (q,r) = cross[q,r]/sqrt(m1[q] m1[r]).
Matrix asymptotic_correlations(const BlockModel& model);

/// Factor B = nu nu^T when B is positive semidefinite; otherwise only the
/// inertia is reported. Rows of nu are the per-block latent positions.
struct LatentPositionResult {
  bool psd = false;
  int rank = 0;  // equals nu.cols() when psd
  Matrix nu;     // K x rank, empty when not psd
  int n_pos = 0;
  int n_neg = 0;
  int n_zero = 0;
};

LatentPositionResult block_latent_positions(const BlockModel& model);

/// Count of singular values above n * eps * sigma_max (symmetric input).
int numerical_rank(const Matrix& m);

/// (positive, negative, zero) eigenvalue counts of a symmetric matrix, with
/// the same zero threshold as numerical_rank.
struct Inertia {
  int n_pos = 0;
  int n_neg = 0;
  int n_zero = 0;
};

Inertia inertia(const Matrix& m);

}  // namespace vsparse
