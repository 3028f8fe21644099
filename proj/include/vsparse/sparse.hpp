#pragma once

#include "vsparse/graph.hpp"

#include <vector>

namespace vsparse {

/// Training columns re-arranged in class order and scaled to unit l2 norm.
/// Zero columns (isolated vertices) cannot be normalized; they stay zero,
/// are flagged, and are never selected by the pursuit.
struct Dictionary {
  Matrix columns;               // n_rows x n_cols
  std::vector<int> class_of;    // per column, non-decreasing
  std::vector<int> original_index;  // column -> index in the source matrix
  std::vector<bool> excluded;   // zero columns
  int num_classes = 0;
  bool normalized = true;

  int n_cols() const { return static_cast<int>(columns.cols()); }
};

/// Build the class-ordered dictionary from a training adjacency matrix.
/// Columns are grouped by class (stable by original index within a class)
/// and l2-normalized unless normalize is false (ablation mode).
Dictionary build_dictionary(const Matrix& a_train, const LabelVector& labels, bool normalize = true);
Dictionary build_dictionary(const AdjacencyMatrix& a_train, const LabelVector& labels,
                            bool normalize = true);

struct SparseRepresentation {
  std::vector<int> support;       // selected columns, in selection order
  Vector beta;                    // dense, zero off support
  double residual_norm = 0.0;
  std::vector<double> residual_history;  // norm after each selection
  bool no_positive_candidate = false;    // non-negative variant found nothing
};

/// Greedy orthogonal matching pursuit: repeatedly select the column most
/// correlated with the residual (|dot|, ties to the lowest index), refit by
/// least squares on the support, stop after `sparsity` picks or when the
/// residual norm falls below `epsilon`.
SparseRepresentation omp(const Dictionary& dict, const Vector& phi, int sparsity,
                         double epsilon = 1e-10);

/// Non-negative variant: selection by the largest positive correlation, and
/// the support refit enforces beta >= 0 (active-set least squares; columns
/// clamped to zero leave the support). If the first pick already has no
/// positive candidate the result is flagged and the residual stays phi.
SparseRepresentation omp_nonnegative(const Dictionary& dict, const Vector& phi, int sparsity,
                                     double epsilon = 1e-10);

enum class OmpVariant { Plain, NonNegative };

SparseRepresentation solve_sparse(const Dictionary& dict, const Vector& phi, int sparsity,
                                  OmpVariant variant, double epsilon = 1e-10);

}  // namespace vsparse
