#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace vsparse {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Adjacency of a simple graph: symmetric, hollow, binary. After diagonal
/// imputation the diagonal holds degree/(n-1) and `augmented` is set.
struct AdjacencyMatrix {
  Matrix entries;
  bool binary = true;
  bool augmented = false;

  int n() const { return static_cast<int>(entries.rows()); }
};

/// Per-vertex class labels in {1,...,K}.
struct LabelVector {
  std::vector<int> labels;
  int num_classes = 0;

  int n() const { return static_cast<int>(labels.size()); }
};

/// Throws if any label falls outside [1, K].
LabelVector make_labels(std::vector<int> labels, int num_classes);

/// Count of occurrences of each class, indexed 0..K-1.
std::vector<int> class_counts(const LabelVector& labels);

/// One contamination pass applied to a graph.
struct ContaminationRecord {
  std::string type;  // "occlusion" | "reversion"
  double rate = 0.0;
  std::uint64_t seed = 0;
  std::vector<int> vertices;  // selected set, ascending
};

struct Provenance {
  std::string model;
  std::optional<std::uint64_t> seed;
  std::vector<ContaminationRecord> contamination;
};

struct LabeledGraph {
  AdjacencyMatrix adjacency;
  LabelVector labels;
  Provenance provenance;
};

struct Violation {
  enum class Kind { Asymmetric, NonzeroDiagonal, NonBinaryEntry };
  Kind kind;
  int i = 0;
  int j = 0;
  double value = 0.0;

  std::string describe() const;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool valid() const { return violations.empty(); }
};

/// Report every violated simple-graph invariant (asymmetry, nonzero
/// diagonal, non-binary entry) with the offending indices. Report-only.
ValidationReport validate(const AdjacencyMatrix& a);

/// Clean an arbitrary square non-negative matrix into a simple-graph
/// adjacency: an edge {i,j} exists iff raw(i,j) > 0 or raw(j,i) > 0,
/// the diagonal is dropped. Idempotent.
AdjacencyMatrix preprocess(const Matrix& raw);

/// Impute the diagonal as degree(i)/(n-1). Requires a valid binary hollow
/// input and n >= 2.
AdjacencyMatrix diagonal_augment(const AdjacencyMatrix& a);

std::int64_t edge_count(const AdjacencyMatrix& a);

/// Edge count over C(n,2). Requires n >= 2.
double density(const AdjacencyMatrix& a);

/// Training view for one held-out vertex: the order-(n-1) submatrix with row
/// and column v deleted, plus v's adjacency column restricted to the
/// remaining vertices.
struct ColumnSplit {
  AdjacencyMatrix training;
  Vector phi;
  std::vector<int> train_to_original;  // training index -> original vertex
};

ColumnSplit test_column(const AdjacencyMatrix& a, int v);

}  // namespace vsparse
