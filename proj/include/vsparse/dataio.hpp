#pragma once

#include "vsparse/graph.hpp"

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace vsparse {

/// A graph file as parsed: duplicate edges and self-loops are preserved so
/// that preprocess() can clean them explicitly.
struct RawDataset {
  int n = 0;
  std::vector<std::pair<int, int>> edges;
  std::vector<std::string> vertex_class;  // per-vertex class attribute ("" when absent)
  bool has_classes = false;
  std::string format;
};

/// Whitespace- or comma-separated "u v" lines; '#' and '%' start comments.
/// index_base subtracts 0 or 1 from every endpoint.
RawDataset read_edge_list(const std::string& path, int index_base = 0);

/// GML subset: a graph block containing node [ id ... (value|label) ... ]
/// and edge [ source ... target ... ] records. Unknown keys and nested
/// blocks are skipped. The node class attribute prefers `value` over
/// `label`.
RawDataset read_gml(const std::string& path);

/// Raw (possibly asymmetric) dense adjacency counts from the parsed edges.
Matrix to_dense(const RawDataset& raw);

/// Class names in index order: class k is names[k-1].
struct LabelMapping {
  std::vector<std::string> names;
};

struct LabelsWithMapping {
  LabelVector labels;
  LabelMapping mapping;
};

/// One label per line, or "vertex,label" pairs (0-based vertices covering
/// 0..n-1). Distinct label strings map to 1..K in first-appearance order.
LabelsWithMapping read_labels(const std::string& path);

/// Map the per-vertex class attribute of a dataset to contiguous labels.
LabelsWithMapping labels_from_dataset(const RawDataset& raw);

void write_edge_list(const std::string& path, const AdjacencyMatrix& a,
                     const std::vector<std::string>& header_comments = {});
void write_labels(const std::string& path, const LabelVector& labels,
                  const LabelMapping& mapping = {},
                  const std::vector<std::string>& header_comments = {});

/// RFC-style CSV: fields containing commas, quotes, or newlines are quoted
/// with doubled inner quotes; rows end in LF; reals print with '.' decimal
/// separator and 17 significant digits.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}

  void comment(const std::string& text);
  void row(const std::vector<std::string>& cells);

  static std::string field(const std::string& cell);
  static std::string number(double v);
  static std::string number(int v);

 private:
  std::ostream& out_;
};

}  // namespace vsparse
