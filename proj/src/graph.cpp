#include "vsparse/graph.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace vsparse {

LabelVector make_labels(std::vector<int> labels, int num_classes) {
  if (num_classes < 1) throw std::invalid_argument("labels: need at least one class");
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 1 || labels[i] > num_classes) {
      std::ostringstream msg;
      msg << "labels: entry " << i << " = " << labels[i] << " outside [1," << num_classes << "]";
      throw std::invalid_argument(msg.str());
    }
  }
  return LabelVector{std::move(labels), num_classes};
}

std::vector<int> class_counts(const LabelVector& labels) {
  std::vector<int> counts(static_cast<std::size_t>(labels.num_classes), 0);
  for (int y : labels.labels) ++counts[static_cast<std::size_t>(y - 1)];
  return counts;
}

std::string Violation::describe() const {
  std::ostringstream msg;
  switch (kind) {
    case Kind::Asymmetric:
      msg << "asymmetric at (" << i << "," << j << ")";
      break;
    case Kind::NonzeroDiagonal:
      msg << "nonzero diagonal at " << i;
      break;
    case Kind::NonBinaryEntry:
      msg << "non-binary entry " << value << " at (" << i << "," << j << ")";
      break;
  }
  return msg.str();
}

ValidationReport validate(const AdjacencyMatrix& a) {
  ValidationReport report;
  const int n = a.n();
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (a.entries(i, j) != a.entries(j, i)) {
        report.violations.push_back({Violation::Kind::Asymmetric, i, j, a.entries(i, j)});
      }
    }
    if (!a.augmented && a.entries(i, i) != 0.0) {
      report.violations.push_back({Violation::Kind::NonzeroDiagonal, i, i, a.entries(i, i)});
    }
  }
  if (a.binary) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const double v = a.entries(i, j);
        if (v != 0.0 && v != 1.0) {
          report.violations.push_back({Violation::Kind::NonBinaryEntry, i, j, v});
        }
      }
    }
  }
  return report;
}

AdjacencyMatrix preprocess(const Matrix& raw) {
  if (raw.rows() != raw.cols()) {
    throw std::invalid_argument("preprocess: input matrix must be square");
  }
  const int n = static_cast<int>(raw.rows());
  AdjacencyMatrix out;
  out.entries = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double v = (raw(i, j) > 0.0 || raw(j, i) > 0.0) ? 1.0 : 0.0;
      out.entries(i, j) = v;
      out.entries(j, i) = v;
    }
  }
  return out;
}

AdjacencyMatrix diagonal_augment(const AdjacencyMatrix& a) {
  const int n = a.n();
  if (n < 2) throw std::invalid_argument("diagonal_augment: need n >= 2");
  if (a.augmented) throw std::invalid_argument("diagonal_augment: already augmented");
  AdjacencyMatrix out = a;
  for (int i = 0; i < n; ++i) {
    const double degree = a.entries.row(i).sum() - a.entries(i, i);
    out.entries(i, i) = degree / static_cast<double>(n - 1);
  }
  out.augmented = true;
  out.binary = false;
  return out;
}

std::int64_t edge_count(const AdjacencyMatrix& a) {
  const int n = a.n();
  std::int64_t edges = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (a.entries(i, j) != 0.0) ++edges;
    }
  }
  return edges;
}

double density(const AdjacencyMatrix& a) {
  const int n = a.n();
  if (n < 2) throw std::invalid_argument("density: need n >= 2");
  const double pairs = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
  return static_cast<double>(edge_count(a)) / pairs;
}

ColumnSplit test_column(const AdjacencyMatrix& a, int v) {
  const int n = a.n();
  if (v < 0 || v >= n) throw std::invalid_argument("test_column: vertex out of range");
  ColumnSplit split;
  split.training.binary = a.binary;
  split.training.augmented = a.augmented;
  split.training.entries = Matrix::Zero(n - 1, n - 1);
  split.phi = Vector::Zero(n - 1);
  split.train_to_original.reserve(static_cast<std::size_t>(n - 1));
  for (int i = 0; i < n; ++i) {
    if (i != v) split.train_to_original.push_back(i);
  }
  for (int i = 0; i < n - 1; ++i) {
    const int oi = split.train_to_original[static_cast<std::size_t>(i)];
    split.phi(i) = a.entries(oi, v);
    for (int j = 0; j < n - 1; ++j) {
      split.training.entries(i, j) = a.entries(oi, split.train_to_original[static_cast<std::size_t>(j)]);
    }
  }
  return split;
}

}  // namespace vsparse
