#pragma once

#include "vsparse/graph.hpp"
#include "vsparse/sparse.hpp"

namespace vsparse {

/// Sparse-representation decision for one test column: per-class
/// reconstruction residuals r_k = ||phi - D beta_k||_2 where beta_k keeps
/// only the class-k coefficients, prediction = argmin (lowest class on ties).
struct SrcDecision {
  int predicted = 0;
  Vector residuals;  // length K
  SparseRepresentation representation;
  bool degenerate = false;  // zero test column, fell back to majority class
};

SrcDecision src_classify(const Dictionary& dict, const Vector& phi, int sparsity,
                         OmpVariant variant = OmpVariant::Plain);

/// k-nearest-neighbour on embedded points. Vote ties break by smaller total
/// distance of the tied class among the k neighbours, then lower class
/// index; equal distances rank by training index.
struct KnnModel {
  Matrix points;  // n x d
  std::vector<int> labels;
  int num_classes = 0;
  int k = 1;
};

KnnModel knn_fit(const Matrix& points, const LabelVector& labels, int k);
int knn_classify(const KnnModel& model, const Vector& z);

/// Linear discriminant analysis with a pooled within-class covariance,
/// ridge-regularized by lambda * (trace/d) * I, empirical log priors.
struct LdaModel {
  Matrix means;          // K x d
  Matrix sigma_inverse;  // d x d
  Vector log_priors;     // length K
  int num_classes = 0;
};

LdaModel lda_fit(const Matrix& points, const LabelVector& labels, double ridge = 1e-6);
int lda_classify(const LdaModel& model, const Vector& z);

}  // namespace vsparse
