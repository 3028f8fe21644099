#pragma once

#include "vsparse/graph.hpp"
#include "vsparse/sbm.hpp"

#include <Eigen/SVD>

namespace vsparse::testing {

/// The two-block benchmark model used across the tests:
/// B = [[0.7, 0.32], [0.32, 0.75]], pi = (0.4, 0.6).
inline BlockModel sim_params() {
  Matrix b(2, 2);
  b << 0.7, 0.32, 0.32, 0.75;
  Vector pi(2);
  pi << 0.4, 0.6;
  return make_model(b, pi);
}

/// Best orthogonal alignment: the Q minimizing ||A Q - B||_F.
inline Matrix procrustes_rotation(const Matrix& a, const Matrix& b) {
  Eigen::JacobiSVD<Matrix> svd(a.transpose() * b, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().transpose();
}

/// Class means of embedded points (rows), one row per class 1..K.
inline Matrix class_means(const Matrix& points, const LabelVector& labels) {
  Matrix means = Matrix::Zero(labels.num_classes, points.cols());
  std::vector<int> counts(static_cast<std::size_t>(labels.num_classes), 0);
  for (int i = 0; i < points.rows(); ++i) {
    means.row(labels.labels[static_cast<std::size_t>(i)] - 1) += points.row(i);
    ++counts[static_cast<std::size_t>(labels.labels[static_cast<std::size_t>(i)] - 1)];
  }
  for (int k = 0; k < labels.num_classes; ++k) {
    means.row(k) /= static_cast<double>(counts[static_cast<std::size_t>(k)]);
  }
  return means;
}

}  // namespace vsparse::testing
