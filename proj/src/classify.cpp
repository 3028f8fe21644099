#include "vsparse/classify.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace vsparse {

namespace {

int majority_class(const std::vector<int>& class_of, int num_classes) {
  std::vector<int> counts(static_cast<std::size_t>(num_classes), 0);
  for (int y : class_of) ++counts[static_cast<std::size_t>(y - 1)];
  int best = 1;
  for (int k = 2; k <= num_classes; ++k) {
    if (counts[static_cast<std::size_t>(k - 1)] > counts[static_cast<std::size_t>(best - 1)]) best = k;
  }
  return best;
}

}  // namespace

SrcDecision src_classify(const Dictionary& dict, const Vector& phi, int sparsity,
                         OmpVariant variant) {
  const int num_classes = dict.num_classes;
  SrcDecision decision;
  decision.residuals = Vector::Zero(num_classes);

  if (phi.norm() == 0.0) {
    decision.degenerate = true;
    decision.predicted = majority_class(dict.class_of, num_classes);
    decision.representation.beta = Vector::Zero(dict.n_cols());
    return decision;
  }

  Vector unit_phi = phi / phi.norm();
  decision.representation = solve_sparse(dict, unit_phi, sparsity, variant);

  double best = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= num_classes; ++k) {
    Vector reconstruction = Vector::Zero(unit_phi.size());
    for (int idx : decision.representation.support) {
      if (dict.class_of[static_cast<std::size_t>(idx)] == k) {
        reconstruction += decision.representation.beta(idx) * dict.columns.col(idx);
      }
    }
    const double r = (unit_phi - reconstruction).norm();
    decision.residuals(k - 1) = r;
    if (r < best) {
      best = r;
      decision.predicted = k;
    }
  }
  return decision;
}

KnnModel knn_fit(const Matrix& points, const LabelVector& labels, int k) {
  const int n = static_cast<int>(points.rows());
  if (n == 0) throw std::invalid_argument("knn_fit: empty training set");
  if (labels.n() != n) throw std::invalid_argument("knn_fit: one label per point required");
  if (k < 1 || k > n) throw std::invalid_argument("knn_fit: need 1 <= k <= n");
  return KnnModel{points, labels.labels, labels.num_classes, k};
}

int knn_classify(const KnnModel& model, const Vector& z) {
  const int n = static_cast<int>(model.points.rows());
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> dist(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    dist[static_cast<std::size_t>(i)] = (model.points.row(i).transpose() - z).norm();
  }
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (dist[static_cast<std::size_t>(a)] != dist[static_cast<std::size_t>(b)]) {
      return dist[static_cast<std::size_t>(a)] < dist[static_cast<std::size_t>(b)];
    }
    return a < b;
  });

  std::vector<int> votes(static_cast<std::size_t>(model.num_classes), 0);
  std::vector<double> total_distance(static_cast<std::size_t>(model.num_classes), 0.0);
  for (int i = 0; i < model.k; ++i) {
    const int idx = order[static_cast<std::size_t>(i)];
    const int y = model.labels[static_cast<std::size_t>(idx)];
    ++votes[static_cast<std::size_t>(y - 1)];
    total_distance[static_cast<std::size_t>(y - 1)] += dist[static_cast<std::size_t>(idx)];
  }

  int best = 1;
  for (int k = 2; k <= model.num_classes; ++k) {
    const int kv = votes[static_cast<std::size_t>(k - 1)];
    const int bv = votes[static_cast<std::size_t>(best - 1)];
    if (kv > bv) {
      best = k;
    } else if (kv == bv && kv > 0 &&
               total_distance[static_cast<std::size_t>(k - 1)] <
                   total_distance[static_cast<std::size_t>(best - 1)]) {
      best = k;
    }
  }
  return best;
}

LdaModel lda_fit(const Matrix& points, const LabelVector& labels, double ridge) {
  const int n = static_cast<int>(points.rows());
  const int d = static_cast<int>(points.cols());
  const int num_classes = labels.num_classes;
  if (n < 2) throw std::invalid_argument("lda_fit: need at least 2 points");
  if (labels.n() != n) throw std::invalid_argument("lda_fit: one label per point required");

  const std::vector<int> counts = class_counts(labels);
  for (int k = 0; k < num_classes; ++k) {
    if (counts[static_cast<std::size_t>(k)] == 0) {
      throw std::invalid_argument("lda_fit: every class must be represented");
    }
  }

  LdaModel model;
  model.num_classes = num_classes;
  model.means = Matrix::Zero(num_classes, d);
  for (int i = 0; i < n; ++i) {
    model.means.row(labels.labels[static_cast<std::size_t>(i)] - 1) += points.row(i);
  }
  for (int k = 0; k < num_classes; ++k) {
    model.means.row(k) /= static_cast<double>(counts[static_cast<std::size_t>(k)]);
  }

  Matrix scatter = Matrix::Zero(d, d);
  for (int i = 0; i < n; ++i) {
    const Vector centered =
        points.row(i).transpose() - model.means.row(labels.labels[static_cast<std::size_t>(i)] - 1).transpose();
    scatter += centered * centered.transpose();
  }
  Matrix sigma = scatter / static_cast<double>(std::max(n - num_classes, 1));

  // Ridge scale from the covariance trace; unit fallback when the
  // within-class scatter vanishes (e.g. one point per class).
  double scale = sigma.trace() / static_cast<double>(d);
  if (!(scale > 0.0)) scale = 1.0;
  sigma += ridge * scale * Matrix::Identity(d, d);

  Eigen::LLT<Matrix> llt(sigma);
  if (llt.info() != Eigen::Success) {
    throw std::runtime_error("lda_fit: covariance is singular even after ridge regularization");
  }
  model.sigma_inverse = llt.solve(Matrix::Identity(d, d));

  model.log_priors = Vector::Zero(num_classes);
  for (int k = 0; k < num_classes; ++k) {
    model.log_priors(k) = std::log(static_cast<double>(counts[static_cast<std::size_t>(k)]) / n);
  }
  return model;
}

int lda_classify(const LdaModel& model, const Vector& z) {
  int best = 1;
  double best_score = -std::numeric_limits<double>::infinity();
  for (int k = 1; k <= model.num_classes; ++k) {
    const Vector mu = model.means.row(k - 1).transpose();
    const Vector sigma_inv_mu = model.sigma_inverse * mu;
    const double score = z.dot(sigma_inv_mu) - 0.5 * mu.dot(sigma_inv_mu) + model.log_priors(k - 1);
    if (score > best_score) {
      best_score = score;
      best = k;
    }
  }
  return best;
}

}  // namespace vsparse
