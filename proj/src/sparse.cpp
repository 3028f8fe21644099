#include "vsparse/sparse.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace vsparse {

Dictionary build_dictionary(const Matrix& a_train, const LabelVector& labels, bool normalize) {
  const int n_rows = static_cast<int>(a_train.rows());
  const int n_cols = static_cast<int>(a_train.cols());
  if (labels.n() != n_cols) {
    throw std::invalid_argument("build_dictionary: one label per column required");
  }

  std::vector<int> order(static_cast<std::size_t>(n_cols));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return labels.labels[static_cast<std::size_t>(a)] < labels.labels[static_cast<std::size_t>(b)];
  });

  Dictionary dict;
  dict.columns = Matrix(n_rows, n_cols);
  dict.class_of.resize(static_cast<std::size_t>(n_cols));
  dict.original_index.resize(static_cast<std::size_t>(n_cols));
  dict.excluded.assign(static_cast<std::size_t>(n_cols), false);
  dict.num_classes = labels.num_classes;
  dict.normalized = normalize;

  for (int c = 0; c < n_cols; ++c) {
    const int src = order[static_cast<std::size_t>(c)];
    Vector col = a_train.col(src);
    const double norm = col.norm();
    if (norm == 0.0) {
      dict.excluded[static_cast<std::size_t>(c)] = true;
    } else if (normalize) {
      col /= norm;
    }
    dict.columns.col(c) = col;
    dict.class_of[static_cast<std::size_t>(c)] = labels.labels[static_cast<std::size_t>(src)];
    dict.original_index[static_cast<std::size_t>(c)] = src;
  }
  return dict;
}

Dictionary build_dictionary(const AdjacencyMatrix& a_train, const LabelVector& labels,
                            bool normalize) {
  return build_dictionary(a_train.entries, labels, normalize);
}

namespace {

// Least squares for phi over the supported columns via normal equations.
// A diagonal jitter retries the factorization near rank deficiency.
Vector solve_support(const Matrix& gram, const Vector& rhs) {
  Eigen::LLT<Matrix> llt(gram);
  if (llt.info() == Eigen::Success) {
    return llt.solve(rhs);
  }
  const int s = static_cast<int>(gram.rows());
  const double jitter = 1e-12 * std::max(1.0, gram.trace() / s);
  Eigen::LLT<Matrix> retry(gram + jitter * Matrix::Identity(s, s));
  if (retry.info() != Eigen::Success) {
    throw std::runtime_error("omp: support system is numerically singular");
  }
  return retry.solve(rhs);
}

struct PursuitState {
  std::vector<int> support;
  Matrix gram;       // support x support
  Vector dict_phi;   // <d_j, phi> for j in support
};

void append_to_support(PursuitState& state, const Dictionary& dict, const Vector& phi, int pick) {
  const int s = static_cast<int>(state.support.size());
  Matrix gram(s + 1, s + 1);
  gram.topLeftCorner(s, s) = state.gram;
  for (int i = 0; i < s; ++i) {
    const double g = dict.columns.col(state.support[static_cast<std::size_t>(i)]).dot(dict.columns.col(pick));
    gram(i, s) = g;
    gram(s, i) = g;
  }
  gram(s, s) = dict.columns.col(pick).squaredNorm();
  state.gram.swap(gram);

  Vector rhs(s + 1);
  rhs.head(s) = state.dict_phi;
  rhs(s) = dict.columns.col(pick).dot(phi);
  state.dict_phi.swap(rhs);

  state.support.push_back(pick);
}

void remove_from_support(PursuitState& state, int position) {
  const int s = static_cast<int>(state.support.size());
  Matrix gram(s - 1, s - 1);
  Vector rhs(s - 1);
  int ri = 0;
  for (int i = 0; i < s; ++i) {
    if (i == position) continue;
    rhs(ri) = state.dict_phi(i);
    int rj = 0;
    for (int j = 0; j < s; ++j) {
      if (j == position) continue;
      gram(ri, rj) = state.gram(i, j);
      ++rj;
    }
    ++ri;
  }
  state.gram.swap(gram);
  state.dict_phi.swap(rhs);
  state.support.erase(state.support.begin() + position);
}

SparseRepresentation run_pursuit(const Dictionary& dict, const Vector& phi_in, int sparsity,
                                 double epsilon, bool nonnegative) {
  if (sparsity < 1) throw std::invalid_argument("omp: sparsity must be >= 1");
  const int n_cols = dict.n_cols();
  bool any_candidate = false;
  for (int c = 0; c < n_cols; ++c) {
    if (!dict.excluded[static_cast<std::size_t>(c)]) any_candidate = true;
  }
  if (!any_candidate) throw std::invalid_argument("omp: dictionary has no usable columns");

  Vector phi = phi_in;
  const double phi_norm = phi.norm();
  if (phi_norm > 0.0) phi /= phi_norm;

  SparseRepresentation rep;
  rep.beta = Vector::Zero(n_cols);
  if (phi_norm == 0.0) {
    rep.residual_norm = 0.0;
    return rep;
  }

  PursuitState state;
  std::vector<bool> ever_selected(static_cast<std::size_t>(n_cols), false);
  Vector residual = phi;
  Vector coeffs;

  for (int iter = 0; iter < sparsity; ++iter) {
    // Correlations with the current residual; excluded and previously
    // selected columns are out of the running.
    int pick = -1;
    double best = 0.0;
    const Vector corr = dict.columns.transpose() * residual;
    for (int c = 0; c < n_cols; ++c) {
      if (dict.excluded[static_cast<std::size_t>(c)] || ever_selected[static_cast<std::size_t>(c)]) continue;
      const double score = nonnegative ? corr(c) : std::abs(corr(c));
      if (score > best) {
        best = score;
        pick = c;
      }
    }
    if (pick < 0) {
      if (nonnegative && state.support.empty()) {
        rep.no_positive_candidate = true;
        rep.residual_norm = residual.norm();
      }
      break;
    }

    ever_selected[static_cast<std::size_t>(pick)] = true;
    append_to_support(state, dict, phi, pick);
    coeffs = solve_support(state.gram, state.dict_phi);

    if (nonnegative) {
      // Active-set projection: drop the most negative coefficient and
      // refit until every remaining one is non-negative.
      while (true) {
        int worst = -1;
        double most_negative = 0.0;
        for (int i = 0; i < coeffs.size(); ++i) {
          if (coeffs(i) < most_negative) {
            most_negative = coeffs(i);
            worst = i;
          }
        }
        if (worst < 0) break;
        remove_from_support(state, worst);
        if (state.support.empty()) {
          coeffs.resize(0);
          break;
        }
        coeffs = solve_support(state.gram, state.dict_phi);
      }
    }

    residual = phi;
    for (std::size_t i = 0; i < state.support.size(); ++i) {
      residual -= coeffs(static_cast<int>(i)) * dict.columns.col(state.support[i]);
    }
    rep.residual_history.push_back(residual.norm());
    if (residual.norm() < epsilon) break;
  }

  rep.support = state.support;
  for (std::size_t i = 0; i < state.support.size(); ++i) {
    rep.beta(state.support[i]) = coeffs(static_cast<int>(i));
  }
  rep.residual_norm = residual.norm();
  if (nonnegative && state.support.empty() && rep.residual_history.empty()) {
    rep.no_positive_candidate = true;
  }
  return rep;
}

}  // namespace

SparseRepresentation omp(const Dictionary& dict, const Vector& phi, int sparsity, double epsilon) {
  return run_pursuit(dict, phi, sparsity, epsilon, false);
}

SparseRepresentation omp_nonnegative(const Dictionary& dict, const Vector& phi, int sparsity,
                                     double epsilon) {
  return run_pursuit(dict, phi, sparsity, epsilon, true);
}

SparseRepresentation solve_sparse(const Dictionary& dict, const Vector& phi, int sparsity,
                                  OmpVariant variant, double epsilon) {
  return variant == OmpVariant::Plain ? omp(dict, phi, sparsity, epsilon)
                                      : omp_nonnegative(dict, phi, sparsity, epsilon);
}

}  // namespace vsparse
