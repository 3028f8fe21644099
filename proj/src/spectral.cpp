#include "vsparse/spectral.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace vsparse {

EigenDecomposition eig_sym(const Matrix& m, EigenOrdering ordering) {
  if (m.rows() != m.cols()) throw std::invalid_argument("eig_sym: matrix must be square");
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-10) throw std::invalid_argument("eig_sym: matrix is not symmetric");

  Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (m + m.transpose()));
  if (solver.info() != Eigen::Success) throw std::runtime_error("eig_sym: decomposition failed");
  const Vector raw_values = solver.eigenvalues();  // ascending
  const int n = static_cast<int>(raw_values.size());

  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  auto key = [&](int i) {
    return ordering == EigenOrdering::Magnitude ? std::abs(raw_values(i)) : raw_values(i);
  };
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    const double ka = key(a);
    const double kb = key(b);
    if (ka != kb) return ka > kb;
    if (raw_values(a) != raw_values(b)) return raw_values(a) > raw_values(b);
    return a < b;
  });

  EigenDecomposition out;
  out.ordering = ordering;
  out.values = Vector(n);
  out.vectors = Matrix(n, n);
  for (int c = 0; c < n; ++c) {
    const int src = order[static_cast<std::size_t>(c)];
    out.values(c) = raw_values(src);
    Vector v = solver.eigenvectors().col(src);
    int arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v(arg) < 0.0) v = -v;
    out.vectors.col(c) = v;
  }
  return out;
}

Embedding ase(const Matrix& a, int d_hat, EigenOrdering ordering) {
  const int n = static_cast<int>(a.rows());
  if (d_hat < 1 || d_hat > n) throw std::invalid_argument("ase: d_hat out of range");
  const EigenDecomposition eig = eig_sym(a, ordering);

  Embedding out;
  out.d_hat = d_hat;
  out.ordering = ordering;
  out.eigenvalues = eig.values.head(d_hat);
  out.z = Matrix(n, d_hat);
  for (int c = 0; c < d_hat; ++c) {
    const double lambda = out.eigenvalues(c);
    if (lambda == 0.0) out.zero_columns.push_back(c);
    out.z.col(c) = eig.vectors.col(c) * std::sqrt(std::abs(lambda));
  }
  return out;
}

Embedding ase(const AdjacencyMatrix& a, int d_hat, EigenOrdering ordering) {
  return ase(a.entries, d_hat, ordering);
}

ScreeData scree(const Matrix& m, std::optional<int> top_m, EigenOrdering ordering) {
  const EigenDecomposition eig = eig_sym(m, ordering);
  ScreeData out;
  out.ordering = ordering;
  int keep = static_cast<int>(eig.values.size());
  if (top_m) {
    if (*top_m < 1) throw std::invalid_argument("scree: top_m must be positive");
    keep = std::min(keep, *top_m);
  }
  out.eigenvalues = eig.values.head(keep);
  return out;
}

ScreeData scree(const AdjacencyMatrix& a, std::optional<int> top_m, EigenOrdering ordering) {
  return scree(a.entries, top_m, ordering);
}

namespace {

// Gaussian profile log-likelihood of the split {v_1..v_q | v_q+1..v_L}:
// separate group means, one pooled variance (denominator L-2, floored).
double split_log_likelihood(const std::vector<double>& v, int q) {
  const int len = static_cast<int>(v.size());
  double mean1 = 0.0;
  double mean2 = 0.0;
  for (int i = 0; i < q; ++i) mean1 += v[static_cast<std::size_t>(i)];
  for (int i = q; i < len; ++i) mean2 += v[static_cast<std::size_t>(i)];
  mean1 /= q;
  mean2 /= (len - q);

  double ss = 0.0;
  for (int i = 0; i < q; ++i) {
    const double d = v[static_cast<std::size_t>(i)] - mean1;
    ss += d * d;
  }
  for (int i = q; i < len; ++i) {
    const double d = v[static_cast<std::size_t>(i)] - mean2;
    ss += d * d;
  }
  const int dof = std::max(len - 2, 1);
  const double variance = std::max(ss / dof, 1e-12);

  return -0.5 * len * std::log(2.0 * M_PI * variance) - 0.5 * ss / variance;
}

int first_elbow(const std::vector<double>& values) {
  const int len = static_cast<int>(values.size());
  int best_q = 1;
  double best = split_log_likelihood(values, 1);
  for (int q = 2; q < len; ++q) {
    const double ll = split_log_likelihood(values, q);
    if (ll > best) {
      best = ll;
      best_q = q;
    }
  }
  return best_q;
}

}  // namespace

int profile_likelihood_elbow(const std::vector<double>& values, int which_elbow) {
  if (which_elbow != 1 && which_elbow != 2) {
    throw std::invalid_argument("profile_likelihood_elbow: which_elbow must be 1 or 2");
  }
  if (values.size() < 3) {
    throw std::invalid_argument("profile_likelihood_elbow: need at least 3 values");
  }
  for (std::size_t i = 0; i + 1 < values.size(); ++i) {
    if (values[i] < values[i + 1]) {
      throw std::invalid_argument("profile_likelihood_elbow: values must be sorted descending");
    }
  }
  const int q1 = first_elbow(values);
  if (which_elbow == 1) return q1;

  const std::vector<double> tail(values.begin() + q1, values.end());
  if (tail.size() < 3) {
    throw std::invalid_argument("profile_likelihood_elbow: tail too short for a second elbow");
  }
  return q1 + first_elbow(tail);
}

int profile_likelihood_elbow(const Vector& values, int which_elbow) {
  return profile_likelihood_elbow(std::vector<double>(values.data(), values.data() + values.size()),
                                  which_elbow);
}

int select_dimension(const AdjacencyMatrix& a) {
  // Partial scree of the largest 22 magnitudes. A first elbow at 1 only
  // says the top eigenvalue dominates the rest; the informative split is
  // the next one, so the second elbow is taken in that case.
  const ScreeData s = scree(a, 22);
  std::vector<double> magnitudes(static_cast<std::size_t>(s.eigenvalues.size()));
  for (int i = 0; i < s.eigenvalues.size(); ++i) {
    magnitudes[static_cast<std::size_t>(i)] = std::abs(s.eigenvalues(i));
  }
  const int first = profile_likelihood_elbow(magnitudes, 1);
  if (first > 1 || magnitudes.size() < 4) return first;
  return profile_likelihood_elbow(magnitudes, 2);
}

}  // namespace vsparse
