#include "vsparse/sbm.hpp"

#include "vsparse/rng.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace vsparse {

namespace {

constexpr double kSimplexTol = 1e-12;

std::string model_description(const BlockModel& model) {
  std::ostringstream desc;
  desc << "SBM(K=" << model.num_blocks << ")";
  return desc.str();
}

}  // namespace

void validate_model(const BlockModel& model) {
  const int k = model.num_blocks;
  if (k < 1) throw std::invalid_argument("model: need at least one block");
  if (model.block_probs.rows() != k || model.block_probs.cols() != k) {
    throw std::invalid_argument("model: B must be K x K");
  }
  if (model.prior.size() != k) throw std::invalid_argument("model: pi must have length K");
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      const double b = model.block_probs(i, j);
      if (!(b >= 0.0 && b <= 1.0)) throw std::invalid_argument("model: B entries must lie in [0,1]");
      if (model.block_probs(i, j) != model.block_probs(j, i)) {
        throw std::invalid_argument("model: B must be symmetric");
      }
    }
  }
  double total = 0.0;
  for (int i = 0; i < k; ++i) {
    const double p = model.prior(i);
    if (!(p >= 0.0)) throw std::invalid_argument("model: pi entries must be non-negative");
    if (p == 0.0 && !model.degenerate) {
      throw std::invalid_argument("model: pi entries must be positive (or mark the model degenerate)");
    }
    total += p;
  }
  if (std::abs(total - 1.0) > kSimplexTol) {
    throw std::invalid_argument("model: pi must sum to 1");
  }
}

BlockModel make_model(Matrix block_probs, Vector prior) {
  BlockModel model{static_cast<int>(prior.size()), std::move(block_probs), std::move(prior), false};
  for (int i = 0; i < model.num_blocks; ++i) {
    if (model.prior(i) == 0.0) model.degenerate = true;
  }
  validate_model(model);
  return model;
}

LabeledGraph sample(const BlockModel& model, int n, std::uint64_t seed) {
  validate_model(model);
  if (n < 1) throw std::invalid_argument("sample: need n >= 1");
  Rng rng(seed);

  std::vector<double> cdf(static_cast<std::size_t>(model.num_blocks));
  double acc = 0.0;
  for (int k = 0; k < model.num_blocks; ++k) {
    acc += model.prior(k);
    cdf[static_cast<std::size_t>(k)] = acc;
  }
  cdf.back() = 1.0;

  std::vector<int> labels(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) labels[static_cast<std::size_t>(i)] = rng.sample_cdf(cdf) + 1;

  LabeledGraph g;
  g.labels = make_labels(std::move(labels), model.num_blocks);
  g.adjacency.entries = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double p = model.block_probs(g.labels.labels[static_cast<std::size_t>(i)] - 1,
                                         g.labels.labels[static_cast<std::size_t>(j)] - 1);
      if (rng.bernoulli(p)) {
        g.adjacency.entries(i, j) = 1.0;
        g.adjacency.entries(j, i) = 1.0;
      }
    }
  }
  g.provenance.model = model_description(model);
  g.provenance.seed = seed;
  return g;
}

Matrix communication_matrix(const BlockModel& model, const LabelVector& labels) {
  validate_model(model);
  if (labels.num_classes > model.num_blocks) {
    throw std::invalid_argument("communication_matrix: labels reference more classes than blocks");
  }
  const int n = labels.n();
  Matrix p(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      p(i, j) = model.block_probs(labels.labels[static_cast<std::size_t>(i)] - 1,
                                  labels.labels[static_cast<std::size_t>(j)] - 1);
    }
  }
  return p;
}

namespace {

BlockModel doubled_model(const BlockModel& model, double rate, const Matrix& contaminated_block) {
  validate_model(model);
  if (!(rate >= 0.0 && rate <= 1.0)) throw std::invalid_argument("contamination rate must lie in [0,1]");
  const int k = model.num_blocks;
  BlockModel out;
  out.num_blocks = 2 * k;
  out.block_probs = Matrix::Zero(2 * k, 2 * k);
  out.block_probs.topLeftCorner(k, k) = model.block_probs;
  out.block_probs.topRightCorner(k, k) = model.block_probs;
  out.block_probs.bottomLeftCorner(k, k) = model.block_probs;
  out.block_probs.bottomRightCorner(k, k) = contaminated_block;
  out.prior = Vector::Zero(2 * k);
  out.prior.head(k) = (1.0 - rate) * model.prior;
  out.prior.tail(k) = rate * model.prior;
  out.degenerate = model.degenerate || rate == 0.0 || rate == 1.0;
  validate_model(out);
  return out;
}

}  // namespace

BlockModel occlude_model(const BlockModel& model, double rate) {
  return doubled_model(model, rate, Matrix::Zero(model.num_blocks, model.num_blocks));
}

BlockModel reverse_model(const BlockModel& model, double rate) {
  const Matrix complemented =
      Matrix::Ones(model.num_blocks, model.num_blocks) - model.block_probs;
  return doubled_model(model, rate, complemented);
}

namespace {

LabeledGraph contaminate_within_set(const LabeledGraph& g, double rate, std::uint64_t seed,
                                    const char* type, bool complement) {
  if (!(rate >= 0.0 && rate <= 1.0)) throw std::invalid_argument("contamination rate must lie in [0,1]");
  const int n = g.adjacency.n();
  Rng rng(seed);
  const int m = static_cast<int>(std::llround(rate * static_cast<double>(n)));
  const std::vector<int> selected = rng.sample_without_replacement(n, m);

  LabeledGraph out = g;
  for (std::size_t a = 0; a < selected.size(); ++a) {
    for (std::size_t b = a + 1; b < selected.size(); ++b) {
      const int i = selected[a];
      const int j = selected[b];
      const double v = complement ? 1.0 - g.adjacency.entries(i, j) : 0.0;
      out.adjacency.entries(i, j) = v;
      out.adjacency.entries(j, i) = v;
    }
  }
  out.provenance.contamination.push_back({type, rate, seed, selected});
  return out;
}

}  // namespace

LabeledGraph occlude_graph(const LabeledGraph& g, double rate, std::uint64_t seed) {
  return contaminate_within_set(g, rate, seed, "occlusion", false);
}

LabeledGraph reverse_graph(const LabeledGraph& g, double rate, std::uint64_t seed) {
  return contaminate_within_set(g, rate, seed, "reversion", true);
}

LabeledGraph mixed_contaminate(const LabeledGraph& g, double rate, std::uint64_t seed) {
  const LabeledGraph occluded = occlude_graph(g, rate, derive_seed(seed, 0));
  return reverse_graph(occluded, rate, derive_seed(seed, 1));
}

MomentTable moments(const BlockModel& model) {
  validate_model(model);
  const int k = model.num_blocks;
  MomentTable table;
  table.m1 = Vector::Zero(k);
  table.m2 = Vector::Zero(k);
  table.cross = Matrix::Zero(k, k);
  for (int q = 0; q < k; ++q) {
    for (int c = 0; c < k; ++c) {
      const double b = model.block_probs(c, q);
      table.m1(q) += model.prior(c) * b;
      table.m2(q) += model.prior(c) * b * b;
    }
    if (table.m2(q) == 0.0) {
      std::ostringstream msg;
      msg << "moments: block column " << (q + 1) << " is zero almost surely; correlations undefined";
      throw std::invalid_argument(msg.str());
    }
  }
  for (int q = 0; q < k; ++q) {
    for (int r = q; r < k; ++r) {
      double acc = 0.0;
      for (int c = 0; c < k; ++c) {
        acc += model.prior(c) * model.block_probs(c, q) * model.block_probs(c, r);
      }
      table.cross(q, r) = acc;
      table.cross(r, q) = acc;
    }
  }
  table.rho = Matrix::Identity(k, k);
  for (int q = 0; q < k; ++q) {
    for (int r = q + 1; r < k; ++r) {
      const double rho = table.cross(q, r) / std::sqrt(table.m2(q) * table.m2(r));
      table.rho(q, r) = rho;
      table.rho(r, q) = rho;
    }
  }
  return table;
}

ConditionReport check_src_condition(const BlockModel& model) {
  const MomentTable table = moments(model);
  const int k = model.num_blocks;
  ConditionReport report;
  report.lhs = Matrix::Zero(k, k);
  report.rhs = Matrix::Zero(k, k);
  report.pairwise.assign(static_cast<std::size_t>(k), std::vector<bool>(static_cast<std::size_t>(k), true));
  report.satisfied_for_class.assign(static_cast<std::size_t>(k), true);
  for (int q = 0; q < k; ++q) {
    for (int r = 0; r < k; ++r) {
      if (r == q) continue;
      const double lhs = table.rho(q, r) * table.rho(q, r) * table.m2(r) / table.m2(q);
      const double rhs = table.m1(r) / table.m1(q);
      report.lhs(q, r) = lhs;
      report.rhs(q, r) = rhs;
      const bool holds = lhs < rhs;
      report.pairwise[static_cast<std::size_t>(q)][static_cast<std::size_t>(r)] = holds;
      if (!holds) {
        report.satisfied_for_class[static_cast<std::size_t>(q)] = false;
        report.overall = false;
      }
    }
  }
  return report;
}

Matrix asymptotic_correlations(const BlockModel& model) {
  const MomentTable table = moments(model);
  const int k = model.num_blocks;
  Matrix limits(k, k);
  for (int q = 0; q < k; ++q) {
    for (int r = 0; r < k; ++r) {
      if (q == r) {
        limits(q, q) = table.m2(q) / table.m1(q);
      } else {
        limits(q, r) = table.cross(q, r) / std::sqrt(table.m1(q) * table.m1(r));
      }
    }
  }
  return limits;
}

namespace {

double zero_threshold(const Vector& eigenvalues, int n) {
  const double top = eigenvalues.cwiseAbs().maxCoeff();
  return static_cast<double>(n) * std::numeric_limits<double>::epsilon() * top;
}

}  // namespace

int numerical_rank(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (m + m.transpose()));
  const Vector values = solver.eigenvalues();
  if (values.size() == 0) return 0;
  const double tol = zero_threshold(values, static_cast<int>(m.rows()));
  int rank = 0;
  for (int i = 0; i < values.size(); ++i) {
    if (std::abs(values(i)) > tol) ++rank;
  }
  return rank;
}

Inertia inertia(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (m + m.transpose()));
  const Vector values = solver.eigenvalues();
  Inertia result;
  if (values.size() == 0) return result;
  const double tol = zero_threshold(values, static_cast<int>(m.rows()));
  for (int i = 0; i < values.size(); ++i) {
    if (values(i) > tol) {
      ++result.n_pos;
    } else if (values(i) < -tol) {
      ++result.n_neg;
    } else {
      ++result.n_zero;
    }
  }
  return result;
}

LatentPositionResult block_latent_positions(const BlockModel& model) {
  validate_model(model);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(model.block_probs);
  const Vector values = solver.eigenvalues();  // ascending
  const double tol = zero_threshold(values, model.num_blocks);

  LatentPositionResult result;
  for (int i = 0; i < values.size(); ++i) {
    if (values(i) > tol) {
      ++result.n_pos;
    } else if (values(i) < -tol) {
      ++result.n_neg;
    } else {
      ++result.n_zero;
    }
  }
  result.psd = result.n_neg == 0;
  result.rank = result.n_pos;
  if (!result.psd) return result;

  result.nu = Matrix::Zero(model.num_blocks, result.rank);
  // Columns ordered by descending eigenvalue; sign fixed so that the
  // largest-magnitude entry of each eigenvector is positive.
  for (int c = 0; c < result.rank; ++c) {
    const int src = static_cast<int>(values.size()) - 1 - c;
    Vector v = solver.eigenvectors().col(src);
    int arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v(arg) < 0.0) v = -v;
    result.nu.col(c) = v * std::sqrt(values(src));
  }
  return result;
}

}  // namespace vsparse
