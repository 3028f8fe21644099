#include "vsparse/evaluate.hpp"

#include "vsparse/parallel.hpp"
#include "vsparse/rng.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

namespace vsparse {

double chance_error(const LabelVector& labels) {
  const int n = labels.n();
  if (n == 0) throw std::invalid_argument("chance_error: empty label vector");
  const std::vector<int> counts = class_counts(labels);
  const int top = *std::max_element(counts.begin(), counts.end());
  return 1.0 - static_cast<double>(top) / static_cast<double>(n);
}

std::string ClassifierSpec::describe() const {
  std::ostringstream out;
  switch (type) {
    case ClassifierType::Src:
      out << "src(s=" << sparsity << ",l2=" << (normalize ? "on" : "off")
          << (variant == OmpVariant::NonNegative ? ",nonneg" : "") << ")";
      break;
    case ClassifierType::Knn:
      out << "knn(k=" << neighbors << ")+ase(d=";
      if (d_auto) out << "auto"; else out << d_hat;
      out << ")";
      break;
    case ClassifierType::Lda:
      out << "lda(ridge=" << ridge << ")+ase(d=";
      if (d_auto) out << "auto"; else out << d_hat;
      out << ")";
      break;
  }
  return out.str();
}

LabeledGraph apply_contamination(const LabeledGraph& g, const ContaminationSpec& spec,
                                 std::uint64_t seed) {
  switch (spec.type) {
    case ContaminationType::None:
      return g;
    case ContaminationType::Occlusion:
      return occlude_graph(g, spec.rate, seed);
    case ContaminationType::Reversion:
      return reverse_graph(g, spec.rate, seed);
    case ContaminationType::Mixed:
      return mixed_contaminate(g, spec.rate, seed);
  }
  throw std::invalid_argument("apply_contamination: unknown type");
}

namespace {

std::set<int> present_classes(const LabelVector& labels) {
  return std::set<int>(labels.labels.begin(), labels.labels.end());
}

LabelVector fold_labels(const LabelVector& labels, int held_out) {
  std::vector<int> remaining;
  remaining.reserve(static_cast<std::size_t>(labels.n() - 1));
  for (int i = 0; i < labels.n(); ++i) {
    if (i != held_out) remaining.push_back(labels.labels[static_cast<std::size_t>(i)]);
  }
  return make_labels(std::move(remaining), labels.num_classes);
}

LooResult finalize(const LabeledGraph& g, std::vector<int> predicted,
                   std::vector<bool> degenerate, std::vector<bool> excluded,
                   const std::string& descriptor) {
  LooResult result;
  result.predicted = std::move(predicted);
  result.degenerate = std::move(degenerate);
  result.excluded = std::move(excluded);
  result.classifier = descriptor;
  result.chance = chance_error(g.labels);
  int wrong = 0;
  for (int v = 0; v < g.labels.n(); ++v) {
    if (result.excluded[static_cast<std::size_t>(v)]) {
      ++result.excluded_count;
      continue;
    }
    ++result.evaluated;
    if (result.predicted[static_cast<std::size_t>(v)] != g.labels.labels[static_cast<std::size_t>(v)]) {
      ++wrong;
    }
  }
  if (result.evaluated == 0) throw std::runtime_error("loo: every fold was excluded");
  result.error = static_cast<double>(wrong) / static_cast<double>(result.evaluated);
  return result;
}

}  // namespace

LooResult loo_src(const LabeledGraph& g, int sparsity, bool normalize, OmpVariant variant,
                  int threads) {
  const int n = g.adjacency.n();
  if (g.labels.n() != n) throw std::invalid_argument("loo_src: labels must match the graph");
  if (n < g.labels.num_classes + 1) throw std::invalid_argument("loo_src: need n >= K+1");

  const std::set<int> classes = present_classes(g.labels);
  std::vector<int> predicted(static_cast<std::size_t>(n), 0);
  std::vector<bool> degenerate(static_cast<std::size_t>(n), false);
  std::vector<bool> excluded(static_cast<std::size_t>(n), false);

  parallel_for(n, threads, [&](int v) {
    const LabelVector train_labels = fold_labels(g.labels, v);
    if (present_classes(train_labels) != classes) {
      excluded[static_cast<std::size_t>(v)] = true;
      return;
    }
    const ColumnSplit split = test_column(g.adjacency, v);
    const Dictionary dict = build_dictionary(split.training, train_labels, normalize);
    const SrcDecision decision = src_classify(dict, split.phi, sparsity, variant);
    predicted[static_cast<std::size_t>(v)] = decision.predicted;
    degenerate[static_cast<std::size_t>(v)] = decision.degenerate;
  });

  ClassifierSpec spec;
  spec.type = ClassifierType::Src;
  spec.sparsity = sparsity;
  spec.normalize = normalize;
  spec.variant = variant;
  return finalize(g, std::move(predicted), std::move(degenerate), std::move(excluded),
                  spec.describe());
}

namespace {

int classify_embedded(const ClassifierSpec& spec, const Matrix& train_points,
                      const LabelVector& train_labels, const Vector& z) {
  if (spec.type == ClassifierType::Knn) {
    const KnnModel model = knn_fit(train_points, train_labels, spec.neighbors);
    return knn_classify(model, z);
  }
  const LdaModel model = lda_fit(train_points, train_labels, spec.ridge);
  return lda_classify(model, z);
}

}  // namespace

LooResult loo_ase(const LabeledGraph& g, const ClassifierSpec& spec, int threads) {
  const int n = g.adjacency.n();
  if (g.labels.n() != n) throw std::invalid_argument("loo_ase: labels must match the graph");
  if (n < g.labels.num_classes + 1) throw std::invalid_argument("loo_ase: need n >= K+1");

  const int d_hat = spec.d_auto ? select_dimension(g.adjacency) : spec.d_hat;
  const int max_d = spec.refold_embedding ? n - 1 : n;
  if (d_hat < 1 || d_hat > max_d) throw std::invalid_argument("loo_ase: d_hat out of range");

  const std::set<int> classes = present_classes(g.labels);
  std::vector<int> predicted(static_cast<std::size_t>(n), 0);
  std::vector<bool> degenerate(static_cast<std::size_t>(n), false);
  std::vector<bool> excluded(static_cast<std::size_t>(n), false);

  if (!spec.refold_embedding) {
    // Embed all n vertices jointly, then hold each one out of the fit.
    const Embedding embedding = ase(g.adjacency, d_hat, spec.ordering);
    parallel_for(n, threads, [&](int v) {
      const LabelVector train_labels = fold_labels(g.labels, v);
      if (present_classes(train_labels) != classes) {
        excluded[static_cast<std::size_t>(v)] = true;
        return;
      }
      Matrix train_points(n - 1, d_hat);
      int row = 0;
      for (int i = 0; i < n; ++i) {
        if (i == v) continue;
        train_points.row(row++) = embedding.z.row(i);
      }
      predicted[static_cast<std::size_t>(v)] =
          classify_embedded(spec, train_points, train_labels, embedding.z.row(v).transpose());
    });
  } else {
    // Strict mode: embed the n-1 training vertices, then place the test
    // vertex at |S|^(-1/2) U^T phi (its least-squares latent position).
    parallel_for(n, threads, [&](int v) {
      const LabelVector train_labels = fold_labels(g.labels, v);
      if (present_classes(train_labels) != classes) {
        excluded[static_cast<std::size_t>(v)] = true;
        return;
      }
      const ColumnSplit split = test_column(g.adjacency, v);
      const Embedding embedding = ase(split.training, d_hat, spec.ordering);
      Vector z = Vector::Zero(d_hat);
      for (int c = 0; c < d_hat; ++c) {
        const double lambda = std::abs(embedding.eigenvalues(c));
        if (lambda > 0.0) {
          // column c of Z is u_c * sqrt(lambda), so u_c^T phi / sqrt(lambda)
          z(c) = embedding.z.col(c).dot(split.phi) / lambda;
        }
      }
      predicted[static_cast<std::size_t>(v)] =
          classify_embedded(spec, embedding.z, train_labels, z);
    });
  }

  return finalize(g, std::move(predicted), std::move(degenerate), std::move(excluded),
                  spec.describe());
}

LooResult loo_run(const LabeledGraph& g, const ClassifierSpec& spec, int threads) {
  if (spec.type == ClassifierType::Src) {
    return loo_src(g, spec.sparsity, spec.normalize, spec.variant, threads);
  }
  return loo_ase(g, spec, threads);
}

McPoint monte_carlo(const BlockModel& model, int n, const ContaminationSpec& contamination,
                    const ClassifierSpec& classifier, int replicates, std::uint64_t base_seed,
                    int threads) {
  if (replicates < 1) throw std::invalid_argument("monte_carlo: need at least one replicate");
  McPoint point;
  point.replicates = replicates;
  point.per_replicate.assign(static_cast<std::size_t>(replicates), 0.0);
  std::vector<double> chances(static_cast<std::size_t>(replicates), 0.0);

  parallel_for(replicates, threads, [&](int r) {
    try {
      const std::uint64_t seed = replicate_seed(base_seed, static_cast<std::uint64_t>(r));
      LabeledGraph g = sample(model, n, seed);
      if (contamination.type != ContaminationType::None) {
        g = apply_contamination(g, contamination, derive_seed(seed, 1));
      }
      const LooResult loo = loo_run(g, classifier, 1);
      point.per_replicate[static_cast<std::size_t>(r)] = loo.error;
      chances[static_cast<std::size_t>(r)] = loo.chance;
    } catch (const std::exception& e) {
      std::ostringstream msg;
      msg << "monte_carlo: replicate " << r << " failed: " << e.what();
      throw std::runtime_error(msg.str());
    }
  });

  double sum = 0.0;
  double chance_sum = 0.0;
  for (int r = 0; r < replicates; ++r) {
    sum += point.per_replicate[static_cast<std::size_t>(r)];
    chance_sum += chances[static_cast<std::size_t>(r)];
  }
  point.mean_error = sum / replicates;
  point.mean_chance = chance_sum / replicates;
  if (replicates > 1) {
    double ss = 0.0;
    for (double e : point.per_replicate) {
      const double d = e - point.mean_error;
      ss += d * d;
    }
    point.std_error = std::sqrt(ss / (replicates - 1)) / std::sqrt(static_cast<double>(replicates));
  }
  return point;
}

SweepVariable sweep_variable_from_string(const std::string& name) {
  if (name == "s") return SweepVariable::Sparsity;
  if (name == "d_hat") return SweepVariable::DHat;
  if (name == "k") return SweepVariable::Neighbors;
  if (name == "rate") return SweepVariable::Rate;
  throw std::invalid_argument("sweep: unknown variable '" + name + "' (use s|d_hat|k|rate)");
}

std::string to_string(SweepVariable v) {
  switch (v) {
    case SweepVariable::Sparsity: return "s";
    case SweepVariable::DHat: return "d_hat";
    case SweepVariable::Neighbors: return "k";
    case SweepVariable::Rate: return "rate";
  }
  return "?";
}

namespace {

int integral_grid_value(double value, const char* what) {
  const int v = static_cast<int>(std::llround(value));
  if (std::abs(value - v) > 1e-9 || v < 1) {
    std::ostringstream msg;
    msg << "sweep: " << what << " grid values must be positive integers, got " << value;
    throw std::invalid_argument(msg.str());
  }
  return v;
}

void apply_grid_value(SweepVariable variable, double value, ContaminationSpec& contamination,
                      ClassifierSpec& classifier) {
  switch (variable) {
    case SweepVariable::Sparsity:
      classifier.sparsity = integral_grid_value(value, "s");
      break;
    case SweepVariable::DHat:
      classifier.d_hat = integral_grid_value(value, "d_hat");
      classifier.d_auto = false;
      break;
    case SweepVariable::Neighbors:
      classifier.neighbors = integral_grid_value(value, "k");
      break;
    case SweepVariable::Rate:
      if (!(value >= 0.0 && value <= 1.0)) {
        throw std::invalid_argument("sweep: rate grid values must lie in [0,1]");
      }
      contamination.rate = value;
      break;
  }
}

}  // namespace

ErrorCurve sweep(const BlockModel& model, int n, ContaminationSpec contamination,
                 ClassifierSpec classifier, SweepVariable variable,
                 const std::vector<double>& grid, int replicates, std::uint64_t base_seed,
                 int threads) {
  if (grid.empty()) throw std::invalid_argument("sweep: empty grid");
  ErrorCurve curve;
  curve.variable = variable;
  curve.grid = grid;
  curve.replicates = replicates;
  for (double value : grid) {
    ContaminationSpec c = contamination;
    ClassifierSpec cl = classifier;
    apply_grid_value(variable, value, c, cl);
    const McPoint point = monte_carlo(model, n, c, cl, replicates, base_seed, threads);
    curve.mean_errors.push_back(point.mean_error);
    curve.std_errors.push_back(point.std_error);
    curve.chances.push_back(point.mean_chance);
  }
  return curve;
}

ErrorCurve sweep_graph(const LabeledGraph& g, ClassifierSpec classifier, SweepVariable variable,
                       const std::vector<double>& grid, int threads) {
  if (grid.empty()) throw std::invalid_argument("sweep: empty grid");
  if (variable == SweepVariable::Rate) {
    throw std::invalid_argument("sweep: rate sweeps need a model; fixed graphs sweep s|d_hat|k");
  }
  ErrorCurve curve;
  curve.variable = variable;
  curve.grid = grid;
  curve.replicates = 1;
  for (double value : grid) {
    ContaminationSpec unused;
    ClassifierSpec cl = classifier;
    apply_grid_value(variable, value, unused, cl);
    const LooResult loo = loo_run(g, cl, threads);
    curve.mean_errors.push_back(loo.error);
    curve.std_errors.push_back(0.0);
    curve.chances.push_back(loo.chance);
  }
  return curve;
}

}  // namespace vsparse
