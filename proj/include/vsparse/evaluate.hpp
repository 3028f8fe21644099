#pragma once

#include "vsparse/classify.hpp"
#include "vsparse/graph.hpp"
#include "vsparse/sbm.hpp"
#include "vsparse/spectral.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace vsparse {

/// 1 - max class frequency: the error of always guessing the modal class.
double chance_error(const LabelVector& labels);

enum class ClassifierType { Src, Knn, Lda };

/// Everything needed to run one classifier over a graph.
struct ClassifierSpec {
  ClassifierType type = ClassifierType::Src;
  // SRC
  int sparsity = 5;
  bool normalize = true;
  OmpVariant variant = OmpVariant::Plain;
  // ASE-based classifiers
  int d_hat = 2;
  bool d_auto = false;  // pick d_hat by the profile-likelihood elbow
  EigenOrdering ordering = EigenOrdering::Magnitude;
  bool refold_embedding = false;  // strict mode: re-embed per LOO fold
  int neighbors = 1;
  double ridge = 1e-6;

  std::string describe() const;
};

enum class ContaminationType { None, Occlusion, Reversion, Mixed };

struct ContaminationSpec {
  ContaminationType type = ContaminationType::None;
  double rate = 0.0;
};

LabeledGraph apply_contamination(const LabeledGraph& g, const ContaminationSpec& spec,
                                 std::uint64_t seed);

/// Leave-one-out result. Folds whose training half loses a class present in
/// the full label set are excluded from the error denominator; vertices with
/// an all-zero test column fall back to the majority class and are flagged.
struct LooResult {
  std::vector<int> predicted;       // 0 for excluded folds
  std::vector<bool> degenerate;
  std::vector<bool> excluded;
  double error = 0.0;   // misclassified / evaluated
  double chance = 0.0;
  int evaluated = 0;
  int excluded_count = 0;
  std::string classifier;
};

/// SRC under leave-one-out: every fold rebuilds the dictionary from the
/// order-(n-1) training submatrix and classifies the held-out adjacency
/// column.
LooResult loo_src(const LabeledGraph& g, int sparsity, bool normalize = true,
                  OmpVariant variant = OmpVariant::Plain, int threads = 1);

/// Nearest-neighbour or LDA on the spectral embedding under leave-one-out.
/// The graph is embedded once (the embedding is unsupervised); strict mode
/// re-embeds the n-1 training vertices per fold and aligns the test vertex
/// via its adjacency profile projected on the training embedding.
LooResult loo_ase(const LabeledGraph& g, const ClassifierSpec& spec, int threads = 1);

/// Dispatch on spec.type.
LooResult loo_run(const LabeledGraph& g, const ClassifierSpec& spec, int threads = 1);

/// One Monte Carlo cell: mean and standard error of the LOO error over
/// `replicates` independent (sample, contaminate, evaluate) runs. Replicate
/// r uses seed base_seed ^ r; results are reduced in replicate order, so the
/// outcome is independent of the thread count.
struct McPoint {
  double mean_error = 0.0;
  double std_error = 0.0;
  double mean_chance = 0.0;
  int replicates = 0;
  std::vector<double> per_replicate;
};

McPoint monte_carlo(const BlockModel& model, int n, const ContaminationSpec& contamination,
                    const ClassifierSpec& classifier, int replicates, std::uint64_t base_seed,
                    int threads = 0);

enum class SweepVariable { Sparsity, DHat, Neighbors, Rate };

SweepVariable sweep_variable_from_string(const std::string& name);
std::string to_string(SweepVariable v);

/// Error curve over a parameter grid. Grid points share the same base seed
/// (common random numbers), so curve differences reflect the swept variable.
struct ErrorCurve {
  SweepVariable variable = SweepVariable::Sparsity;
  std::vector<double> grid;
  std::vector<double> mean_errors;
  std::vector<double> std_errors;
  std::vector<double> chances;
  int replicates = 0;
};

ErrorCurve sweep(const BlockModel& model, int n, ContaminationSpec contamination,
                 ClassifierSpec classifier, SweepVariable variable,
                 const std::vector<double>& grid, int replicates, std::uint64_t base_seed,
                 int threads = 0);

/// Sweep on a fixed graph (real data): one LOO per grid value.
ErrorCurve sweep_graph(const LabeledGraph& g, ClassifierSpec classifier, SweepVariable variable,
                       const std::vector<double>& grid, int threads = 0);

}  // namespace vsparse
