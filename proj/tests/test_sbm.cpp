#include "vsparse/sbm.hpp"

#include "helpers.hpp"
#include "vsparse/rng.hpp"
#include "vsparse/spectral.hpp"

#include <doctest.h>

#include <cmath>

using namespace vsparse;
using vsparse::testing::sim_params;

namespace {

// Frozen moment values for sim_params, from direct evaluation of
//   m1[q] = sum_k pi_k B[k][q], m2[q] = sum_k pi_k B[k][q]^2,
//   cross[q][r] = sum_k pi_k B[k][q] B[k][r].
constexpr double kM1_1 = 0.472;    // 0.4*0.7  + 0.6*0.32
constexpr double kM1_2 = 0.578;    // 0.4*0.32 + 0.6*0.75
constexpr double kM2_1 = 0.25744;  // 0.4*0.49   + 0.6*0.1024
constexpr double kM2_2 = 0.37846;  // 0.4*0.1024 + 0.6*0.5625
constexpr double kCross12 = 0.2336;  // 0.4*0.7*0.32 + 0.6*0.32*0.75

double frozen_rho12() { return kCross12 / std::sqrt(kM2_1 * kM2_2); }  // ~0.7484

// Counts of vertex pairs whose edge indicator is Bernoulli(B[a][b]).
double pair_count(const std::vector<int>& counts, int a, int b) {
  if (a == b) return 0.5 * counts[a] * (counts[a] - 1);
  return static_cast<double>(counts[a]) * counts[b];
}

}  // namespace

TEST_SUITE_BEGIN("sbm");

TEST_CASE("model validation") {
  CHECK_THROWS_AS(make_model(Matrix::Ones(2, 2) * 1.5, Vector::Ones(2) * 0.5),
                  std::invalid_argument);
  Matrix asym(2, 2);
  asym << 0.5, 0.2, 0.3, 0.5;
  CHECK_THROWS_AS(make_model(asym, Vector::Ones(2) * 0.5), std::invalid_argument);
  Vector bad_pi(2);
  bad_pi << 0.5, 0.6;
  CHECK_THROWS_AS(make_model(Matrix::Ones(2, 2) * 0.5, bad_pi), std::invalid_argument);
}

TEST_CASE("sampling with probability-one edges gives the complete graph") {
  const BlockModel model = make_model(Matrix::Ones(1, 1), Vector::Ones(1));
  const LabeledGraph g = sample(model, 4, 1);
  CHECK(edge_count(g.adjacency) == 6);
  CHECK(validate(g.adjacency).valid());
}

TEST_CASE("sampling with probability-zero edges gives the empty graph") {
  const BlockModel model = make_model(Matrix::Zero(2, 2), Vector::Ones(2) * 0.5);
  const LabeledGraph g = sample(model, 10, 2);
  CHECK(edge_count(g.adjacency) == 0);
}

TEST_CASE("sampling is deterministic in (model, n, seed)") {
  const BlockModel model = sim_params();
  const LabeledGraph a = sample(model, 60, 99);
  const LabeledGraph b = sample(model, 60, 99);
  CHECK(a.adjacency.entries == b.adjacency.entries);
  CHECK(a.labels.labels == b.labels.labels);
  const LabeledGraph c = sample(model, 60, 100);
  CHECK(a.adjacency.entries != c.adjacency.entries);
}

TEST_CASE("sampled block edge frequencies match B") {
  const BlockModel model = sim_params();
  const LabeledGraph g = sample(model, 2000, 31);
  const std::vector<int> counts = class_counts(g.labels);

  double within1 = 0.0;
  for (int i = 0; i < g.labels.n(); ++i) {
    for (int j = i + 1; j < g.labels.n(); ++j) {
      if (g.labels.labels[i] == 1 && g.labels.labels[j] == 1) {
        within1 += g.adjacency.entries(i, j);
      }
    }
  }
  const double freq = within1 / pair_count(counts, 0, 0);
  CHECK(freq == doctest::Approx(0.7).epsilon(0.03 / 0.7));
}

TEST_CASE("communication matrix replicates block probabilities") {
  Matrix b1(1, 1);
  b1 << 0.3;
  const BlockModel scalar = make_model(b1, Vector::Ones(1));
  const Matrix p = communication_matrix(scalar, make_labels({1, 1, 1}, 1));
  CHECK(p.isConstant(0.3));

  const BlockModel model = sim_params();
  const Matrix p2 = communication_matrix(model, make_labels({1, 2}, 2));
  Matrix expected(2, 2);
  expected << 0.7, 0.32, 0.32, 0.75;
  CHECK(p2 == expected);

  const Matrix p3 = communication_matrix(model, make_labels({1, 1, 1}, 2));
  CHECK(p3.isConstant(0.7));
}

TEST_CASE("occlusion model doubles the blocks and splits the prior") {
  const BlockModel model = sim_params();
  const BlockModel occ = occlude_model(model, 0.5);
  REQUIRE(occ.num_blocks == 4);
  Vector expected_pi(4);
  expected_pi << 0.2, 0.3, 0.2, 0.3;
  CHECK((occ.prior - expected_pi).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(occ.block_probs.topLeftCorner(2, 2) == model.block_probs);
  CHECK(occ.block_probs.topRightCorner(2, 2) == model.block_probs);
  CHECK(occ.block_probs.bottomLeftCorner(2, 2) == model.block_probs);
  CHECK(occ.block_probs.bottomRightCorner(2, 2).isZero());
  CHECK(!occ.degenerate);
  CHECK(numerical_rank(occ.block_probs) == 4);
}

TEST_CASE("occlusion at rate zero flags a degenerate prior") {
  const BlockModel occ = occlude_model(sim_params(), 0.0);
  CHECK(occ.degenerate);
  CHECK(occ.prior.head(2).sum() == doctest::Approx(1.0));
  CHECK(occ.prior.tail(2).isZero());
}

TEST_CASE("reversion model complements the contaminated block") {
  const BlockModel model = sim_params();
  const BlockModel rev = reverse_model(model, 0.5);
  Matrix expected(2, 2);
  expected << 0.3, 0.68, 0.68, 0.25;
  CHECK((rev.block_probs.bottomRightCorner(2, 2) - expected).cwiseAbs().maxCoeff() < 1e-15);
  const int rank = numerical_rank(rev.block_probs);
  CHECK(rank >= 3);
  CHECK(rank <= 4);

  // rate 1: everything lives in the complement copy
  const BlockModel full = reverse_model(model, 1.0);
  CHECK(full.degenerate);
  CHECK(full.prior.head(2).isZero());
  CHECK(full.prior.tail(2).sum() == doctest::Approx(1.0));
}

TEST_CASE("model-space transforms preserve the simplex") {
  Rng rng(5);
  const BlockModel model = sim_params();
  for (int trial = 0; trial < 20; ++trial) {
    const double rate = rng.next_double();
    CHECK(occlude_model(model, rate).prior.sum() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(reverse_model(model, rate).prior.sum() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("graph occlusion removes exactly the within-set edges") {
  const BlockModel model = sim_params();
  const LabeledGraph g = sample(model, 40, 7);

  const LabeledGraph untouched = occlude_graph(g, 0.0, 3);
  CHECK(untouched.adjacency.entries == g.adjacency.entries);

  const LabeledGraph emptied = occlude_graph(g, 1.0, 3);
  CHECK(edge_count(emptied.adjacency) == 0);

  const LabeledGraph half = occlude_graph(g, 0.5, 3);
  REQUIRE(half.provenance.contamination.size() == 1);
  const auto& record = half.provenance.contamination[0];
  CHECK(record.type == "occlusion");
  CHECK(record.vertices.size() == 20);
  std::vector<bool> selected(40, false);
  for (int v : record.vertices) selected[v] = true;
  for (int i = 0; i < 40; ++i) {
    for (int j = i + 1; j < 40; ++j) {
      if (selected[i] && selected[j]) {
        CHECK(half.adjacency.entries(i, j) == 0.0);
      } else {
        CHECK(half.adjacency.entries(i, j) == g.adjacency.entries(i, j));
      }
    }
  }
}

TEST_CASE("graph reversion complements within the set") {
  const BlockModel model = sim_params();
  const LabeledGraph g = sample(model, 30, 11);

  CHECK(reverse_graph(g, 0.0, 5).adjacency.entries == g.adjacency.entries);

  const LabeledGraph complemented = reverse_graph(g, 1.0, 5);
  const Matrix expected =
      Matrix::Ones(30, 30) - Matrix::Identity(30, 30) - g.adjacency.entries;
  CHECK(complemented.adjacency.entries == expected);
  CHECK(validate(complemented.adjacency).valid());

  LabeledGraph empty;
  empty.adjacency.entries = Matrix::Zero(5, 5);
  empty.labels = make_labels({1, 1, 1, 1, 1}, 1);
  const LabeledGraph complete = reverse_graph(empty, 1.0, 9);
  CHECK(edge_count(complete.adjacency) == 10);
}

TEST_CASE("mixed contamination composes occlusion then reversion") {
  const BlockModel model = sim_params();
  const LabeledGraph g = sample(model, 25, 13);

  const LabeledGraph same = mixed_contaminate(g, 0.0, 1);
  CHECK(same.adjacency.entries == g.adjacency.entries);

  const LabeledGraph complete = mixed_contaminate(g, 1.0, 1);
  CHECK(edge_count(complete.adjacency) == 25 * 24 / 2);

  const LabeledGraph a = mixed_contaminate(g, 0.4, 77);
  const LabeledGraph b = mixed_contaminate(g, 0.4, 77);
  CHECK(a.adjacency.entries == b.adjacency.entries);
  REQUIRE(a.provenance.contamination.size() == 2);
  CHECK(a.provenance.contamination[0].type == "occlusion");
  CHECK(a.provenance.contamination[1].type == "reversion");
}

TEST_CASE("moments of the benchmark model match the frozen oracle values") {
  const MomentTable table = moments(sim_params());
  CHECK(table.m1(0) == doctest::Approx(kM1_1).epsilon(1e-12));
  CHECK(table.m1(1) == doctest::Approx(kM1_2).epsilon(1e-12));
  CHECK(table.m2(0) == doctest::Approx(kM2_1).epsilon(1e-12));
  CHECK(table.m2(1) == doctest::Approx(kM2_2).epsilon(1e-12));
  CHECK(table.cross(0, 1) == doctest::Approx(kCross12).epsilon(1e-12));
  CHECK(table.rho(0, 1) == doctest::Approx(frozen_rho12()).epsilon(1e-12));
  CHECK(table.rho(0, 1) == doctest::Approx(0.7484).epsilon(1e-4));
  // invariants
  CHECK(table.rho(0, 0) == 1.0);
  CHECK(table.rho(1, 1) == 1.0);
  CHECK(table.rho(0, 1) == table.rho(1, 0));
  CHECK(table.cross(0, 0) == doctest::Approx(table.m2(0)).epsilon(1e-15));
}

TEST_CASE("moments of a single block") {
  Matrix b(1, 1);
  b << 0.4;
  const MomentTable table = moments(make_model(b, Vector::Ones(1)));
  CHECK(table.m1(0) == doctest::Approx(0.4));
  CHECK(table.rho(0, 0) == 1.0);
}

TEST_CASE("disjointly supported block columns have zero correlation") {
  Matrix b(2, 2);
  b << 0.5, 0.0, 0.0, 0.5;
  const MomentTable table = moments(make_model(b, Vector::Ones(2) * 0.5));
  CHECK(table.rho(0, 1) == 0.0);
}

TEST_CASE("moments reject an all-zero block column") {
  Matrix b(2, 2);
  b << 0.5, 0.0, 0.0, 0.0;
  CHECK_THROWS_AS(moments(make_model(b, Vector::Ones(2) * 0.5)), std::invalid_argument);
}

TEST_CASE("moments are equivariant under block relabeling") {
  Rng rng(41);
  for (int trial = 0; trial < 10; ++trial) {
    Matrix b(3, 3);
    for (int i = 0; i < 3; ++i) {
      for (int j = i; j < 3; ++j) {
        b(i, j) = 0.1 + 0.8 * rng.next_double();
        b(j, i) = b(i, j);
      }
    }
    Vector pi(3);
    pi << 0.2, 0.3, 0.5;
    const BlockModel model = make_model(b, pi);

    // swap blocks 1 and 2
    Matrix perm_b = b;
    perm_b.row(0).swap(perm_b.row(1));
    perm_b.col(0).swap(perm_b.col(1));
    Vector perm_pi(3);
    perm_pi << pi(1), pi(0), pi(2);
    const BlockModel permuted = make_model(perm_b, perm_pi);

    const MomentTable t1 = moments(model);
    const MomentTable t2 = moments(permuted);
    CHECK(t1.m1(0) == doctest::Approx(t2.m1(1)).epsilon(1e-14));
    CHECK(t1.m2(1) == doctest::Approx(t2.m2(0)).epsilon(1e-14));
    CHECK(t1.cross(0, 2) == doctest::Approx(t2.cross(1, 2)).epsilon(1e-14));
    CHECK(t1.rho(0, 1) == doctest::Approx(t2.rho(1, 0)).epsilon(1e-14));
  }
}

TEST_CASE("the benchmark model satisfies the classification condition") {
  const ConditionReport report = check_src_condition(sim_params());
  CHECK(report.overall);
  CHECK(report.satisfied_for_class == std::vector<bool>{true, true});
  // lhs/rhs for both ordered pairs, from the frozen moments
  CHECK(report.lhs(0, 1) == doctest::Approx(0.8234).epsilon(1e-3));
  CHECK(report.rhs(0, 1) == doctest::Approx(1.2246).epsilon(1e-3));
  CHECK(report.lhs(1, 0) == doctest::Approx(0.3810).epsilon(1e-3));
  CHECK(report.rhs(1, 0) == doctest::Approx(0.8166).epsilon(1e-3));
  const double rho2 = frozen_rho12() * frozen_rho12();
  CHECK(report.lhs(0, 1) == doctest::Approx(rho2 * kM2_2 / kM2_1).epsilon(1e-12));
  CHECK(report.rhs(0, 1) == doctest::Approx(kM1_2 / kM1_1).epsilon(1e-12));
}

TEST_CASE("proportional block columns violate the condition") {
  Matrix b(2, 2);
  b << 0.8, 0.4, 0.4, 0.2;  // second column is half the first
  const ConditionReport report = check_src_condition(make_model(b, Vector::Ones(2) * 0.5));
  CHECK(!report.overall);
  CHECK((!report.pairwise[0][1] || !report.pairwise[1][0]));
}

TEST_CASE("a single block is vacuously consistent") {
  Matrix b(1, 1);
  b << 0.5;
  const ConditionReport report = check_src_condition(make_model(b, Vector::Ones(1)));
  CHECK(report.overall);
}

TEST_CASE("asymptotic correlation limits of the benchmark model") {
  const Matrix limits = asymptotic_correlations(sim_params());
  CHECK(limits(0, 0) == doctest::Approx(kM2_1 / kM1_1).epsilon(1e-12));
  CHECK(limits(1, 1) == doctest::Approx(kM2_2 / kM1_2).epsilon(1e-12));
  CHECK(limits(0, 1) == doctest::Approx(kCross12 / std::sqrt(kM1_1 * kM1_2)).epsilon(1e-12));
  CHECK(limits(0, 0) == doctest::Approx(0.5454).epsilon(1e-3));
  CHECK(limits(1, 1) == doctest::Approx(0.6548).epsilon(1e-3));
  CHECK(limits(0, 1) == doctest::Approx(0.4472).epsilon(1e-3));

  Matrix b(1, 1);
  b << 0.6;
  CHECK(asymptotic_correlations(make_model(b, Vector::Ones(1)))(0, 0) == doctest::Approx(0.6));
}

TEST_CASE("empirical column correlations approach the asymptotic limits") {
  // Light Monte Carlo check; the acceptance suite runs the full-size one.
  const BlockModel model = sim_params();
  const Matrix limits = asymptotic_correlations(model);
  const int n = 800;
  const int replicates = 10;
  double within1 = 0.0;
  double within2 = 0.0;
  double between = 0.0;
  for (int r = 0; r < replicates; ++r) {
    const LabeledGraph g = sample(model, n, 1000 + static_cast<std::uint64_t>(r));
    const Matrix& a = g.adjacency.entries;
    Vector degree = a.rowwise().sum();
    Vector inv_sqrt(n);
    for (int i = 0; i < n; ++i) inv_sqrt(i) = degree(i) > 0 ? 1.0 / std::sqrt(degree(i)) : 0.0;
    // mean correlation over class pairs: rho_ij = (A^T A)_ij / sqrt(deg_i deg_j),
    // so sums of rho over class pairs are quadratic forms in A u.
    Vector u1 = Vector::Zero(n);
    Vector u2 = Vector::Zero(n);
    int alive1 = 0;
    int alive2 = 0;
    for (int i = 0; i < n; ++i) {
      (g.labels.labels[i] == 1 ? u1 : u2)(i) = inv_sqrt(i);
      if (degree(i) > 0) ++(g.labels.labels[i] == 1 ? alive1 : alive2);
    }
    const std::vector<int> counts = class_counts(g.labels);
    const Vector au1 = a * u1;
    const Vector au2 = a * u2;
    const double s11 = au1.squaredNorm() - alive1;  // drop the rho_ii = 1 terms
    const double s22 = au2.squaredNorm() - alive2;
    const double s12 = au1.dot(au2);
    within1 += s11 / (2.0 * pair_count(counts, 0, 0));
    within2 += s22 / (2.0 * pair_count(counts, 1, 1));
    between += s12 / pair_count(counts, 0, 1);
  }
  within1 /= replicates;
  within2 /= replicates;
  between /= replicates;
  CHECK(within1 == doctest::Approx(limits(0, 0)).epsilon(0.08));
  CHECK(within2 == doctest::Approx(limits(1, 1)).epsilon(0.08));
  CHECK(between == doctest::Approx(limits(0, 1)).epsilon(0.08));
}

TEST_CASE("latent positions factor the benchmark model") {
  const BlockModel model = sim_params();
  const LatentPositionResult result = block_latent_positions(model);
  REQUIRE(result.psd);
  CHECK(result.rank == 2);
  const Matrix reconstruction = result.nu * result.nu.transpose();
  CHECK((reconstruction - model.block_probs).cwiseAbs().maxCoeff() < 1e-12);
  // positions match the known point masses up to column signs
  CHECK(std::abs(result.nu(0, 0)) == doctest::Approx(0.695).epsilon(2e-3));
  CHECK(std::abs(result.nu(0, 1)) == doctest::Approx(0.467).epsilon(2e-3));
  CHECK(std::abs(result.nu(1, 0)) == doctest::Approx(0.751).epsilon(2e-3));
  CHECK(std::abs(result.nu(1, 1)) == doctest::Approx(0.432).epsilon(2e-3));
}

TEST_CASE("occluded block matrix has balanced inertia, not a factorization") {
  const BlockModel occ = occlude_model(sim_params(), 0.5);
  const LatentPositionResult result = block_latent_positions(occ);
  CHECK(!result.psd);
  CHECK(result.n_pos == 2);
  CHECK(result.n_neg == 2);
  CHECK(result.n_zero == 0);
}

TEST_CASE("trivial one-block factorization") {
  const LatentPositionResult result = block_latent_positions(make_model(Matrix::Ones(1, 1), Vector::Ones(1)));
  REQUIRE(result.psd);
  CHECK(result.nu(0, 0) == doctest::Approx(1.0));
}

TEST_CASE("communication matrices satisfy the occlusion spectral bounds") {
  const BlockModel model = sim_params();
  for (int n : {50, 200}) {
    for (int trial = 0; trial < 3; ++trial) {
      const BlockModel occ = occlude_model(model, 0.5);
      const LabeledGraph g = sample(occ, n, 500 + static_cast<std::uint64_t>(trial) * 29 + n);
      std::vector<int> base_labels(g.labels.labels);
      for (int& y : base_labels) y = (y - 1) % 2 + 1;
      const Matrix p_occ = communication_matrix(occ, g.labels);
      const Matrix p_un = communication_matrix(model, make_labels(base_labels, 2));

      Eigen::JacobiSVD<Matrix> svd_occ(p_occ);
      Eigen::JacobiSVD<Matrix> svd_un(p_un);
      CHECK(svd_occ.singularValues()(0) <= svd_un.singularValues()(0) + 1e-9);
      CHECK(svd_un.singularValues()(0) <= static_cast<double>(n));
    }
  }
}

TEST_CASE("occluded communication matrices have rank 2d with balanced signs") {
  const BlockModel occ = occlude_model(sim_params(), 0.5);
  int rank_hits = 0;
  for (int trial = 0; trial < 10; ++trial) {
    const LabeledGraph g = sample(occ, 200, 900 + static_cast<std::uint64_t>(trial));
    const Matrix p = communication_matrix(occ, g.labels);
    if (numerical_rank(p) == 4) ++rank_hits;
    const Inertia in = inertia(p);
    CHECK(in.n_pos == 2);
    CHECK(in.n_neg == 2);
  }
  CHECK(rank_hits >= 9);  // high-probability property
}

TEST_CASE("graph-space occlusion matches the model-space block frequencies") {
  const BlockModel model = sim_params();
  const double rate = 0.5;
  const LabeledGraph g = sample(model, 2000, 321);
  const LabeledGraph occluded = occlude_graph(g, rate, 654);
  const auto& selected = occluded.provenance.contamination[0].vertices;
  std::vector<bool> in_set(2000, false);
  for (int v : selected) in_set[v] = true;

  // contaminated labels: class + K when selected
  std::vector<int> aug(2000);
  for (int i = 0; i < 2000; ++i) {
    aug[i] = occluded.labels.labels[i] + (in_set[i] ? 2 : 0);
  }
  const LabelVector aug_labels = make_labels(aug, 4);
  const std::vector<int> counts = class_counts(aug_labels);
  const BlockModel occ = occlude_model(model, rate);

  for (int a = 0; a < 4; ++a) {
    for (int b = a; b < 4; ++b) {
      double edges = 0.0;
      for (int i = 0; i < 2000; ++i) {
        for (int j = i + 1; j < 2000; ++j) {
          if ((aug[i] == a + 1 && aug[j] == b + 1) || (aug[i] == b + 1 && aug[j] == a + 1)) {
            edges += occluded.adjacency.entries(i, j);
          }
        }
      }
      const double pairs = pair_count(counts, a, b);
      if (pairs < 1) continue;
      const double p = occ.block_probs(a, b);
      const double sigma = std::sqrt(p * (1.0 - p) / pairs);
      CHECK(std::abs(edges / pairs - p) <= 3.0 * sigma + 1e-12);
    }
  }
}

TEST_SUITE_END();
