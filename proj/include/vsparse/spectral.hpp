#pragma once

#include "vsparse/graph.hpp"

#include <optional>
#include <vector>

namespace vsparse {

/// How eigenpairs are ranked. Magnitude keeps informative negative
/// eigenvalues (contaminated models have them) ahead of small positive ones.
enum class EigenOrdering { Magnitude, Algebraic };

/// Full symmetric eigendecomposition, eigenpairs sorted by the requested
/// ordering. Ties break by descending algebraic value, then by position in
/// the ascending solver output, and each eigenvector's largest-magnitude
/// entry is made positive, so results are reproducible.
struct EigenDecomposition {
  Vector values;
  Matrix vectors;  // orthonormal columns, vectors.col(i) pairs with values(i)
  EigenOrdering ordering = EigenOrdering::Magnitude;
};

/// Throws when max|M - M^T| exceeds 1e-10.
EigenDecomposition eig_sym(const Matrix& m, EigenOrdering ordering = EigenOrdering::Magnitude);

/// Spectral embedding Z = U_d |S_d|^(1/2) from the top d eigenpairs under
/// the ordering. Columns whose eigenvalue is exactly zero are flagged.
struct Embedding {
  Matrix z;  // n x d_hat
  int d_hat = 0;
  EigenOrdering ordering = EigenOrdering::Magnitude;
  Vector eigenvalues;             // selected, signed
  std::vector<int> zero_columns;  // columns backed by a zero eigenvalue
};

Embedding ase(const Matrix& a, int d_hat, EigenOrdering ordering = EigenOrdering::Magnitude);
Embedding ase(const AdjacencyMatrix& a, int d_hat, EigenOrdering ordering = EigenOrdering::Magnitude);

/// Spectrum for scree inspection: sorted by the ordering (magnitude by
/// default), algebraic signs retained, optionally truncated to the top m.
struct ScreeData {
  Vector eigenvalues;
  EigenOrdering ordering = EigenOrdering::Magnitude;
};

ScreeData scree(const AdjacencyMatrix& a, std::optional<int> top_m = std::nullopt,
                EigenOrdering ordering = EigenOrdering::Magnitude);
ScreeData scree(const Matrix& m, std::optional<int> top_m = std::nullopt,
                EigenOrdering ordering = EigenOrdering::Magnitude);

/// Profile-likelihood elbow of a descending sequence: the split q that
/// maximizes the log-likelihood of modelling {v_1..v_q} and {v_q+1..} as two
/// Gaussian samples with separate means and a pooled variance. which_elbow=2
/// recurses past the first elbow and returns first + tail elbow.
/// Requires at least 3 values sorted descending.
int profile_likelihood_elbow(const std::vector<double>& values, int which_elbow = 1);
int profile_likelihood_elbow(const Vector& values, int which_elbow = 1);

/// Elbow of the magnitude scree; the usual automatic choice of d_hat.
int select_dimension(const AdjacencyMatrix& a);

}  // namespace vsparse
