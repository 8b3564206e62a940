#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "bwalk/ensemble.hpp"

namespace bwalk {

/// Ascending spectral vector of a scaled matrix: eigenvalues of B (real
/// symmetric), of H = iA (antisymmetric) or of W = B^T B (rectangular).
struct Spectrum {
  EnsembleKind kind;
  std::vector<double> values;
  /// Antisymmetric only: pair_index[i] is the index of -values[i].
  std::vector<int> pair_index;
  /// sum lambda^2 for square kinds, sum lambda for Rectangular.
  double trace2 = 0;

  /// Antisymmetric only: the strictly positive eigenvalues, ascending.
  std::vector<double> positive_half() const;
};

/// Orthonormal eigenvectors as columns aligned with Spectrum::values. `imag`
/// is empty for the real kinds.
struct EigenBasis {
  Eigen::MatrixXd real;
  Eigen::MatrixXd imag;
  std::vector<double> sup_norms;

  bool is_complex() const { return imag.size() != 0; }
  Eigen::Index size() const { return real.cols(); }
  /// max |V^dagger V - I|.
  double orthonormality_residual() const;
};

struct Decomposition {
  Spectrum spectrum;
  EigenBasis basis;
};

Decomposition spectrum(const ScaledMatrix& m);

/// Eigenvalues only (cheaper; used inside Monte Carlo loops).
Spectrum eigenvalues(const ScaledMatrix& m);

/// FNV-1a hash of the matrix bytes, reported with numerical failures.
std::uint64_t matrix_hash(const Eigen::MatrixXd& m);

/// Throws NumericalError if the kind's fixed-trace / symmetry invariants fail
/// at the given tolerance.
void check_invariants(const Spectrum& s, double tol = 1e-10);

/// Smallest consecutive gap of an ascending list.
double min_gap(std::span<const double> values);

/// True iff all consecutive gaps exceed tol.
bool is_simple(std::span<const double> values, double tol = 1e-9);

struct DelocalizationReport {
  std::vector<double> sup_norm;
  std::vector<double> participation;
  std::vector<int> flagged;  // sup_norm > threshold * sqrt(ln N / N)
  double reference = 0;      // sqrt(ln N / N)
  double threshold = 0;
  double median_sup_norm = 0;
};

DelocalizationReport delocalization_report(const EigenBasis& basis, double threshold = 5.0);

/// Index range [first, last) of the central bulk after cutting `edge` of the
/// indices from each side.
std::pair<int, int> bulk_range(int n, double edge = 0.2);

struct GapReport {
  double min_gap = 0;
  double mean_gap = 0;
  double bulk_mean_gap = 0;  // central 60% of indices
  std::vector<double> gaps;
};

GapReport gap_report(std::span<const double> values);

}  // namespace bwalk
