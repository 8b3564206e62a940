#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "bwalk/ensemble.hpp"
#include "bwalk/metawalk.hpp"

namespace bwalk::oracle {

inline constexpr std::size_t kMaxFloatDimension = 20;
inline constexpr std::size_t kMaxRationalDimension = 12;
inline constexpr std::size_t kMaxPairEnumerationDimension = 14;

/// Law over all 2^d hypercube vertices. Vertex v has entry i negative iff
/// bit i of v is set (SignVector::to_state).
struct FullStateDistribution {
  std::size_t d = 0;
  std::vector<double> probs;

  static FullStateDistribution delta(std::size_t d, std::uint64_t state = 0);
  static FullStateDistribution uniform(std::size_t d);
  double mass() const;
};

/// One lazy step, new[v] = (old[v] + sum_i old[v ^ (1 << i)]) / (d + 1).
FullStateDistribution apply_walk_operator(const FullStateDistribution& p);

/// Exact rational version, d <= 12.
std::vector<Rational> apply_walk_operator_exact(const std::vector<Rational>& p, std::size_t d);

/// ln ||rho^t delta_0 - uniform||_1 for t = 0..t_max, d <= 12. Integer
/// numerators over (d+1)^t, so the tail stays exact far below 1e-16.
std::vector<double> log_l1_to_uniform_exact(std::size_t d, std::uint64_t t_max);

/// Least-squares slope of log_l1_to_uniform_exact over [t_lo, t_hi] divided
/// by ln(1 - 2/(d+1)).
double decay_rate_ratio(std::size_t d, std::uint64_t t_lo, std::uint64_t t_hi);

/// P(X) with X the Hamming distance to `origin`.
std::vector<double> hamming_marginal(const FullStateDistribution& p, std::uint64_t origin = 0);

/// P_dt(X) for X = 0..d after dt steps from `start`, by full-state operator
/// powers and Hamming bucketing.
std::vector<double> exact_transition_kernel(const SignVector& start, std::uint64_t dt);
std::vector<Rational> exact_transition_kernel_rational(std::size_t d, std::uint64_t dt);

/// Largest deviation between the full-state probability that a fixed set of
/// l entries all differ from the start (l = 1, 2) and the path-count assembly
/// sum_X P_dt(X) Phi^(l)_X / |Omega_X|.
double phi_assembly_error(std::size_t d, std::uint64_t dt);

/// Discrete stationary spectral measure: spectra of all 2^d matrices merged
/// at 1e-9 (max-norm) with uniform weights.
struct SpectralMeasure {
  EnsembleKind kind;
  std::vector<std::vector<double>> atoms;
  std::vector<double> weights;
  std::vector<std::uint32_t> atom_of_state;  // indexed by SignVector::to_state
};

SpectralMeasure exact_stationary_spectral_measure(const EnsembleKind& kind, double merge = 1e-9);

/// Load from / store to `dir`, keyed by (kind, N, M); computes on a miss.
SpectralMeasure cached_stationary_measure(const EnsembleKind& kind,
                                          const std::filesystem::path& dir);
void save_measure(const std::filesystem::path& file, const SpectralMeasure& m);
std::optional<SpectralMeasure> load_measure(const std::filesystem::path& file,
                                            const EnsembleKind& kind);

/// Empirical law of atoms from independent walkers run `steps` steps from
/// the all +1 vertex (walker k on stream (seed, Sampler, k)).
std::vector<double> sample_stationary_atoms(const SpectralMeasure& m, std::uint64_t samples,
                                            std::uint64_t steps, std::uint64_t seed);

/// Exact moments over all (d + 1)^dt step sequences from `b` (dt in {1, 2}),
/// divided by deta = dt / d.
struct ExactMoments {
  std::uint64_t dt = 0;
  double deta = 0;
  Eigen::VectorXd drift;
  Eigen::MatrixXd second, third, fourth;
  Eigen::MatrixXd mean_delta;  // E[dB] (not divided by deta)
};

ExactMoments exhaustive_moments(const ScaledMatrix& b, std::uint64_t dt);

/// The same quantities assembled from the Hamming kernel and uniform
/// weighting of the flipped subsets: sum_X P_dt(X) / C(d, X) sum_{|S| = X}.
ExactMoments assembled_moments(const ScaledMatrix& b, std::uint64_t dt);

}  // namespace bwalk::oracle
