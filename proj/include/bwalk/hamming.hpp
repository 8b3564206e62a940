#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "bwalk/metawalk.hpp"

namespace bwalk {

/// Law of the Hamming distance X in {0..d} at time t.
struct HammingDistribution {
  std::size_t d = 0;
  std::vector<double> probs;
  std::uint64_t t = 0;

  static HammingDistribution delta(std::size_t d, std::size_t x = 0);
  double mass() const;
};

struct TransitionProbs {
  Rational down, stay, up;
};

/// down = X/(d+1), stay = 1/(d+1), up = (d-X)/(d+1).
TransitionProbs transition_probs(std::size_t d, std::size_t x);

/// One step of the birth-death recursion.
HammingDistribution evolve_distribution(const HammingDistribution& p);
HammingDistribution evolve_distribution(HammingDistribution p, std::uint64_t steps);

/// Binomial C(d, X) / 2^d.
HammingDistribution stationary(std::size_t d);

/// Lambda_j = 1 - 2j/(d+1), j = 0..d (descending).
std::vector<Rational> walk_operator_spectrum(std::size_t d);

/// One-sided TV: sum over {P >= Q} of (P - Q).
double tv_distance(std::span<const double> p, std::span<const double> q);

/// d ln(d) / 4.
double t_crit(std::size_t d);

/// Erf with the 1/(2 pi) weight used for the asymptotic TV formula:
/// int_0^x exp(-z^2)/(2 pi) dz = erf(x) / (4 sqrt(pi)).
double erf_small(double x);

/// Asymptotic TV at time t: erf_small(exp(-2c)/sqrt(8)), c = (t - t_crit)/d.
double tv_asymptotic(double t, std::size_t d);

/// Same expression with the standard erf. This is the variant that tracks the
/// exact curve; the two differ by the constant factor 4 sqrt(pi).
double tv_asymptotic_standard(double t, std::size_t d);

/// Large-c tail exp(-2c)/sqrt(2 pi).
double tv_tail(double t, std::size_t d);

struct TvPoint {
  std::uint64_t t;
  double eta;
  double exact;
  double asymptotic;
  double asymptotic_standard;
  double tail;
};

/// TV curve from delta_0 for t = 0, stride, 2 stride, ... <= t_max.
std::vector<TvPoint> tv_curve(std::size_t d, std::uint64_t t_max, std::uint64_t stride = 1);

/// Distribution mapped to xi = (X - d/2)/sqrt(d) with density P sqrt(d).
struct OuProfile {
  std::vector<double> xi;
  std::vector<double> density;
  double mean = 0;
  double variance = 0;
  double drift_slope = -2.0;  // F(xi) = -2 xi
  double diffusion = 0.5;

  double drift(double x) const { return drift_slope * x; }
};

OuProfile ou_limit(const HammingDistribution& p);

struct OuDriftFit {
  double slope = 0;  // OLS slope of dxi/deta on xi
  double intercept = 0;
  double slope_se = 0;
  double log_slope = 0;  // ln(rho)/deta from the lag regression xi' = rho xi
  double deta = 0;
  std::size_t pairs = 0;
};

/// Drift fit over consecutive samples of Hamming trajectories. Only pairs
/// separated by the most common sampling interval are used. The raw slope is
/// biased by O(deta) (it estimates (exp(-2 deta) - 1)/deta); log_slope is not.
OuDriftFit ou_drift_regression(const std::vector<WalkTrajectory>& trajectories);

}  // namespace bwalk
