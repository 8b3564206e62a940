#pragma once

#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "bwalk/ensemble.hpp"

namespace bwalk::theory {

// Spectral coordinates by kind:
//   RealSymmetric           the full ascending spectrum (N values);
//   ImaginaryAntisymmetric  the positive half lambda_1 < ... (floor(N/2)
//                           values); for odd N the zero mode is held fixed
//                           and enters through the 4/(N lambda) force;
//   Rectangular             the M eigenvalues of W.

/// Drift M_nu. Throws SingularInputError on coincident coordinates (and on
/// a zero coordinate where the formula has a pole).
std::vector<double> drift(const EnsembleKind& kind, std::span<const double> coords);

/// Antisymmetric drift in full-spectrum form:
/// -2 lambda_nu + (4/N) sum_{mu != nu, nu*} 1/(lambda_nu - lambda_mu),
/// evaluated at every eigenvalue (values ascending, pairs at i and N-1-i).
/// Returns NaN at the zero mode.
std::vector<double> drift_full_antisymmetric(int n, std::span<const double> values);

/// Diffusion M_nu nu: 8/N, 4/N, 16 lambda/N.
std::vector<double> diffusion(const EnsembleKind& kind, std::span<const double> coords);

/// d M_nu nu / d lambda_nu: 0, 0, 16/N.
std::vector<double> diffusion_gradient(const EnsembleKind& kind, std::span<const double> coords);

/// Gradient of log Q~ for the unconstrained surrogate density.
std::vector<double> surrogate_log_density_gradient(const EnsembleKind& kind,
                                                   std::span<const double> coords);

/// max_nu |drift - (diffusion/2 * gradient + gradient(diffusion)/2)|.
double detailed_balance_residual(const EnsembleKind& kind, std::span<const double> coords);

/// Unnormalized log JPDF on the fixed-trace surface. The trace constraint
/// (sum lambda^2 = 2 d/N, positive-half sum = d/N, sum lambda = M) is checked
/// to 1e-8 relative unless check_trace is false; violations throw DomainError.
/// Coincident coordinates give -infinity.
double log_jpdf(const EnsembleKind& kind, std::span<const double> coords, bool check_trace = true);

/// Required value of the fixed-trace functional in the kind's coordinates.
double trace_target(const EnsembleKind& kind);
double trace_functional(const EnsembleKind& kind, std::span<const double> coords);

/// Semicircle sqrt(4 - x^2)/(2 pi) for square kinds, Marchenko-Pastur with
/// ratio M/N for Rectangular.
double limiting_density(const EnsembleKind& kind, double x);
double limiting_cdf(const EnsembleKind& kind, double x);
std::pair<double, double> limiting_support(const EnsembleKind& kind);

double semicircle_density(double x);
double semicircle_cdf(double x);
/// Marchenko-Pastur for ratio c in (0, 1]; throws ConfigError outside.
double marchenko_pastur_density(double c, double x);
double marchenko_pastur_cdf(double c, double x);
std::pair<double, double> marchenko_pastur_support(double c);

/// Integral of the limiting density over its support (adaptive quadrature).
double limiting_mass(const EnsembleKind& kind);

/// OU drift slope and diffusion of the scaled Hamming process: (-2, 1/2).
std::pair<double, double> ou_coefficients();

/// (lambda, rho) rows on `points` equally spaced grid points over the support.
void write_density_csv(std::ostream& os, const EnsembleKind& kind, int points);

}  // namespace bwalk::theory
