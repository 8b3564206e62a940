#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "bwalk/ensemble.hpp"
#include "bwalk/stats.hpp"

namespace bwalk {

struct MomentConfig {
  EnsembleKind kind = EnsembleKind::real_symmetric(2);
  double c = 0.5;  // dt = round(N^c)
  std::uint64_t samples = 10000;
  /// Steps walked from the start vector before the first anchor; default
  /// ceil(2 t_crit).
  std::optional<std::uint64_t> equilibration;
  std::uint64_t seed = 1;
  /// Overrides round(N^c). 0 is accepted (all moments vanish).
  std::optional<std::uint64_t> dt;
  /// 0: every burst starts from the same anchor. Otherwise a new anchor is
  /// drawn after this many bursts by walking reanchor_steps further.
  std::uint64_t bursts_per_anchor = 0;
  std::uint64_t reanchor_steps = 0;  // 0: d_N / 10
  bool higher = false;               // third and fourth moments
  unsigned workers = 1;
  std::uint64_t blocks = 64;  // jackknife blocks (and units of parallel work)
};

/// Validates the config and returns the burst length.
std::uint64_t burst_length(const MomentConfig& cfg);

/// Time-averaged moments over the full sorted spectrum (N values for square
/// kinds, M for Rectangular), divided by deta = dt / d_N.
struct MomentEstimate {
  EnsembleKind kind = EnsembleKind::real_symmetric(2);
  double c = 0;
  std::uint64_t dt = 0;
  double deta = 0;
  std::uint64_t samples = 0;
  std::uint64_t discarded = 0;
  std::uint64_t anchors = 0;
  std::uint64_t seed = 0;

  std::vector<double> lambda;  // anchor spectrum (burst-weighted mean over anchors)
  std::vector<double> drift, drift_se;
  std::vector<double> diff, diff_se;
  Eigen::MatrixXd second;  // M_{nu mu}
  Eigen::MatrixXd third;   // M_{nu nu mu} (empty unless requested)
  Eigen::MatrixXd fourth;  // M_{nu nu mu mu}
  std::vector<double> theory_drift, theory_diff;
  /// Indices entering the coefficient fits: central 60%, zero mode excluded.
  std::vector<int> bulk;
};

/// Run config.samples bursts from `start` (see MomentConfig for anchoring).
MomentEstimate estimate(const MomentConfig& cfg, const SignVector& start);

/// Mean over bulk indices of N * M_nu nu.
double bulk_scaled_diffusion(const MomentEstimate& e);

/// Weighted fit of M_nu nu against lambda through the origin over the bulk;
/// returns N * slope (theory 16 for Rectangular).
stats::Regression diffusion_slope(const MomentEstimate& e);

/// stats::drift_regression of empirical against theory drift on the bulk.
stats::Regression drift_agreement(const MomentEstimate& e);

struct OffdiagReport {
  double max_ratio = 0;     // max_{nu != mu} |M_nu mu| / bulk mean M_nu nu
  double median_ratio = 0;  // median of the same over bulk pairs
  /// Antisymmetric only: max over bulk nu of |M_{nu nu*} + M_nu nu| / M_nu nu.
  double pair_deviation = 0;
};

/// Off-diagonal second moments relative to the diagonal. Pairs (nu, nu*) of
/// the antisymmetric kind are excluded from the ratios.
OffdiagReport offdiag_ratios(const MomentEstimate& e);
OffdiagReport offdiag_suppression(const MomentConfig& cfg, const SignVector& start);

struct MatrixDriftReport {
  double kappa = 0;  // E[dB] ~ kappa deta B
  double kappa_se = 0;
  double kappa_exact = 0;  // ((1 - 2/(d+1))^dt - 1) / deta
  /// Rectangular only: E[<nu|dW|nu>]/deta ~ A (1 - lambda_nu).
  double wishart_a = 0;
  double wishart_a_se = 0;
  std::uint64_t samples = 0;
};

MatrixDriftReport matrix_drift_check(const EnsembleKind& kind, std::uint64_t samples,
                                     std::uint64_t dt, std::uint64_t seed, unsigned workers = 1);

struct HigherMomentRow {
  int n = 0;
  double diffusion = 0;       // bulk mean M_nu nu
  double third_median = 0;    // median |M_nu nu mu| over bulk nu != mu
  double fourth_median = 0;   // median |M_nu nu mu mu|
  double third_ratio = 0;     // third_median / diffusion
  double fourth_ratio = 0;    // fourth_median / diffusion^2
};

struct HigherMomentReport {
  std::vector<HigherMomentRow> rows;
  stats::Regression third_slope;   // log |M_nu nu mu| vs log N
  stats::Regression fourth_slope;
  stats::Regression third_ratio_slope;
  stats::Regression fourth_ratio_slope;
};

/// Runs estimate() with higher moments on each config (>= 3 distinct N).
HigherMomentReport higher_moment_scaling(const std::vector<MomentConfig>& configs);

nlohmann::json to_json(const MomentEstimate& e);
nlohmann::json to_json(const HigherMomentReport& r);

}  // namespace bwalk
