#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "bwalk/ensemble.hpp"

namespace bwalk::stats {

/// sup |F_n - F| of the empirical CDF of `samples` against `cdf`.
double ks_distance(std::vector<double> samples, const std::function<double(double)>& cdf);

/// Unfold each spectrum by n * F(lambda) with F the kind's integrated
/// limiting density (n = spectrum length) and return consecutive spacings
/// from the central bulk (edge fraction cut per side).
std::vector<double> unfold_and_spacings(const std::vector<std::vector<double>>& spectra,
                                        const EnsembleKind& kind, double edge = 0.2);

/// Same with an explicit integrated density.
std::vector<double> unfold_and_spacings(const std::vector<std::vector<double>>& spectra,
                                        const std::function<double(double)>& cdf,
                                        double edge = 0.2);

// Spacing-distribution fixtures (standard Wigner surmises and Poisson).
double goe_surmise_pdf(double s);  // (pi s / 2) exp(-pi s^2 / 4)
double goe_surmise_cdf(double s);
double gue_surmise_pdf(double s);  // (32 / pi^2) s^2 exp(-4 s^2 / pi)
double gue_surmise_cdf(double s);
double poisson_spacing_cdf(double s);

struct Regression {
  double slope = 0;
  double intercept = 0;
  double r2 = 0;
  double slope_se = 0;
  std::size_t n = 0;
};

/// Weighted least squares y ~ a + b x. R^2 is the weighted coefficient of
/// determination. Throws ConfigError on a degenerate design.
Regression weighted_regression(std::span<const double> x, std::span<const double> y,
                               std::span<const double> w);

/// Weighted fit y ~ b x through the origin; r2 uses the uncentred total.
Regression weighted_regression_origin(std::span<const double> x, std::span<const double> y,
                                      std::span<const double> w);

/// Empirical drift against theory drift with weights 1/se^2. Needs >= 10
/// points.
Regression drift_regression(std::span<const double> empirical, std::span<const double> se,
                            std::span<const double> theory);

/// Half-L1 distance of two samples binned on their common range.
double tv_empirical(std::span<const double> a, std::span<const double> b, int bins);

/// Half-L1 distance of two discrete laws on the same support.
double tv_discrete(std::span<const double> p, std::span<const double> q);

struct Histogram {
  double lo = 0, hi = 0;
  std::vector<std::uint64_t> counts;
  std::uint64_t total = 0;  // samples inside [lo, hi]

  double width() const { return (hi - lo) / static_cast<double>(counts.size()); }
  double density(std::size_t b) const;
};

Histogram histogram(std::span<const double> samples, int bins, double lo, double hi);
void write_histogram_csv(std::ostream& os, const Histogram& h);

/// Delete-one-block jackknife of the ratio estimator sum(s)/sum(c).
struct Jackknife {
  double estimate = 0;
  double se = 0;
};
Jackknife block_jackknife(std::span<const double> block_sums, std::span<const double> block_counts);

/// Spearman rank correlation (average ranks for ties).
double spearman(std::span<const double> x, std::span<const double> y);

struct ComparisonReport {
  std::string name;
  double statistic = 0;
  double threshold = 0;
  bool pass = false;
  std::vector<std::uint64_t> sample_sizes;
  std::uint64_t seed = 0;

  static ComparisonReport make(std::string name, double statistic, double threshold,
                               std::vector<std::uint64_t> sizes = {}, std::uint64_t seed = 0);
};

nlohmann::json to_json(const ComparisonReport& r);

}  // namespace bwalk::stats
