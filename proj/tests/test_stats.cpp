#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "bwalk/errors.hpp"
#include "bwalk/spectral.hpp"
#include "bwalk/stats.hpp"
#include "bwalk/theory.hpp"
#include "support.hpp"

using namespace bwalk;
using fixtures::random_matrix;

namespace {

// Inverse-CDF draw by bisection.
double draw(const std::function<double(double)>& cdf, double lo, double hi, double u) {
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    (cdf(mid) < u ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<std::vector<double>> stationary_spectra(const EnsembleKind& k, int draws, Stream& rng) {
  std::vector<std::vector<double>> out;
  for (int r = 0; r < draws; ++r) out.push_back(eigenvalues(random_matrix(k, rng)).values);
  return out;
}

std::vector<double> pool(const std::vector<std::vector<double>>& spectra) {
  std::vector<double> all;
  for (const auto& s : spectra) all.insert(all.end(), s.begin(), s.end());
  return all;
}

}  // namespace

TEST(Stats, KsNull) {
  Stream rng(61);
  const int n = 10000;
  std::vector<double> x(n);
  for (auto& v : x) v = draw(theory::semicircle_cdf, -2, 2, rng.uniform01());
  const double ks = stats::ks_distance(x, theory::semicircle_cdf);
  EXPECT_GE(ks, 0.0);
  EXPECT_LE(ks, 1.63 / std::sqrt(n));
  EXPECT_GE(stats::ks_distance(std::vector<double>(200, 0.0), theory::semicircle_cdf), 0.5);
  EXPECT_THROW(stats::ks_distance({}, theory::semicircle_cdf), ConfigError);
}

TEST(Stats, KsSemicircleN200) {
  Stream rng(62);
  const auto k = EnsembleKind::real_symmetric(200);
  const auto all = pool(stationary_spectra(k, 500, rng));
  EXPECT_LE(stats::ks_distance(all, theory::semicircle_cdf), 0.02);
}

TEST(Stats, UnfoldingSynthetic) {
  const auto uniform = [](double x) { return std::clamp(x, 0.0, 1.0); };
  std::vector<double> s(100);
  for (int i = 0; i < 100; ++i) s[i] = (i + 0.5) / 100;
  const auto sp = stats::unfold_and_spacings({s}, uniform);
  ASSERT_FALSE(sp.empty());
  for (double v : sp) EXPECT_NEAR(v, 1.0, 1e-12);

  // iid draws from the semicircle unfold to mean spacing 1
  Stream rng(63);
  std::vector<double> x(20000);
  for (auto& v : x) v = draw(theory::semicircle_cdf, -2, 2, rng.uniform01());
  std::sort(x.begin(), x.end());
  const auto u = stats::unfold_and_spacings({x}, EnsembleKind::real_symmetric(20000));
  EXPECT_NEAR(std::accumulate(u.begin(), u.end(), 0.0) / u.size(), 1.0, 0.02);
  for (double v : u) EXPECT_GE(v, 0.0);
}

TEST(Stats, SpacingClasses) {
  Stream rng(64);
  const auto rs = EnsembleKind::real_symmetric(200);
  auto sp = stats::unfold_and_spacings(stationary_spectra(rs, 100, rng), rs);
  EXPECT_NEAR(std::accumulate(sp.begin(), sp.end(), 0.0) / sp.size(), 1.0, 0.02);
  EXPECT_LT(stats::ks_distance(sp, stats::goe_surmise_cdf),
            stats::ks_distance(sp, stats::poisson_spacing_cdf));

  const auto as = EnsembleKind::imaginary_antisymmetric(200);
  sp = stats::unfold_and_spacings(stationary_spectra(as, 100, rng), as);
  const double gue = stats::ks_distance(sp, stats::gue_surmise_cdf);
  EXPECT_LT(gue, stats::ks_distance(sp, stats::poisson_spacing_cdf));
  EXPECT_LT(gue, stats::ks_distance(sp, stats::goe_surmise_cdf));
}

TEST(Stats, SurmiseNormalization) {
  for (auto [pdf, cdf] : {std::pair{stats::goe_surmise_pdf, stats::goe_surmise_cdf},
                          std::pair{stats::gue_surmise_pdf, stats::gue_surmise_cdf}}) {
    double mass = 0, mean = 0;
    const double h = 1e-4;
    for (double s = h / 2; s < 10; s += h) {
      mass += pdf(s) * h;
      mean += s * pdf(s) * h;
    }
    EXPECT_NEAR(mass, 1.0, 1e-8);
    EXPECT_NEAR(mean, 1.0, 1e-8);
    EXPECT_NEAR(cdf(10.0), 1.0, 1e-12);
  }
}

TEST(Stats, Regression) {
  std::vector<double> x, y, w;
  for (int i = 0; i < 20; ++i) {
    x.push_back(-3.0 + 0.37 * i);
    w.push_back(1.0 + i % 3);
  }
  auto r = stats::drift_regression(x, std::vector<double>(20, 0.1), x);
  EXPECT_NEAR(r.slope, 1.0, 1e-12);
  EXPECT_NEAR(r.intercept, 0.0, 1e-12);
  EXPECT_NEAR(r.r2, 1.0, 1e-12);
  for (double v : x) y.push_back(2.0 * v);
  EXPECT_NEAR(stats::drift_regression(y, std::vector<double>(20, 0.1), x).slope, 2.0, 1e-12);

  y.clear();
  for (double v : x) y.push_back(3.217 * v - 0.4113);
  r = stats::weighted_regression(x, y, w);
  EXPECT_NEAR(r.slope, 3.217, 5e-4);
  EXPECT_NEAR(r.intercept, -0.4113, 5e-5);
  r = stats::weighted_regression_origin(x, x, w);
  EXPECT_NEAR(r.slope, 1.0, 1e-12);

  EXPECT_THROW(stats::weighted_regression(std::vector<double>(20, 1.0), y, w), ConfigError);
  EXPECT_THROW(stats::drift_regression(std::vector<double>(5, 1.0), std::vector<double>(5, 1.0),
                                       std::vector<double>{1, 2, 3, 4, 5}),
               ConfigError);
}

TEST(Stats, TvEmpirical) {
  const std::vector<double> a{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  EXPECT_EQ(stats::tv_empirical(a, a, 10), 0.0);
  std::vector<double> b;
  for (double v : a) b.push_back(v + 5);
  EXPECT_DOUBLE_EQ(stats::tv_empirical(a, b, 10), 1.0);
  EXPECT_THROW(stats::tv_empirical({}, a, 10), ConfigError);

  Stream rng(65);
  const auto k = EnsembleKind::real_symmetric(100);
  const auto p = pool(stationary_spectra(k, 1000, rng));
  const auto q = pool(stationary_spectra(k, 1000, rng));
  const double tv = stats::tv_empirical(p, q, 50);
  EXPECT_GE(tv, 0.0);
  EXPECT_LE(tv, 0.05);
}

TEST(Stats, TvDiscrete) {
  EXPECT_DOUBLE_EQ(stats::tv_discrete(std::vector<double>{1, 0}, std::vector<double>{0, 1}), 1.0);
  EXPECT_DOUBLE_EQ(stats::tv_discrete(std::vector<double>{0.5, 0.5}, std::vector<double>{0.25, 0.75}),
                   0.25);
  EXPECT_THROW(stats::tv_discrete(std::vector<double>{1}, std::vector<double>{0.5, 0.5}), ConfigError);
}

TEST(Stats, Histogram) {
  const std::vector<double> x{-1.0, 0.05, 0.15, 0.15, 0.95, 1.0, 2.0};
  const auto h = stats::histogram(x, 10, 0.0, 1.0);
  EXPECT_EQ(h.total, 5u);  // the right edge is inclusive
  EXPECT_EQ(h.counts[0], 1u);
  EXPECT_EQ(h.counts[1], 2u);
  EXPECT_EQ(h.counts[9], 2u);
  double mass = 0;
  for (std::size_t b = 0; b < h.counts.size(); ++b) mass += h.density(b) * h.width();
  EXPECT_NEAR(mass, 1.0, 1e-14);
  std::ostringstream os;
  stats::write_histogram_csv(os, h);
  EXPECT_EQ(os.str().substr(0, os.str().find('\n')), "bin_left,bin_right,count,density");
  EXPECT_THROW(stats::histogram(x, 0, 0.0, 1.0), ConfigError);
}

TEST(Stats, Jackknife) {
  // unit counts: the delete-one jackknife SE of a mean is s / sqrt(n)
  Stream rng(66);
  std::vector<double> s(64), c(64, 1.0);
  for (auto& v : s) v = rng.uniform01();
  const auto j = stats::block_jackknife(s, c);
  const double mean = std::accumulate(s.begin(), s.end(), 0.0) / 64;
  double var = 0;
  for (double v : s) var += (v - mean) * (v - mean);
  var /= 63;
  EXPECT_NEAR(j.estimate, mean, 1e-14);
  EXPECT_NEAR(j.se, std::sqrt(var / 64), 1e-14);

  const auto flat = stats::block_jackknife(std::vector<double>{2, 4, 6}, std::vector<double>{1, 2, 3});
  EXPECT_DOUBLE_EQ(flat.estimate, 2.0);
  EXPECT_NEAR(flat.se, 0.0, 1e-15);
}

TEST(Stats, Spearman) {
  const std::vector<double> x{1, 2, 3, 4, 5};
  EXPECT_DOUBLE_EQ(stats::spearman(x, std::vector<double>{10, 20, 25, 100, 1000}), 1.0);
  EXPECT_DOUBLE_EQ(stats::spearman(x, std::vector<double>{5, 4, 3, 2, 1}), -1.0);
  // average ranks: y ranks {1.5, 1.5, 3, 4, 5}
  const double r = stats::spearman(x, std::vector<double>{1, 1, 2, 3, 4});
  EXPECT_NEAR(r, 9.5 / std::sqrt(10.0 * 9.5), 1e-14);
}

TEST(Stats, ComparisonReport) {
  auto r = stats::ComparisonReport::make("ks", 0.01, 0.02, {100}, 7);
  EXPECT_TRUE(r.pass);
  EXPECT_FALSE(stats::ComparisonReport::make("ks", 0.03, 0.02).pass);
  EXPECT_TRUE(stats::ComparisonReport::make("edge", 0.02, 0.02).pass);
  const auto j = stats::to_json(r);
  EXPECT_EQ(j["test"], "ks");
  EXPECT_EQ(j["pass"], true);
  EXPECT_EQ(j["seed"], 7);
  EXPECT_EQ(j["sample_sizes"][0], 100);
}
