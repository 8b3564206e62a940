#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "bwalk/errors.hpp"
#include "bwalk/exact_oracle.hpp"
#include "bwalk/hamming.hpp"
#include "bwalk/moments.hpp"
#include "bwalk/perturbation.hpp"
#include "bwalk/spectral.hpp"
#include "support.hpp"

using namespace bwalk;
using fixtures::random_signs;

namespace {

MomentConfig config(const EnsembleKind& k, std::uint64_t samples, std::uint64_t seed) {
  MomentConfig c;
  c.kind = k;
  c.samples = samples;
  c.seed = seed;
  return c;
}

double median(std::vector<double> v) {
  std::nth_element(v.begin(), v.begin() + v.size() / 2, v.end());
  return v[v.size() / 2];
}

}  // namespace

TEST(Moments, ConfigValidation) {
  auto c = config(EnsembleKind::real_symmetric(10), 100, 1);
  EXPECT_EQ(burst_length(c), 3u);  // round(10^0.5)
  c.c = 1.0;
  EXPECT_THROW(burst_length(c), ConfigError);
  c.c = 0.5;
  c.samples = 99;
  EXPECT_THROW(burst_length(c), ConfigError);
  c.samples = 100;
  c.dt = 56;
  EXPECT_THROW(burst_length(c), ConfigError);
  EXPECT_THROW(estimate(c, SignVector(EnsembleKind::real_symmetric(11))), ConfigError);
}

TEST(Moments, ZeroBurstGivesZeros) {
  Stream rng(71);
  for (const auto& k : {EnsembleKind::real_symmetric(8), EnsembleKind::rectangular(8, 4)}) {
    auto c = config(k, 200, 3);
    c.dt = 0;
    c.higher = true;
    const auto e = estimate(c, random_signs(k, rng));
    for (double v : e.drift) EXPECT_EQ(v, 0.0);
    for (double v : e.diff) EXPECT_EQ(v, 0.0);
    EXPECT_TRUE(e.second.isZero(0));
    EXPECT_TRUE(e.third.isZero(0));
    EXPECT_TRUE(e.fourth.isZero(0));
  }
}

TEST(Moments, SingleStepMatchesEnumeration) {
  // dt = 1 from a fixed anchor: all d flips and the stay, each weight 1/(d+1).
  Stream rng(72);
  for (const auto& k : {EnsembleKind::real_symmetric(4), EnsembleKind::real_symmetric(8),
                        EnsembleKind::imaginary_antisymmetric(7), EnsembleKind::rectangular(6, 3)}) {
    const auto start = random_signs(k, rng);
    auto c = config(k, 40000, 5);
    c.dt = 1;
    c.equilibration = 0;
    c.higher = true;
    const auto e = estimate(c, start);
    const auto x = oracle::exhaustive_moments(realize(start), 1);
    ASSERT_EQ(e.deta, x.deta);
    for (int i = 0; i < x.drift.size(); ++i) {
      EXPECT_NEAR(e.drift[i], x.drift[i], 3 * e.drift_se[i] + 1e-12) << k.describe() << " nu " << i;
      EXPECT_NEAR(e.diff[i], x.second(i, i), 3 * e.diff_se[i] + 1e-12) << k.describe() << " nu " << i;
    }
    // third moments: within 5% of the largest entry
    const double scale = x.third.cwiseAbs().maxCoeff();
    EXPECT_LE((e.third - x.third).cwiseAbs().maxCoeff(), 0.05 * scale) << k.describe();
  }
}

TEST(Moments, WorkerCountIndependent) {
  Stream rng(73);
  const auto k = EnsembleKind::real_symmetric(12);
  const auto start = random_signs(k, rng);
  auto c = config(k, 640, 9);
  const auto a = estimate(c, start);
  c.workers = 4;
  const auto b = estimate(c, start);
  for (std::size_t i = 0; i < a.drift.size(); ++i) {
    EXPECT_NEAR(a.drift[i], b.drift[i], 1e-12 * std::fabs(a.drift[i]) + 1e-15);
    EXPECT_NEAR(a.diff[i], b.diff[i], 1e-12 * a.diff[i] + 1e-15);
  }
  EXPECT_EQ(to_json(a).dump(), to_json(b).dump());
}

TEST(Moments, DiagonalNonnegativeAndFinite) {
  Stream rng(74);
  const auto k = EnsembleKind::rectangular(20, 10);
  const auto e = estimate(config(k, 500, 11), random_signs(k, rng));
  ASSERT_EQ(e.diff.size(), 10u);
  for (std::size_t i = 0; i < e.diff.size(); ++i) {
    EXPECT_GE(e.diff[i], 0.0);
    EXPECT_TRUE(std::isfinite(e.drift_se[i]));
    EXPECT_TRUE(std::isfinite(e.diff_se[i]));
  }
  EXPECT_EQ(e.discarded, 0u);
}

TEST(Moments, BurstTraceIdentities) {
  Stream rng(75);
  for (const auto& k : {EnsembleKind::real_symmetric(30), EnsembleKind::rectangular(30, 15)}) {
    const auto s = random_signs(k, rng);
    const auto before = realize(s);
    const auto l0 = eigenvalues(before).values;
    for (int r = 0; r < 20; ++r) {
      WalkState st{s, 0};
      for (int i = 0; i < 6; ++i) step(st, rng);
      const auto after = realize(st.signs);
      const auto l1 = eigenvalues(after).values;
      double sum_d = 0, fixed = 0;
      for (std::size_t i = 0; i < l0.size(); ++i) {
        const double dl = l1[i] - l0[i];
        sum_d += dl;
        fixed += k.square() ? 2 * l0[i] * dl + dl * dl : dl;
      }
      const Eigen::MatrixXd db = after.entries - before.entries;
      const double tr = k.square() ? db.trace()
                                   : wishart_increment(before.entries, db).trace();
      EXPECT_NEAR(sum_d, tr, 1e-9);
      EXPECT_NEAR(fixed, 0.0, 1e-9);
    }
  }
}

TEST(Moments, MatrixDriftKappa) {
  const auto r = matrix_drift_check(EnsembleKind::real_symmetric(50), 100000, 7, 13);
  EXPECT_GE(r.kappa, -2.1);
  EXPECT_LE(r.kappa, -1.9);
  const double d = 1275, deta = 7 / d;
  EXPECT_DOUBLE_EQ(r.kappa_exact, (std::pow(1 - 2 / (d + 1), 7) - 1) / deta);
  EXPECT_NEAR(r.kappa, r.kappa_exact, 4 * r.kappa_se);
  EXPECT_THROW(matrix_drift_check(EnsembleKind::real_symmetric(5), 100, 0, 1), ConfigError);
}

TEST(Moments, WishartFirstOrder) {
  const auto r = matrix_drift_check(EnsembleKind::rectangular(60, 30), 20000, 7, 14);
  EXPECT_GE(r.wishart_a, 3.8);
  EXPECT_LE(r.wishart_a, 4.2);
}

TEST(Moments, OffdiagSynthetic) {
  // i.i.d. unit-variance increments: off-diagonal covariance is pure noise
  const int n = 10, samples = 100000;
  Stream rng(76);
  MomentEstimate e;
  e.kind = EnsembleKind::real_symmetric(n);
  e.deta = 1;
  e.second = Eigen::MatrixXd::Zero(n, n);
  for (int s = 0; s < samples; ++s) {
    Eigen::VectorXd x(n);
    for (int i = 0; i < n; ++i) x[i] = rng.uniform01() - 0.5;
    e.second += x * x.transpose() / samples;
  }
  for (int i = 0; i < n; ++i) e.diff.push_back(e.second(i, i));
  for (int i = 2; i < 8; ++i) e.bulk.push_back(i);
  const auto r = offdiag_ratios(e);
  EXPECT_LE(r.median_ratio, 3.0 / std::sqrt(samples));
}

TEST(Moments, OffdiagShrinksWithN) {
  Stream rng(77);
  std::vector<double> med;
  for (int n : {50, 150}) {
    const auto k = EnsembleKind::real_symmetric(n);
    med.push_back(offdiag_suppression(config(k, 2000, 15), random_signs(k, rng)).median_ratio);
  }
  EXPECT_LT(med[1], med[0]);
}

TEST(Moments, AntisymmetricPairing) {
  Stream rng(78);
  const auto k = EnsembleKind::imaginary_antisymmetric(21);
  const auto r = offdiag_suppression(config(k, 500, 16), random_signs(k, rng));
  EXPECT_LE(r.pair_deviation, 1e-9);
}

TEST(Moments, HigherMomentRatioShrinks) {
  Stream rng(79);
  std::vector<MomentConfig> cfgs;
  for (int n : {50, 100, 150}) cfgs.push_back(config(EnsembleKind::real_symmetric(n), 2000, 17));
  const auto rep = higher_moment_scaling(cfgs);
  ASSERT_EQ(rep.rows.size(), 3u);
  EXPECT_LT(rep.rows[2].fourth_ratio, rep.rows[0].fourth_ratio);
  EXPECT_LT(rep.rows[2].third_ratio, rep.rows[0].third_ratio);
  EXPECT_THROW(higher_moment_scaling({cfgs[0], cfgs[1]}), ConfigError);
  const auto j = to_json(rep);
  EXPECT_EQ(j["rows"].size(), 3u);
}

TEST(Moments, JsonShape) {
  Stream rng(80);
  const auto k = EnsembleKind::real_symmetric(10);
  const auto j = to_json(estimate(config(k, 100, 18), random_signs(k, rng)));
  for (const char* key : {"kind", "N", "M", "c", "dt", "samples", "per_nu", "offdiag_max_ratio", "higher"})
    EXPECT_TRUE(j.contains(key)) << key;
  EXPECT_EQ(j["per_nu"].size(), 10u);
  for (const char* key : {"lambda", "drift", "drift_se", "diff", "diff_se", "theory_drift", "theory_diff"})
    EXPECT_TRUE(j["per_nu"][0].contains(key)) << key;
}
