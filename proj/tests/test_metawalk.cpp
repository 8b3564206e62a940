#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "bwalk/errors.hpp"
#include "bwalk/metawalk.hpp"

using namespace bwalk;

TEST(Metawalk, ForcedDraws) {
  const auto k = EnsembleKind::real_symmetric(4);
  WalkState st{SignVector(k), 0};
  apply_draw(st, k.dimension());
  EXPECT_EQ(st.signs, SignVector(k));
  EXPECT_EQ(st.t, 1u);
  apply_draw(st, 0);
  EXPECT_TRUE(st.signs.negative(0));
  EXPECT_EQ(st.signs.count_negative(), 1u);
  EXPECT_EQ(st.t, 2u);
  EXPECT_THROW(apply_draw(st, k.dimension() + 1), std::out_of_range);
}

TEST(Metawalk, StayFraction) {
  // d = 10: stay probability 1/11
  const auto k = EnsembleKind::imaginary_antisymmetric(5);
  ASSERT_EQ(k.dimension(), 10u);
  WalkState st{SignVector(k), 0};
  Stream rng(3);
  const int n = 1000000;
  int stays = 0;
  for (int i = 0; i < n; ++i) {
    const auto before = st.signs;
    step(st, rng);
    stays += st.signs == before;
  }
  const double p = 1.0 / 11.0;
  EXPECT_NEAR(static_cast<double>(stays) / n, p, 3.0 * std::sqrt(p * (1 - p) / n));
}

TEST(Metawalk, RunSampling) {
  const auto k = EnsembleKind::real_symmetric(5);  // d = 15, stride 1
  const SignVector start(k);
  WalkState st{start, 0};
  Stream rng(5);
  auto tr = run(st, rng, 0, {hamming_observer(start)});
  ASSERT_EQ(tr.size(), 1u);
  EXPECT_EQ(tr[0].t, std::vector<std::uint64_t>{0});
  EXPECT_EQ(tr[0].values[0][0], 0.0);

  tr = run(st, rng, 25, {hamming_observer(start)}, 10);
  EXPECT_EQ(tr[0].t, (std::vector<std::uint64_t>{0, 10, 20, 25}));
  EXPECT_EQ(default_stride(15), 1u);
  EXPECT_EQ(default_stride(1275), 127u);
}

TEST(Metawalk, Deterministic) {
  const auto k = EnsembleKind::real_symmetric(10);
  const SignVector start(k);
  const auto a = run_walkers(start, 99, 3, 500, {hamming_observer(start)});
  const auto b = run_walkers(start, 99, 3, 500, {hamming_observer(start)});
  std::ostringstream sa, sb;
  write_trajectories_csv(sa, a);
  write_trajectories_csv(sb, b);
  EXPECT_EQ(sa.str(), sb.str());
  EXPECT_EQ(sa.str().substr(0, 32), "walker_id,t,eta,observable,value");
  const auto c = run_walkers(start, 100, 3, 500, {hamming_observer(start)});
  std::ostringstream sc;
  write_trajectories_csv(sc, c);
  EXPECT_NE(sa.str(), sc.str());
}

TEST(Metawalk, HammingSaturation) {
  // N = 50 from all +1: X/(d+1) saturates near 1/2 after eta ~ ln(d)/4.
  const auto k = EnsembleKind::real_symmetric(50);
  const SignVector start(k);
  const auto d = k.dimension();
  const auto tr = run_walkers(start, 2024, 5, 6 * d, {hamming_observer(start)});
  double early = 0, late = 0;
  int ne = 0, nl = 0;
  for (const auto& w : tr)
    for (std::size_t i = 0; i < w.t.size(); ++i) {
      const double f = w.values[i][0] / (d + 1.0);
      if (w.eta[i] <= 0.5) {
        early += f;
        ++ne;
      } else if (w.eta[i] >= 3.0) {
        late += f;
        ++nl;
      }
    }
  EXPECT_LT(early / ne, 0.4);
  EXPECT_NEAR(late / nl, 0.5, 0.01);
}

TEST(Combinatorics, Paths) {
  EXPECT_EQ(count_ordered_paths(6, 2), 15);
  EXPECT_EQ(count_ordered_paths(17, 0), 1);
  EXPECT_EQ(count_ordered_paths(1275, 3), BigInt(344632925));  // 1275*1274*1273/6
  EXPECT_EQ(count_paths_containing(6, 2, 1), 5);
  EXPECT_EQ(count_paths_containing(6, 2, 2), 1);
  EXPECT_EQ(Rational(count_paths_containing(10, 4, 1), count_ordered_paths(10, 4)),
            Rational(4, 10));
  EXPECT_THROW(count_ordered_paths(3, 4), ConfigError);
}

TEST(Combinatorics, InclusionExclusion) {
  // Subsets of size X of d elements, split by whether they contain a fixed
  // l-set: sum_j (-1)^j C(l, j) Phi^(j)_X counts subsets avoiding all l.
  for (std::uint64_t d = 1; d <= 12; ++d)
    for (std::uint64_t x = 0; x <= std::min<std::uint64_t>(d, 6); ++x)
      for (std::uint64_t l = 0; l <= std::min(d, x); ++l) {
        BigInt alt = 0;
        for (std::uint64_t j = 0; j <= l; ++j) {
          const BigInt term = binomial(l, j) * count_paths_containing(d, x, j);
          alt += (j % 2 ? -term : term);
        }
        EXPECT_EQ(alt, binomial(d - l, x));
        if (x >= 1) {
          EXPECT_EQ(count_paths_containing(d, x, 1) * d, count_ordered_paths(d, x) * x);
        }
      }
}

TEST(Combinatorics, ProbMaxDistance) {
  EXPECT_EQ(prob_max_distance_exact(3, 2), Rational(6, 16));
  EXPECT_DOUBLE_EQ(prob_max_distance(3, 2), 0.375);
  EXPECT_EQ(prob_max_distance_exact(40, 0), 1);
  EXPECT_EQ(prob_max_distance_exact(40, 1), Rational(40, 41));
  // The lazy walk gives prod (1 - (j+1)/(d+1)) = 1 - dt(dt+1)/(2(d+1)) + O(dt^4/d^2).
  for (std::uint64_t d : {100u, 1000u, 5000u})
    for (std::uint64_t dt = 1; dt * dt <= d / 4; ++dt) {
      const double p = prob_max_distance(d, dt);
      const double approx = 1.0 - dt * (dt + 1.0) / (2.0 * (d + 1.0));
      const double bound = 2.0 * std::pow(dt * dt / static_cast<double>(d), 2);
      EXPECT_LE(std::fabs(p - approx), bound) << d << " " << dt;
    }
}
