#include <gtest/gtest.h>

#include <cmath>

#include "bwalk/ensemble.hpp"
#include "bwalk/errors.hpp"
#include "bwalk/rng.hpp"
#include "support.hpp"

using namespace bwalk;

namespace {

using fixtures::random_signs;

std::vector<EnsembleKind> kinds() {
  return {EnsembleKind::real_symmetric(7), EnsembleKind::imaginary_antisymmetric(6),
          EnsembleKind::imaginary_antisymmetric(7), EnsembleKind::rectangular(6, 4)};
}

}  // namespace

TEST(Ensemble, Dimension) {
  EXPECT_EQ(EnsembleKind::real_symmetric(50).dimension(), 1275u);
  EXPECT_EQ(EnsembleKind::imaginary_antisymmetric(4).dimension(), 6u);
  EXPECT_EQ(EnsembleKind::rectangular(3, 2).dimension(), 6u);
}

TEST(Ensemble, InvalidDimensionsRejected) {
  EXPECT_THROW(EnsembleKind::real_symmetric(1), ConfigError);
  EXPECT_THROW(EnsembleKind::imaginary_antisymmetric(1), ConfigError);
  EXPECT_THROW(EnsembleKind::rectangular(2, 3), ConfigError);
  EXPECT_THROW(EnsembleKind::rectangular(2, 0), ConfigError);
  EXPECT_THROW(parse_family("gue"), ConfigError);
}

TEST(Ensemble, IndexToEntry) {
  const auto rs = EnsembleKind::real_symmetric(2);
  EXPECT_EQ(rs.entry(0), std::make_pair(0, 0));
  EXPECT_EQ(rs.entry(2), std::make_pair(1, 1));
  EXPECT_EQ(EnsembleKind::rectangular(3, 2).entry(3), std::make_pair(1, 1));
  for (const auto& k : kinds())
    for (std::size_t i = 0; i < k.dimension(); ++i) {
      const auto [p, q] = k.entry(i);
      EXPECT_EQ(k.index(p, q), i);
    }
  EXPECT_THROW(rs.entry(3), std::out_of_range);
}

TEST(Ensemble, RealizeFixtures) {
  const auto m = realize(SignVector(EnsembleKind::real_symmetric(2)));
  EXPECT_DOUBLE_EQ(m.entries(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(m.entries(1, 1), 1.0);
  EXPECT_DOUBLE_EQ(m.entries(0, 1), 1.0 / std::sqrt(2.0));
  EXPECT_DOUBLE_EQ(m.entries(1, 0), 1.0 / std::sqrt(2.0));

  // H = (i/sqrt 3) [[0,1,1],[-1,0,1],[-1,-1,0]], stored as A.
  const auto a = realize(SignVector(EnsembleKind::imaginary_antisymmetric(3)));
  const double s = 1.0 / std::sqrt(3.0);
  EXPECT_DOUBLE_EQ(a.entries(0, 1), s);
  EXPECT_DOUBLE_EQ(a.entries(0, 2), s);
  EXPECT_DOUBLE_EQ(a.entries(1, 2), s);
  EXPECT_DOUBLE_EQ(a.entries(2, 1), -s);
  EXPECT_DOUBLE_EQ(a.entries(0, 0), 0.0);

  const auto rk = EnsembleKind::rectangular(2, 1);
  const auto r = realize(SignVector(rk).flipped(1));
  EXPECT_DOUBLE_EQ(r.entries(0, 0), 1.0 / std::sqrt(2.0));
  EXPECT_DOUBLE_EQ(r.entries(1, 0), -1.0 / std::sqrt(2.0));
}

TEST(Ensemble, FlipDeltaFixtures) {
  const SignVector s(EnsembleKind::real_symmetric(2));
  const auto d0 = flip_delta(s, 0);
  EXPECT_DOUBLE_EQ(d0.entries(0, 0), -2.0);
  EXPECT_DOUBLE_EQ(d0.entries(0, 1), 0.0);
  EXPECT_DOUBLE_EQ(d0.entries(1, 1), 0.0);
  const auto d1 = flip_delta(s, 1);
  EXPECT_DOUBLE_EQ(d1.entries(0, 1), -2.0 / std::sqrt(2.0));
  EXPECT_DOUBLE_EQ(d1.entries(1, 0), -2.0 / std::sqrt(2.0));
  EXPECT_DOUBLE_EQ(d1.entries(0, 0), 0.0);
}

TEST(Ensemble, FlipTwiceIsIdentity) {
  Stream rng(11);
  for (const auto& k : kinds()) {
    const auto s = random_signs(k, rng);
    const auto base = realize(s);
    for (std::size_t i = 0; i < k.dimension(); ++i) {
      EXPECT_EQ(realize(s.flipped(i).flipped(i)).entries, base.entries);
      const Eigen::MatrixXd sum = flip_delta(s, i).entries + flip_delta(s.flipped(i), i).entries;
      EXPECT_EQ(sum.cwiseAbs().maxCoeff(), 0.0);
      auto m = base;
      apply_flip(m, i);
      EXPECT_EQ(m.entries, realize(s.flipped(i)).entries);
    }
  }
}

TEST(Ensemble, SumOfFlipDeltasIsMinusTwoB) {
  Stream rng(12);
  for (const auto& k : kinds()) {
    const auto s = random_signs(k, rng);
    const auto b = realize(s);
    Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(b.entries.rows(), b.entries.cols());
    for (std::size_t i = 0; i < k.dimension(); ++i) sum += flip_delta(s, i).entries;
    EXPECT_LE((sum + 2.0 * b.entries).cwiseAbs().maxCoeff(), 1e-12) << k.describe();
  }
}

TEST(Ensemble, TraceInvariant) {
  Stream rng(13);
  const std::vector<std::pair<EnsembleKind, double>> cases = {
      {EnsembleKind::real_symmetric(9), 10.0},
      {EnsembleKind::imaginary_antisymmetric(9), 8.0},
      {EnsembleKind::rectangular(9, 5), 5.0}};
  for (const auto& [k, target] : cases) {
    EXPECT_DOUBLE_EQ(k.frobenius_norm2(), target);
    for (int r = 0; r < 1000; ++r) {
      const auto m = realize(random_signs(k, rng));
      EXPECT_LE(std::fabs(m.frobenius_norm2() - target) / target, 1e-12);
    }
  }
}

TEST(Ensemble, Symmetry) {
  Stream rng(14);
  const auto rs = realize(random_signs(EnsembleKind::real_symmetric(8), rng));
  EXPECT_EQ(rs.entries, rs.entries.transpose());
  const auto as = realize(random_signs(EnsembleKind::imaginary_antisymmetric(8), rng));
  EXPECT_EQ(as.entries, Eigen::MatrixXd(-as.entries.transpose()));
}

TEST(SignVector, HammingMetric) {
  Stream rng(15);
  const auto k = EnsembleKind::real_symmetric(12);  // d = 78, two words
  for (int r = 0; r < 50; ++r) {
    const auto a = random_signs(k, rng), b = random_signs(k, rng), c = random_signs(k, rng);
    EXPECT_EQ(hamming_distance(a, a), 0u);
    EXPECT_EQ(hamming_distance(a, b), hamming_distance(b, a));
    EXPECT_LE(hamming_distance(a, c), hamming_distance(a, b) + hamming_distance(b, c));
  }
  const SignVector s(k);
  std::size_t neighbours = 0;
  for (std::size_t i = 0; i < k.dimension(); ++i) neighbours += hamming_distance(s, s.flipped(i)) == 1;
  EXPECT_EQ(neighbours, k.dimension());
}

TEST(SignVector, HexRoundTrip) {
  Stream rng(16);
  const auto k = EnsembleKind::real_symmetric(12);
  for (int r = 0; r < 20; ++r) {
    const auto s = random_signs(k, rng);
    EXPECT_EQ(SignVector::from_hex(k, s.to_hex()), s);
  }
  // index 0 is the most significant bit of the first hex digit
  const auto k3 = EnsembleKind::real_symmetric(2);
  EXPECT_EQ(SignVector(k3).flipped(0).to_hex(), "8");
  EXPECT_EQ(SignVector(k3).flipped(2).to_hex(), "2");
  EXPECT_THROW(SignVector::from_hex(k3, "zz"), ConfigError);
}

TEST(SignVector, StateRoundTrip) {
  const auto k = EnsembleKind::real_symmetric(4);  // d = 10
  for (std::uint64_t v = 0; v < 1024; ++v) {
    const auto s = SignVector::from_state(k, v);
    EXPECT_EQ(s.to_state(), v);
    EXPECT_EQ(s.count_negative(), static_cast<std::size_t>(std::popcount(v)));
  }
  EXPECT_TRUE(SignVector::from_state(k, 1).negative(0));
}
