#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "bwalk/kernels.hpp"
#include "bwalk/rng.hpp"

using namespace bwalk;
using namespace bwalk::kernels;

namespace {

std::vector<double> randoms(std::size_t n, Stream& rng, double lo = 0, double hi = 1) {
  std::vector<double> v(n);
  for (auto& x : v) x = lo + (hi - lo) * rng.uniform01();
  return v;
}

// |a - b| relative to the summed magnitudes of the terms.
void expect_close(const std::vector<double>& a, const std::vector<double>& b,
                  const std::vector<double>& scale, double ulps) {
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    EXPECT_LE(std::fabs(a[i] - b[i]), ulps * 2.220446049250313e-16 * scale[i]) << i;
}

class KernelEquivalence : public ::testing::Test {
 protected:
  void SetUp() override {
    if (!avx2::supported()) GTEST_SKIP() << "no AVX2 on this host";
  }
};

}  // namespace

TEST(Kernels, BackendSelection) {
  EXPECT_TRUE(backend_available(Backend::Scalar));
  const auto before = active_backend();
  set_backend(Backend::Scalar);
  EXPECT_EQ(active_backend(), Backend::Scalar);
  EXPECT_EQ(backend_name(Backend::Scalar), "scalar");
  set_backend(before);
}

TEST(Kernels, ScalarFixtures) {
  std::vector<double> out(4);
  scalar::birth_death_step(std::vector<double>{1, 0, 0, 0}, out);
  EXPECT_EQ(out, (std::vector<double>{0.25, 0.75, 0, 0}));
  std::vector<double> h(8);
  scalar::hypercube_step(std::vector<double>{1, 0, 0, 0, 0, 0, 0, 0}, h, 3);
  EXPECT_EQ(h, (std::vector<double>{0.25, 0.25, 0.25, 0, 0.25, 0, 0, 0}));
  std::vector<double> p(2);
  scalar::pair_sums(std::vector<double>{1, 3}, p, PairTerm::InverseDifference);
  EXPECT_EQ(p, (std::vector<double>{-0.5, 0.5}));
  scalar::pair_sums(std::vector<double>{1, 3}, p, PairTerm::SumOverDifference);
  EXPECT_EQ(p, (std::vector<double>{-2, 2}));
}

TEST_F(KernelEquivalence, BirthDeathBitExact) {
  Stream rng(91);
  for (std::size_t d : {1u, 2u, 3u, 4u, 5u, 7u, 8u, 31u, 1275u}) {
    const auto in = randoms(d + 1, rng);
    std::vector<double> a(d + 1), b(d + 1);
    scalar::birth_death_step(in, a);
    avx2::birth_death_step(in, b);
    EXPECT_EQ(a, b) << d;
  }
}

TEST_F(KernelEquivalence, HypercubeBitExact) {
  Stream rng(92);
  for (unsigned d : {1u, 2u, 3u, 5u, 10u, 14u}) {
    const auto in = randoms(std::size_t{1} << d, rng);
    std::vector<double> a(in.size()), b(in.size());
    scalar::hypercube_step(in, a, d);
    avx2::hypercube_step(in, b, d);
    EXPECT_EQ(a, b) << d;
  }
}

TEST_F(KernelEquivalence, PairSums) {
  Stream rng(93);
  for (std::size_t n : {2u, 3u, 4u, 5u, 9u, 64u, 201u}) {
    auto x = randoms(n, rng, 0.05, 2.0);
    std::sort(x.begin(), x.end());
    for (auto term : {PairTerm::InverseDifference, PairTerm::InverseSum, PairTerm::SumOverDifference}) {
      std::vector<double> a(n), b(n), scale(n, 0);
      scalar::pair_sums(x, a, term);
      avx2::pair_sums(x, b, term);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          if (i != j) {
            const double den = term == PairTerm::InverseSum ? x[i] + x[j] : x[i] - x[j];
            const double num = term == PairTerm::SumOverDifference ? x[i] + x[j] : 1.0;
            scale[i] += std::fabs(num / den);
          }
      expect_close(a, b, scale, 8);
    }
  }
}

TEST_F(KernelEquivalence, AccumulateProducts) {
  Stream rng(94);
  for (std::size_t n : {1u, 3u, 4u, 7u, 50u}) {
    std::vector<double> s2a(n * n, 0), s3a(n * n, 0), s4a(n * n, 0);
    auto s2b = s2a, s3b = s3a, s4b = s4a;
    std::vector<double> mag2(n * n, 0), mag3(n * n, 0), mag4(n * n, 0);
    for (int rep = 0; rep < 20; ++rep) {
      const auto v = randoms(n, rng, -1, 1);
      scalar::accumulate_products(v, s2a, s3a, s4a);
      avx2::accumulate_products(v, s2b, s3b, s4b);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          mag2[i * n + j] += std::fabs(v[i] * v[j]);
          mag3[i * n + j] += std::fabs(v[i] * v[i] * v[j]);
          mag4[i * n + j] += v[i] * v[i] * v[j] * v[j];
        }
    }
    expect_close(s2a, s2b, mag2, 4);
    expect_close(s3a, s3b, mag3, 4);
    expect_close(s4a, s4b, mag4, 4);
  }
}

TEST_F(KernelEquivalence, DispatchFollowsBackend) {
  Stream rng(95);
  const auto in = randoms(1 << 8, rng);
  std::vector<double> a(in.size()), b(in.size());
  const auto before = active_backend();
  set_backend(Backend::Scalar);
  hypercube_step(in, a, 8);
  set_backend(Backend::Avx2);
  hypercube_step(in, b, 8);
  set_backend(before);
  EXPECT_EQ(a, b);
}
