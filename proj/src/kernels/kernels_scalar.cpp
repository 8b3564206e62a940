#include <cstddef>

#include "bwalk/kernels.hpp"

namespace bwalk::kernels::scalar {

void birth_death_step(std::span<const double> in, std::span<double> out) {
  const std::size_t n = in.size();
  if (n == 0) return;
  const double d = static_cast<double>(n - 1);
  const double norm = d + 1.0;
  for (std::size_t x = 0; x < n; ++x) {
    double acc = in[x];
    if (x > 0) acc += in[x - 1] * (d - static_cast<double>(x) + 1.0);
    if (x + 1 < n) acc += in[x + 1] * (static_cast<double>(x) + 1.0);
    out[x] = acc / norm;
  }
}

void hypercube_step(std::span<const double> in, std::span<double> out, unsigned d) {
  const std::size_t states = std::size_t{1} << d;
  const double norm = static_cast<double>(d) + 1.0;
  for (std::size_t v = 0; v < states; ++v) {
    double acc = in[v];
    for (unsigned i = 0; i < d; ++i) acc += in[v ^ (std::size_t{1} << i)];
    out[v] = acc / norm;
  }
}

void pair_sums(std::span<const double> x, std::span<double> out, PairTerm term) {
  const std::size_t n = x.size();
  for (std::size_t nu = 0; nu < n; ++nu) {
    const double a = x[nu];
    double acc = 0.0;
    for (std::size_t mu = 0; mu < n; ++mu) {
      if (mu == nu) continue;
      const double b = x[mu];
      switch (term) {
        case PairTerm::InverseDifference:
          acc += 1.0 / (a - b);
          break;
        case PairTerm::InverseSum:
          acc += 1.0 / (a + b);
          break;
        case PairTerm::SumOverDifference:
          acc += (a + b) / (a - b);
          break;
      }
    }
    out[nu] = acc;
  }
}

void accumulate_products(std::span<const double> v, std::span<double> s2, std::span<double> s3,
                         std::span<double> s4) {
  const std::size_t n = v.size();
  for (std::size_t nu = 0; nu < n; ++nu) {
    const double a = v[nu];
    const double a2 = a * a;
    double* r2 = s2.data() + nu * n;
    double* r3 = s3.empty() ? nullptr : s3.data() + nu * n;
    double* r4 = s4.empty() ? nullptr : s4.data() + nu * n;
    for (std::size_t mu = 0; mu < n; ++mu) {
      const double b = v[mu];
      r2[mu] += a * b;
      if (r3) r3[mu] += a2 * b;
      if (r4) r4[mu] += a2 * (b * b);
    }
  }
}

}  // namespace bwalk::kernels::scalar
