#include <cstddef>

#include "bwalk/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#define BWALK_HAVE_X86 1
#include <immintrin.h>
#else
#define BWALK_HAVE_X86 0
#endif

namespace bwalk::kernels::avx2 {

#if BWALK_HAVE_X86

bool supported() {
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

// The two Markov-operator kernels are compiled without FMA so the operation
// sequence matches the scalar reference exactly.

__attribute__((target("avx2"))) void birth_death_step(std::span<const double> in,
                                                      std::span<double> out) {
  const std::size_t n = in.size();
  if (n < 6) {
    scalar::birth_death_step(in, out);
    return;
  }
  const double d = static_cast<double>(n - 1);
  const double norm = d + 1.0;
  out[0] = (in[0] + in[1] * 1.0) / norm;

  const __m256d vd = _mm256_set1_pd(d);
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d vnorm = _mm256_set1_pd(norm);
  const __m256d step = _mm256_set_pd(3.0, 2.0, 1.0, 0.0);
  std::size_t x = 1;
  for (; x + 4 < n; x += 4) {
    const __m256d vx = _mm256_add_pd(_mm256_set1_pd(static_cast<double>(x)), step);
    const __m256d up = _mm256_add_pd(_mm256_sub_pd(vd, vx), one);
    const __m256d down = _mm256_add_pd(vx, one);
    __m256d acc = _mm256_loadu_pd(in.data() + x);
    acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(in.data() + x - 1), up));
    acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(in.data() + x + 1), down));
    _mm256_storeu_pd(out.data() + x, _mm256_div_pd(acc, vnorm));
  }
  for (; x < n; ++x) {
    double acc = in[x];
    acc += in[x - 1] * (d - static_cast<double>(x) + 1.0);
    if (x + 1 < n) acc += in[x + 1] * (static_cast<double>(x) + 1.0);
    out[x] = acc / norm;
  }
}

__attribute__((target("avx2"))) void hypercube_step(std::span<const double> in,
                                                    std::span<double> out, unsigned d) {
  if (d < 2) {
    scalar::hypercube_step(in, out, d);
    return;
  }
  const std::size_t states = std::size_t{1} << d;
  const __m256d vnorm = _mm256_set1_pd(static_cast<double>(d) + 1.0);
  for (std::size_t v = 0; v < states; v += 4) {
    const __m256d self = _mm256_loadu_pd(in.data() + v);
    __m256d acc = self;
    // bit 0: swap neighbours within each 128-bit half
    acc = _mm256_add_pd(acc, _mm256_permute_pd(self, 0x5));
    // bit 1: swap the two 128-bit halves
    acc = _mm256_add_pd(acc, _mm256_permute4x64_pd(self, 0x4E));
    for (unsigned i = 2; i < d; ++i) {
      acc = _mm256_add_pd(acc, _mm256_loadu_pd(in.data() + (v ^ (std::size_t{1} << i))));
    }
    _mm256_storeu_pd(out.data() + v, _mm256_div_pd(acc, vnorm));
  }
}

namespace {

__attribute__((target("avx2,fma"))) inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

}  // namespace

__attribute__((target("avx2,fma"))) void pair_sums(std::span<const double> x,
                                                   std::span<double> out, PairTerm term) {
  const std::size_t n = x.size();
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d zero = _mm256_setzero_pd();
  const __m256d lane = _mm256_set_pd(3.0, 2.0, 1.0, 0.0);
  for (std::size_t nu = 0; nu < n; ++nu) {
    const double a = x[nu];
    const __m256d va = _mm256_set1_pd(a);
    const __m256d vnu = _mm256_set1_pd(static_cast<double>(nu));
    __m256d acc = zero;
    std::size_t mu = 0;
    for (; mu + 4 <= n; mu += 4) {
      const __m256d vb = _mm256_loadu_pd(x.data() + mu);
      const __m256d self =
          _mm256_cmp_pd(_mm256_add_pd(_mm256_set1_pd(static_cast<double>(mu)), lane), vnu, _CMP_EQ_OQ);
      __m256d num;
      __m256d den;
      switch (term) {
        case PairTerm::InverseDifference:
          num = one;
          den = _mm256_sub_pd(va, vb);
          break;
        case PairTerm::InverseSum:
          num = one;
          den = _mm256_add_pd(va, vb);
          break;
        default:
          num = _mm256_add_pd(va, vb);
          den = _mm256_sub_pd(va, vb);
          break;
      }
      den = _mm256_blendv_pd(den, one, self);
      const __m256d t = _mm256_blendv_pd(_mm256_div_pd(num, den), zero, self);
      acc = _mm256_add_pd(acc, t);
    }
    double s = hsum(acc);
    for (; mu < n; ++mu) {
      if (mu == nu) continue;
      const double b = x[mu];
      switch (term) {
        case PairTerm::InverseDifference:
          s += 1.0 / (a - b);
          break;
        case PairTerm::InverseSum:
          s += 1.0 / (a + b);
          break;
        case PairTerm::SumOverDifference:
          s += (a + b) / (a - b);
          break;
      }
    }
    out[nu] = s;
  }
}

__attribute__((target("avx2,fma"))) void accumulate_products(std::span<const double> v,
                                                             std::span<double> s2,
                                                             std::span<double> s3,
                                                             std::span<double> s4) {
  const std::size_t n = v.size();
  const bool higher = !s3.empty() && !s4.empty();
  for (std::size_t nu = 0; nu < n; ++nu) {
    const double a = v[nu];
    const __m256d va = _mm256_set1_pd(a);
    const __m256d va2 = _mm256_set1_pd(a * a);
    double* r2 = s2.data() + nu * n;
    double* r3 = higher ? s3.data() + nu * n : nullptr;
    double* r4 = higher ? s4.data() + nu * n : nullptr;
    std::size_t mu = 0;
    for (; mu + 4 <= n; mu += 4) {
      const __m256d vb = _mm256_loadu_pd(v.data() + mu);
      _mm256_storeu_pd(r2 + mu, _mm256_fmadd_pd(va, vb, _mm256_loadu_pd(r2 + mu)));
      if (higher) {
        _mm256_storeu_pd(r3 + mu, _mm256_fmadd_pd(va2, vb, _mm256_loadu_pd(r3 + mu)));
        _mm256_storeu_pd(r4 + mu,
                         _mm256_fmadd_pd(va2, _mm256_mul_pd(vb, vb), _mm256_loadu_pd(r4 + mu)));
      }
    }
    for (; mu < n; ++mu) {
      const double b = v[mu];
      r2[mu] += a * b;
      if (higher) {
        r3[mu] += (a * a) * b;
        r4[mu] += (a * a) * (b * b);
      }
    }
  }
}

#else  // no x86: the dispatcher never selects these

bool supported() { return false; }
void birth_death_step(std::span<const double> in, std::span<double> out) {
  scalar::birth_death_step(in, out);
}
void hypercube_step(std::span<const double> in, std::span<double> out, unsigned d) {
  scalar::hypercube_step(in, out, d);
}
void pair_sums(std::span<const double> x, std::span<double> out, PairTerm term) {
  scalar::pair_sums(x, out, term);
}
void accumulate_products(std::span<const double> v, std::span<double> s2, std::span<double> s3,
                         std::span<double> s4) {
  scalar::accumulate_products(v, s2, s3, s4);
}

#endif

}  // namespace bwalk::kernels::avx2
