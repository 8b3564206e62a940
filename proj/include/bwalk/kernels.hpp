#pragma once

// Data-parallel inner loops with a scalar reference implementation and an
// AVX2 variant. The public entry points dispatch on the active backend, which
// is picked once at startup from CPU features (override with the environment
// variable BWALK_SIMD=scalar or with set_backend()).
//
// Equivalence contract:
//  - hypercube_step and birth_death_step perform the same floating-point
//    operations in the same order in both backends and agree bit for bit.
//  - pair_sums and accumulate_products reassociate sums (lane partials, FMA)
//    and agree to a few ulps relative to the magnitude of the summands.

#include <span>
#include <string_view>

namespace bwalk::kernels {

enum class Backend { Scalar, Avx2 };

enum class PairTerm {
  InverseDifference,  // 1 / (x_nu - x_mu)
  InverseSum,         // 1 / (x_nu + x_mu)
  SumOverDifference,  // (x_nu + x_mu) / (x_nu - x_mu)
};

bool backend_available(Backend b);
Backend active_backend();
void set_backend(Backend b);
std::string_view backend_name(Backend b);

/// One step of the lazy birth-death chain on {0..d}, d = in.size() - 1:
/// out[X] = (in[X] + (d - X + 1) in[X-1] + (X + 1) in[X+1]) / (d + 1).
void birth_death_step(std::span<const double> in, std::span<double> out);

/// Lazy walk operator on the full hypercube {0,1}^d, states indexed by bit
/// pattern: out[v] = (in[v] + sum_i in[v ^ (1 << i)]) / (d + 1).
void hypercube_step(std::span<const double> in, std::span<double> out, unsigned d);

/// out[nu] = sum over mu != nu of term(x[nu], x[mu]).
void pair_sums(std::span<const double> x, std::span<double> out, PairTerm term);

/// Row-major n x n accumulators for one increment vector v:
/// s2 += v_nu v_mu, s3 += v_nu^2 v_mu, s4 += v_nu^2 v_mu^2.
void accumulate_products(std::span<const double> v, std::span<double> s2, std::span<double> s3,
                         std::span<double> s4);

namespace scalar {
void birth_death_step(std::span<const double> in, std::span<double> out);
void hypercube_step(std::span<const double> in, std::span<double> out, unsigned d);
void pair_sums(std::span<const double> x, std::span<double> out, PairTerm term);
void accumulate_products(std::span<const double> v, std::span<double> s2, std::span<double> s3,
                         std::span<double> s4);
}  // namespace scalar

namespace avx2 {
bool supported();
void birth_death_step(std::span<const double> in, std::span<double> out);
void hypercube_step(std::span<const double> in, std::span<double> out, unsigned d);
void pair_sums(std::span<const double> x, std::span<double> out, PairTerm term);
void accumulate_products(std::span<const double> v, std::span<double> s2, std::span<double> s3,
                         std::span<double> s4);
}  // namespace avx2

}  // namespace bwalk::kernels
