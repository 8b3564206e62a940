#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "bwalk/ensemble.hpp"
#include "bwalk/rng.hpp"

namespace bwalk {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

struct WalkState {
  SignVector signs;
  std::uint64_t t = 0;
};

/// Apply one pre-drawn step: draw in [0, d_N); draw == d_N is the lazy branch.
void apply_draw(WalkState& state, std::uint64_t draw);

/// One lazy step. Consumes exactly one stream.below(d_N + 1).
void step(WalkState& state, Stream& stream);

/// Named pure function of the walker position. Scalar observables return a
/// single value; spectrum snapshots return the whole vector.
struct Observer {
  std::string name;
  std::function<std::vector<double>(const SignVector&)> fn;
};

/// Hamming distance to a fixed reference vertex.
Observer hamming_observer(const SignVector& reference);

struct WalkTrajectory {
  std::uint64_t walker_id = 0;
  std::string observable;
  std::size_t dimension = 0;  // d_N, for eta = t / d_N
  std::vector<std::uint64_t> t;
  std::vector<double> eta;
  std::vector<std::vector<double>> values;
};

/// d_N / 10 rounded down, at least 1.
std::uint64_t default_stride(std::size_t d);

/// Walk `steps` steps from `state`, sampling every observer at t = 0 and then
/// every `stride` steps (and at the final step). stride 0 selects the default.
std::vector<WalkTrajectory> run(WalkState& state, Stream& stream, std::uint64_t steps,
                                const std::vector<Observer>& observers, std::uint64_t stride = 0,
                                std::uint64_t walker_id = 0);

/// Independent walkers from a common start, walker w on child stream
/// (seed, Walker, w). Output ordered by walker then observer.
std::vector<WalkTrajectory> run_walkers(const SignVector& start, std::uint64_t seed,
                                        std::size_t walkers, std::uint64_t steps,
                                        const std::vector<Observer>& observers,
                                        std::uint64_t stride = 0);

void write_trajectories_csv(std::ostream& os, const std::vector<WalkTrajectory>& trajectories);

// Path-counting combinatorics, exact.

BigInt binomial(std::uint64_t n, std::uint64_t k);

/// |Omega_X| = C(d, X).
BigInt count_ordered_paths(std::uint64_t d, std::uint64_t x);

/// Phi^(l)_X = C(d - l, X - l): ordered X-paths containing l fixed elements.
BigInt count_paths_containing(std::uint64_t d, std::uint64_t x, std::uint64_t l);

/// Probability that Delta t lazy steps end at Hamming distance Delta t:
/// prod_{j < dt} (d - j) / (d + 1)^dt.
Rational prob_max_distance_exact(std::uint64_t d, std::uint64_t dt);
double prob_max_distance(std::uint64_t d, std::uint64_t dt);

}  // namespace bwalk
