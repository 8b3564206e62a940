#include "bwalk/metawalk.hpp"

#include <algorithm>
#include <ostream>

#include "bwalk/errors.hpp"
#include "bwalk/io.hpp"

namespace bwalk {

void apply_draw(WalkState& state, std::uint64_t draw) {
  const std::size_t d = state.signs.size();
  if (draw > d) throw std::out_of_range("walk draw outside [0, d_N]");
  if (draw < d) state.signs.flip_in_place(draw);
  ++state.t;
}

void step(WalkState& state, Stream& stream) {
  apply_draw(state, stream.below(state.signs.size() + 1));
}

Observer hamming_observer(const SignVector& reference) {
  return {"hamming", [reference](const SignVector& s) {
            return std::vector<double>{static_cast<double>(hamming_distance(reference, s))};
          }};
}

std::uint64_t default_stride(std::size_t d) { return std::max<std::uint64_t>(1, d / 10); }

std::vector<WalkTrajectory> run(WalkState& state, Stream& stream, std::uint64_t steps,
                                const std::vector<Observer>& observers, std::uint64_t stride,
                                std::uint64_t walker_id) {
  const std::size_t d = state.signs.size();
  if (stride == 0) stride = default_stride(d);
  std::vector<WalkTrajectory> out(observers.size());
  for (std::size_t k = 0; k < observers.size(); ++k) {
    out[k].walker_id = walker_id;
    out[k].observable = observers[k].name;
    out[k].dimension = d;
  }
  auto sample = [&] {
    for (std::size_t k = 0; k < observers.size(); ++k) {
      out[k].t.push_back(state.t);
      out[k].eta.push_back(static_cast<double>(state.t) / static_cast<double>(d));
      out[k].values.push_back(observers[k].fn(state.signs));
    }
  };
  sample();
  for (std::uint64_t s = 1; s <= steps; ++s) {
    step(state, stream);
    if (s % stride == 0 || s == steps) sample();
  }
  return out;
}

std::vector<WalkTrajectory> run_walkers(const SignVector& start, std::uint64_t seed,
                                        std::size_t walkers, std::uint64_t steps,
                                        const std::vector<Observer>& observers,
                                        std::uint64_t stride) {
  std::vector<WalkTrajectory> all;
  for (std::size_t w = 0; w < walkers; ++w) {
    WalkState state{start, 0};
    Stream stream = tagged_stream(seed, StreamTag::Walker, w);
    auto part = run(state, stream, steps, observers, stride, w);
    for (auto& tr : part) all.push_back(std::move(tr));
  }
  return all;
}

void write_trajectories_csv(std::ostream& os, const std::vector<WalkTrajectory>& trajectories) {
  os << "walker_id,t,eta,observable,value\n";
  for (const auto& tr : trajectories) {
    for (std::size_t i = 0; i < tr.t.size(); ++i) {
      os << tr.walker_id << ',' << tr.t[i] << ',' << format_double(tr.eta[i]) << ','
         << tr.observable;
      for (double v : tr.values[i]) os << ',' << format_double(v);
      os << '\n';
    }
  }
}

BigInt binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  BigInt r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;
  }
  return r;
}

BigInt count_ordered_paths(std::uint64_t d, std::uint64_t x) {
  if (x > d) throw ConfigError("path length X exceeds d_N");
  return binomial(d, x);
}

BigInt count_paths_containing(std::uint64_t d, std::uint64_t x, std::uint64_t l) {
  if (x > d || l > x) throw ConfigError("need 0 <= l <= X <= d_N");
  return binomial(d - l, x - l);
}

Rational prob_max_distance_exact(std::uint64_t d, std::uint64_t dt) {
  if (dt > d) throw ConfigError("Delta t exceeds d_N");
  BigInt num = 1;
  BigInt den = 1;
  for (std::uint64_t j = 0; j < dt; ++j) {
    num *= d - j;
    den *= d + 1;
  }
  return Rational(num, den);
}

double prob_max_distance(std::uint64_t d, std::uint64_t dt) {
  if (dt > d) throw ConfigError("Delta t exceeds d_N");
  double p = 1.0;
  for (std::uint64_t j = 0; j < dt; ++j) {
    p *= static_cast<double>(d - j) / static_cast<double>(d + 1);
  }
  return p;
}

}  // namespace bwalk
