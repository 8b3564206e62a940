#include "bwalk/hamming.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "bwalk/errors.hpp"
#include "bwalk/kernels.hpp"
#include "bwalk/summation.hpp"

namespace bwalk {

HammingDistribution HammingDistribution::delta(std::size_t d, std::size_t x) {
  if (x > d) throw ConfigError("Hamming distance outside [0, d_N]");
  HammingDistribution p{d, std::vector<double>(d + 1, 0.0), 0};
  p.probs[x] = 1.0;
  return p;
}

double HammingDistribution::mass() const {
  NeumaierSum s;
  for (double v : probs) s.add(v);
  return s.value();
}

TransitionProbs transition_probs(std::size_t d, std::size_t x) {
  if (x > d) throw ConfigError("Hamming distance outside [0, d_N]");
  const BigInt den = d + 1;
  return {Rational(BigInt(x), den), Rational(BigInt(1), den), Rational(BigInt(d - x), den)};
}

HammingDistribution evolve_distribution(const HammingDistribution& p) {
  HammingDistribution next{p.d, std::vector<double>(p.probs.size()), p.t + 1};
  kernels::birth_death_step(p.probs, next.probs);
  return next;
}

HammingDistribution evolve_distribution(HammingDistribution p, std::uint64_t steps) {
  std::vector<double> buf(p.probs.size());
  for (std::uint64_t s = 0; s < steps; ++s) {
    kernels::birth_death_step(p.probs, buf);
    p.probs.swap(buf);
  }
  p.t += steps;
  return p;
}

HammingDistribution stationary(std::size_t d) {
  if (d < 1) throw ConfigError("stationary law needs d_N >= 1");
  // Ratio recursion outward from the mode, mirrored, then normalized. Exactly
  // symmetric, and far more accurate than lgamma differences at large d.
  std::vector<double> w(d + 1, 0.0);
  const std::size_t mid = d / 2;
  w[mid] = 1.0;
  for (std::size_t x = mid; x < d; ++x) {
    w[x + 1] = w[x] * (static_cast<double>(d - x) / static_cast<double>(x + 1));
  }
  for (std::size_t x = 0; x < mid; ++x) w[x] = w[d - x];
  NeumaierSum total;
  for (double v : w) total.add(v);
  const double z = total.value();
  for (double& v : w) v /= z;
  return {d, std::move(w), 0};
}

std::vector<Rational> walk_operator_spectrum(std::size_t d) {
  if (d < 1) throw ConfigError("walk operator needs d_N >= 1");
  std::vector<Rational> out;
  out.reserve(d + 1);
  for (std::size_t j = 0; j <= d; ++j) {
    out.push_back(Rational(1) - Rational(BigInt(2 * j), BigInt(d + 1)));
  }
  return out;
}

double tv_distance(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw ConfigError("tv_distance: support length mismatch");
  NeumaierSum s;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] >= q[i]) s.add(p[i] - q[i]);
  }
  return s.value();
}

double t_crit(std::size_t d) {
  const double dd = static_cast<double>(d);
  return dd * std::log(dd) / 4.0;
}

double erf_small(double x) { return std::erf(x) / (4.0 * std::sqrt(std::numbers::pi)); }

namespace {
double c_of(double t, std::size_t d) { return (t - t_crit(d)) / static_cast<double>(d); }
}  // namespace

double tv_asymptotic(double t, std::size_t d) {
  return erf_small(std::exp(-2.0 * c_of(t, d)) / std::sqrt(8.0));
}

double tv_asymptotic_standard(double t, std::size_t d) {
  return std::erf(std::exp(-2.0 * c_of(t, d)) / std::sqrt(8.0));
}

double tv_tail(double t, std::size_t d) {
  return std::exp(-2.0 * c_of(t, d)) / std::sqrt(2.0 * std::numbers::pi);
}

std::vector<TvPoint> tv_curve(std::size_t d, std::uint64_t t_max, std::uint64_t stride) {
  if (stride == 0) throw ConfigError("tv_curve stride must be positive");
  const auto pinf = stationary(d);
  auto p = HammingDistribution::delta(d, 0);
  std::vector<double> buf(d + 1);
  std::vector<TvPoint> out;
  for (std::uint64_t t = 0; t <= t_max; ++t) {
    if (t % stride == 0) {
      const double tt = static_cast<double>(t);
      out.push_back({t, tt / static_cast<double>(d), tv_distance(p.probs, pinf.probs),
                     tv_asymptotic(tt, d), tv_asymptotic_standard(tt, d), tv_tail(tt, d)});
    }
    kernels::birth_death_step(p.probs, buf);
    p.probs.swap(buf);
  }
  return out;
}

OuProfile ou_limit(const HammingDistribution& p) {
  const double d = static_cast<double>(p.d);
  const double sd = std::sqrt(d);
  OuProfile o;
  o.xi.resize(p.probs.size());
  o.density.resize(p.probs.size());
  NeumaierSum m1;
  for (std::size_t x = 0; x < p.probs.size(); ++x) {
    o.xi[x] = (static_cast<double>(x) - d / 2.0) / sd;
    o.density[x] = p.probs[x] * sd;
    m1.add(p.probs[x] * o.xi[x]);
  }
  o.mean = m1.value();
  NeumaierSum m2;
  for (std::size_t x = 0; x < p.probs.size(); ++x) {
    const double c = o.xi[x] - o.mean;
    m2.add(p.probs[x] * c * c);
  }
  o.variance = m2.value();
  return o;
}

OuDriftFit ou_drift_regression(const std::vector<WalkTrajectory>& trajectories) {
  // Most common sampling interval across all trajectories.
  std::map<std::uint64_t, std::size_t> gaps;
  for (const auto& tr : trajectories) {
    for (std::size_t i = 1; i < tr.t.size(); ++i) ++gaps[tr.t[i] - tr.t[i - 1]];
  }
  if (gaps.empty()) throw ConfigError("ou_drift_regression: no consecutive samples");
  const std::uint64_t gap =
      std::max_element(gaps.begin(), gaps.end(), [](auto& a, auto& b) { return a.second < b.second; })
          ->first;

  NeumaierSum sx, sy, sxx, sxy, syy, sxn;
  std::size_t n = 0;
  double deta = 0;
  for (const auto& tr : trajectories) {
    const double d = static_cast<double>(tr.dimension);
    const double sd = std::sqrt(d);
    deta = static_cast<double>(gap) / d;
    for (std::size_t i = 1; i < tr.t.size(); ++i) {
      if (tr.t[i] - tr.t[i - 1] != gap) continue;
      const double x0 = (tr.values[i - 1][0] - d / 2.0) / sd;
      const double x1 = (tr.values[i][0] - d / 2.0) / sd;
      const double y = (x1 - x0) / deta;
      sx.add(x0);
      sy.add(y);
      sxx.add(x0 * x0);
      sxy.add(x0 * y);
      syy.add(y * y);
      sxn.add(x0 * x1);
      ++n;
    }
  }
  if (n < 3) throw ConfigError("ou_drift_regression: too few sample pairs");
  const double nn = static_cast<double>(n);
  const double mx = sx.value() / nn;
  const double my = sy.value() / nn;
  const double vxx = sxx.value() - nn * mx * mx;
  const double vxy = sxy.value() - nn * mx * my;
  const double vyy = syy.value() - nn * my * my;
  if (vxx <= 0) throw NumericalError("ou_drift_regression: no spread in xi");
  OuDriftFit f;
  f.pairs = n;
  f.deta = deta;
  f.slope = vxy / vxx;
  f.intercept = my - f.slope * mx;
  const double resid = std::max(0.0, vyy - f.slope * vxy);
  f.slope_se = std::sqrt(resid / (nn - 2.0) / vxx);
  const double rho = sxn.value() / sxx.value();
  f.log_slope = rho > 0 ? std::log(rho) / deta : -INFINITY;
  return f;
}

}  // namespace bwalk
