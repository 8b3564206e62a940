#include "bwalk/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <ostream>

#include "bwalk/errors.hpp"
#include "bwalk/io.hpp"
#include "bwalk/spectral.hpp"
#include "bwalk/summation.hpp"
#include "bwalk/theory.hpp"

namespace bwalk::stats {

double ks_distance(std::vector<double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw ConfigError("ks_distance: empty sample");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0;
  for (std::size_t i = 0; i < samples.size();) {
    // Treat runs of equal values as one jump of the empirical CDF.
    std::size_t j = i;
    while (j < samples.size() && samples[j] == samples[i]) ++j;
    const double f = cdf(samples[i]);
    d = std::max({d, std::fabs(f - static_cast<double>(i) / n), std::fabs(static_cast<double>(j) / n - f)});
    i = j;
  }
  return std::min(d, 1.0);
}

std::vector<double> unfold_and_spacings(const std::vector<std::vector<double>>& spectra,
                                        const std::function<double(double)>& cdf, double edge) {
  std::vector<double> out;
  for (const auto& s : spectra) {
    const int n = static_cast<int>(s.size());
    const auto [lo, hi] = bulk_range(n, edge);
    double prev = 0;
    for (int i = lo; i < hi; ++i) {
      const double u = n * cdf(s[i]);
      if (i > lo) out.push_back(u - prev);
      prev = u;
    }
  }
  return out;
}

std::vector<double> unfold_and_spacings(const std::vector<std::vector<double>>& spectra,
                                        const EnsembleKind& kind, double edge) {
  return unfold_and_spacings(
      spectra, [&](double x) { return theory::limiting_cdf(kind, x); }, edge);
}

double goe_surmise_pdf(double s) {
  return s <= 0 ? 0.0 : std::numbers::pi * s / 2.0 * std::exp(-std::numbers::pi * s * s / 4.0);
}
double goe_surmise_cdf(double s) {
  return s <= 0 ? 0.0 : 1.0 - std::exp(-std::numbers::pi * s * s / 4.0);
}
double gue_surmise_pdf(double s) {
  constexpr double pi = std::numbers::pi;
  return s <= 0 ? 0.0 : 32.0 / (pi * pi) * s * s * std::exp(-4.0 * s * s / pi);
}
double gue_surmise_cdf(double s) {
  constexpr double pi = std::numbers::pi;
  if (s <= 0) return 0.0;
  return std::erf(2.0 * s / std::sqrt(pi)) - 4.0 * s / pi * std::exp(-4.0 * s * s / pi);
}
double poisson_spacing_cdf(double s) { return s <= 0 ? 0.0 : 1.0 - std::exp(-s); }

namespace {

void check_lengths(std::size_t a, std::size_t b, std::size_t c) {
  if (a != b || a != c) throw ConfigError("regression: input length mismatch");
}

}  // namespace

Regression weighted_regression(std::span<const double> x, std::span<const double> y,
                               std::span<const double> w) {
  check_lengths(x.size(), y.size(), w.size());
  NeumaierSum sw, sx, sy;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sw.add(w[i]);
    sx.add(w[i] * x[i]);
    sy.add(w[i] * y[i]);
  }
  const double W = sw.value();
  if (!(W > 0)) throw ConfigError("regression: weights sum to zero");
  const double mx = sx.value() / W;
  const double my = sy.value() / W;
  NeumaierSum sxx, sxy, syy;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxx.add(w[i] * dx * dx);
    sxy.add(w[i] * dx * dy);
    syy.add(w[i] * dy * dy);
  }
  const double vxx = sxx.value();
  if (!(vxx > 1e-300) || x.size() < 3) {
    throw ConfigError("regression: degenerate design (constant predictor)");
  }
  Regression r;
  r.n = x.size();
  r.slope = sxy.value() / vxx;
  r.intercept = my - r.slope * mx;
  const double vyy = syy.value();
  const double rss = std::max(0.0, vyy - r.slope * sxy.value());
  r.r2 = vyy > 0 ? 1.0 - rss / vyy : 1.0;
  r.slope_se = std::sqrt(rss / (static_cast<double>(r.n) - 2.0) / vxx);
  return r;
}

Regression weighted_regression_origin(std::span<const double> x, std::span<const double> y,
                                      std::span<const double> w) {
  check_lengths(x.size(), y.size(), w.size());
  NeumaierSum sxx, sxy, syy;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx.add(w[i] * x[i] * x[i]);
    sxy.add(w[i] * x[i] * y[i]);
    syy.add(w[i] * y[i] * y[i]);
  }
  if (!(sxx.value() > 0) || x.size() < 2) throw ConfigError("regression: degenerate design");
  Regression r;
  r.n = x.size();
  r.slope = sxy.value() / sxx.value();
  const double rss = std::max(0.0, syy.value() - r.slope * sxy.value());
  r.r2 = syy.value() > 0 ? 1.0 - rss / syy.value() : 1.0;
  r.slope_se = std::sqrt(rss / (static_cast<double>(r.n) - 1.0) / sxx.value());
  return r;
}

Regression drift_regression(std::span<const double> empirical, std::span<const double> se,
                            std::span<const double> theory) {
  check_lengths(empirical.size(), se.size(), theory.size());
  if (empirical.size() < 10) throw ConfigError("drift_regression needs at least 10 points");
  std::vector<double> w(se.size());
  for (std::size_t i = 0; i < se.size(); ++i) {
    if (!(se[i] > 0) || !std::isfinite(se[i])) throw NumericalError("drift_regression: bad SE");
    w[i] = 1.0 / (se[i] * se[i]);
  }
  return weighted_regression(theory, empirical, w);
}

double tv_discrete(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw ConfigError("tv_discrete: support mismatch");
  NeumaierSum s;
  for (std::size_t i = 0; i < p.size(); ++i) s.add(std::fabs(p[i] - q[i]));
  return 0.5 * s.value();
}

double Histogram::density(std::size_t b) const {
  return total ? static_cast<double>(counts[b]) / (static_cast<double>(total) * width()) : 0.0;
}

Histogram histogram(std::span<const double> samples, int bins, double lo, double hi) {
  if (bins < 1 || !(hi > lo)) throw ConfigError("histogram: need bins >= 1 and hi > lo");
  Histogram h{lo, hi, std::vector<std::uint64_t>(bins, 0), 0};
  const double scale = bins / (hi - lo);
  for (double v : samples) {
    if (v < lo || v > hi) continue;
    auto b = static_cast<int>((v - lo) * scale);
    if (b == bins) b = bins - 1;
    ++h.counts[b];
    ++h.total;
  }
  return h;
}

void write_histogram_csv(std::ostream& os, const Histogram& h) {
  os << "bin_left,bin_right,count,density\n";
  const double w = h.width();
  for (std::size_t b = 0; b < h.counts.size(); ++b) {
    os << format_double(h.lo + w * b) << ',' << format_double(h.lo + w * (b + 1)) << ','
       << h.counts[b] << ',' << format_double(h.density(b)) << '\n';
  }
}

double tv_empirical(std::span<const double> a, std::span<const double> b, int bins) {
  if (a.empty() || b.empty()) throw ConfigError("tv_empirical: empty input");
  const auto [amin, amax] = std::minmax_element(a.begin(), a.end());
  const auto [bmin, bmax] = std::minmax_element(b.begin(), b.end());
  const double lo = std::min(*amin, *bmin);
  double hi = std::max(*amax, *bmax);
  if (!(hi > lo)) hi = lo + 1.0;
  const auto ha = histogram(a, bins, lo, hi);
  const auto hb = histogram(b, bins, lo, hi);
  std::vector<double> pa(bins), pb(bins);
  for (int i = 0; i < bins; ++i) {
    pa[i] = static_cast<double>(ha.counts[i]) / static_cast<double>(ha.total);
    pb[i] = static_cast<double>(hb.counts[i]) / static_cast<double>(hb.total);
  }
  return tv_discrete(pa, pb);
}

Jackknife block_jackknife(std::span<const double> s, std::span<const double> c) {
  if (s.size() != c.size() || s.size() < 2) throw ConfigError("jackknife needs >= 2 blocks");
  NeumaierSum ss, cs;
  for (std::size_t b = 0; b < s.size(); ++b) {
    ss.add(s[b]);
    cs.add(c[b]);
  }
  const double S = ss.value(), C = cs.value();
  const double nb = static_cast<double>(s.size());
  std::vector<double> loo(s.size());
  NeumaierSum mean;
  for (std::size_t b = 0; b < s.size(); ++b) {
    loo[b] = (S - s[b]) / (C - c[b]);
    mean.add(loo[b]);
  }
  const double m = mean.value() / nb;
  NeumaierSum var;
  for (double v : loo) var.add((v - m) * (v - m));
  return {S / C, std::sqrt((nb - 1.0) / nb * var.value())};
}

namespace {
std::vector<double> ranks(std::span<const double> x) {
  std::vector<std::size_t> idx(x.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return x[a] < x[b]; });
  std::vector<double> r(x.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j < idx.size() && x[idx[j]] == x[idx[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j - 1);
    for (std::size_t k = i; k < j; ++k) r[idx[k]] = avg;
    i = j;
  }
  return r;
}
}  // namespace

double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw ConfigError("spearman: bad input");
  const auto rx = ranks(x), ry = ranks(y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

ComparisonReport ComparisonReport::make(std::string name, double statistic, double threshold,
                                        std::vector<std::uint64_t> sizes, std::uint64_t seed) {
  return {std::move(name), statistic, threshold, statistic <= threshold, std::move(sizes), seed};
}

nlohmann::json to_json(const ComparisonReport& r) {
  return {{"test", r.name},       {"statistic", r.statistic},
          {"threshold", r.threshold}, {"pass", r.pass},
          {"sample_sizes", r.sample_sizes}, {"seed", r.seed}};
}

}  // namespace bwalk::stats
