#include "bwalk/moments.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <iostream>
#include <set>
#include <thread>

#include "bwalk/errors.hpp"
#include "bwalk/hamming.hpp"
#include "bwalk/kernels.hpp"
#include "bwalk/metawalk.hpp"
#include "bwalk/perturbation.hpp"
#include "bwalk/spectral.hpp"
#include "bwalk/summation.hpp"
#include "bwalk/theory.hpp"

namespace bwalk {

std::uint64_t burst_length(const MomentConfig& cfg) {
  if (cfg.samples < 100) throw ConfigError("moments: need at least 100 bursts");
  if (cfg.blocks < 2) throw ConfigError("moments: need at least 2 jackknife blocks");
  if (cfg.dt) {
    if (*cfg.dt > cfg.kind.dimension()) throw ConfigError("moments: dt exceeds d_N");
    return *cfg.dt;
  }
  if (!(cfg.c > 0.0 && cfg.c < 1.0)) throw ConfigError("moments: exponent c must lie in (0, 1)");
  return static_cast<std::uint64_t>(std::llround(std::pow(cfg.kind.rows(), cfg.c)));
}

namespace {

std::uint64_t default_equilibration(const EnsembleKind& kind) {
  return static_cast<std::uint64_t>(std::ceil(2.0 * t_crit(kind.dimension())));
}

SignVector walk_from(SignVector s, std::uint64_t steps, Stream stream) {
  WalkState st{std::move(s), 0};
  for (std::uint64_t i = 0; i < steps; ++i) step(st, stream);
  return std::move(st.signs);
}

// Walk dt lazy steps from the anchor matrix, flipping entries in place.
ScaledMatrix burst(const ScaledMatrix& anchor, Stream& stream, std::uint64_t dt) {
  ScaledMatrix m = anchor;
  const std::uint64_t d = anchor.kind.dimension();
  for (std::uint64_t s = 0; s < dt; ++s) {
    const std::uint64_t draw = stream.below(d + 1);
    if (draw < d) apply_flip(m, draw);
  }
  return m;
}

int zero_mode_index(const EnsembleKind& k) {
  return (k.family() == Family::ImaginaryAntisymmetric && k.rows() % 2 == 1) ? (k.rows() - 1) / 2
                                                                             : -1;
}

// Theory drift / diffusion at every index of the sorted spectrum.
void theory_full(const EnsembleKind& k, const std::vector<double>& v, std::vector<double>& dr,
                 std::vector<double>& df) {
  const int n = static_cast<int>(v.size());
  dr.assign(n, std::nan(""));
  df.assign(n, std::nan(""));
  try {
    if (k.family() != Family::ImaginaryAntisymmetric) {
      dr = theory::drift(k, v);
      df = theory::diffusion(k, v);
      return;
    }
    const int first = (n + 1) / 2;  // first strictly positive index
    std::vector<double> half(v.begin() + first, v.end());
    const auto hd = theory::drift(k, half);
    const auto hf = theory::diffusion(k, half);
    for (int j = 0; j < static_cast<int>(half.size()); ++j) {
      dr[first + j] = hd[j];
      dr[n - 1 - (first + j)] = -hd[j];
      df[first + j] = df[n - 1 - (first + j)] = hf[j];
    }
    if (const int z = zero_mode_index(k); z >= 0) {
      dr[z] = 0.0;
      df[z] = 0.0;
    }
  } catch (const SingularInputError&) {
    // Degenerate anchor: theory undefined, left as NaN.
  }
}

struct Block {
  std::uint64_t count = 0;
  std::uint64_t discarded = 0;
  std::vector<double> s1, s2, s3, s4;
  std::vector<double> lambda_sum, theory_drift_sum, theory_diff_sum;
};

struct Anchor {
  ScaledMatrix matrix;
  std::vector<double> values;
  std::vector<double> theory_drift, theory_diff;
};

Anchor make_anchor(const SignVector& s) {
  Anchor a{realize(s), {}, {}, {}};
  a.values = eigenvalues(a.matrix).values;
  theory_full(s.kind(), a.values, a.theory_drift, a.theory_diff);
  return a;
}

template <class Fn>
void parallel_blocks(std::uint64_t blocks, unsigned workers, Fn&& fn) {
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(blocks)));
  if (workers == 1) {
    for (std::uint64_t b = 0; b < blocks; ++b) fn(b);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::uint64_t b = w; b < blocks; b += workers) fn(b);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

double trace_of_increment(const ScaledMatrix& before, const ScaledMatrix& after) {
  if (before.kind.family() == Family::Rectangular) {
    return after.entries.squaredNorm() - before.entries.squaredNorm();
  }
  return (after.entries - before.entries).trace();
}

}  // namespace

MomentEstimate estimate(const MomentConfig& cfg, const SignVector& start) {
  if (!(start.kind() == cfg.kind)) throw ConfigError("moments: start vector has the wrong kind");
  const std::uint64_t dt = burst_length(cfg);
  const EnsembleKind& kind = cfg.kind;
  const std::size_t d = kind.dimension();
  const int n = kind.spectrum_size();
  const std::size_t nn = static_cast<std::size_t>(n) * n;

  // Anchor chain: equilibrate, then optionally advance between burst groups.
  const std::uint64_t per_anchor = cfg.bursts_per_anchor ? cfg.bursts_per_anchor : cfg.samples;
  const std::uint64_t n_anchors = (cfg.samples + per_anchor - 1) / per_anchor;
  const std::uint64_t hop = cfg.reanchor_steps ? cfg.reanchor_steps : default_stride(d);
  std::vector<SignVector> anchors;
  anchors.reserve(n_anchors);
  anchors.push_back(walk_from(start, cfg.equilibration.value_or(default_equilibration(kind)),
                              tagged_stream(cfg.seed, StreamTag::Anchor, 0)));
  for (std::uint64_t g = 1; g < n_anchors; ++g) {
    anchors.push_back(walk_from(anchors.back(), hop, tagged_stream(cfg.seed, StreamTag::Anchor, g)));
  }

  const std::uint64_t nb = std::min(cfg.blocks, cfg.samples);
  std::vector<Block> blocks(nb);
  const double target = kind.frobenius_norm2();

  parallel_blocks(nb, cfg.workers, [&](std::uint64_t b) {
    Block& blk = blocks[b];
    blk.s1.assign(n, 0.0);
    blk.s2.assign(nn, 0.0);
    if (cfg.higher) {
      blk.s3.assign(nn, 0.0);
      blk.s4.assign(nn, 0.0);
    }
    blk.lambda_sum.assign(n, 0.0);
    blk.theory_drift_sum.assign(n, 0.0);
    blk.theory_diff_sum.assign(n, 0.0);
    const std::uint64_t lo = b * cfg.samples / nb;
    const std::uint64_t hi = (b + 1) * cfg.samples / nb;
    std::uint64_t current = UINT64_MAX;
    std::optional<Anchor> held;
    std::vector<double> dl(n);
    for (std::uint64_t k = lo; k < hi; ++k) {
      const std::uint64_t g = k / per_anchor;
      if (g != current) {
        held.emplace(make_anchor(anchors[g]));
        current = g;
      }
      const Anchor& anchor = *held;
      Stream stream = tagged_stream(cfg.seed, StreamTag::Burst, k);
      const ScaledMatrix after = burst(anchor.matrix, stream, dt);
      std::optional<Spectrum> solved;
      try {
        solved.emplace(eigenvalues(after));
      } catch (const NumericalError& e) {
        std::cerr << "moments: burst " << k << " discarded: " << e.what() << '\n';
        ++blk.discarded;
        continue;
      }
      const Spectrum& s = *solved;
      double dsum = 0;
      for (int i = 0; i < n; ++i) {
        dl[i] = s.values[i] - anchor.values[i];
        dsum += dl[i];
      }
      const bool trace_ok = std::fabs(s.trace2 - target) <= 1e-9 * target;
      const bool align_ok = std::fabs(dsum - trace_of_increment(anchor.matrix, after)) <= 1e-9;
      if (!trace_ok || !align_ok) {
        std::cerr << "moments: burst " << k << " discarded: trace check failed\n";
        ++blk.discarded;
        continue;
      }
      ++blk.count;
      for (int i = 0; i < n; ++i) {
        blk.s1[i] += dl[i];
        blk.lambda_sum[i] += anchor.values[i];
        blk.theory_drift_sum[i] += anchor.theory_drift[i];
        blk.theory_diff_sum[i] += anchor.theory_diff[i];
      }
      kernels::accumulate_products(dl, blk.s2, blk.s3, blk.s4);
    }
  });

  MomentEstimate e;
  e.kind = kind;
  e.c = cfg.c;
  e.dt = dt;
  e.deta = static_cast<double>(dt) / static_cast<double>(d);
  e.anchors = n_anchors;
  e.seed = cfg.seed;
  std::uint64_t used = 0;
  for (const auto& blk : blocks) {
    used += blk.count;
    e.discarded += blk.discarded;
  }
  e.samples = used;
  if (e.discarded * 100 > cfg.samples) {
    throw NumericalError("moments: " + std::to_string(e.discarded) + " of " +
                         std::to_string(cfg.samples) + " bursts discarded (limit 1%)");
  }
  if (used == 0) throw NumericalError("moments: no usable bursts");

  // Order-independent reduction: blocks summed in index order.
  auto reduce = [&](auto member, std::size_t len) {
    std::vector<double> out(len);
    for (std::size_t i = 0; i < len; ++i) {
      NeumaierSum s;
      for (const auto& blk : blocks) s.add((blk.*member)[i]);
      out[i] = s.value() / static_cast<double>(used);
    }
    return out;
  };
  e.lambda = reduce(&Block::lambda_sum, n);
  e.theory_drift = reduce(&Block::theory_drift_sum, n);
  e.theory_diff = reduce(&Block::theory_diff_sum, n);

  const double inv = dt ? 1.0 / e.deta : 0.0;
  auto to_matrix = [&](auto member) {
    const auto flat = reduce(member, nn);
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = flat[static_cast<std::size_t>(i) * n + j] * inv;
    return m;
  };
  e.second = to_matrix(&Block::s2);
  if (cfg.higher) {
    e.third = to_matrix(&Block::s3);
    e.fourth = to_matrix(&Block::s4);
  }

  std::vector<double> sums(nb), counts(nb);
  for (std::uint64_t b = 0; b < nb; ++b) counts[b] = static_cast<double>(blocks[b].count);
  e.drift.resize(n);
  e.drift_se.resize(n);
  e.diff.resize(n);
  e.diff_se.resize(n);
  for (int i = 0; i < n; ++i) {
    for (std::uint64_t b = 0; b < nb; ++b) sums[b] = blocks[b].s1[i];
    auto jk = stats::block_jackknife(sums, counts);
    e.drift[i] = jk.estimate * inv;
    e.drift_se[i] = jk.se * inv;
    for (std::uint64_t b = 0; b < nb; ++b) sums[b] = blocks[b].s2[static_cast<std::size_t>(i) * n + i];
    jk = stats::block_jackknife(sums, counts);
    e.diff[i] = jk.estimate * inv;
    e.diff_se[i] = jk.se * inv;
  }

  const auto [lo, hi] = bulk_range(n);
  const int z = zero_mode_index(kind);
  for (int i = lo; i < hi; ++i)
    if (i != z) e.bulk.push_back(i);
  return e;
}

double bulk_scaled_diffusion(const MomentEstimate& e) {
  NeumaierSum s;
  for (int i : e.bulk) s.add(e.diff[i]);
  return e.kind.rows() * s.value() / static_cast<double>(e.bulk.size());
}

stats::Regression diffusion_slope(const MomentEstimate& e) {
  std::vector<double> x, y, w;
  for (int i : e.bulk) {
    x.push_back(e.lambda[i]);
    y.push_back(e.diff[i]);
    w.push_back(e.diff_se[i] > 0 ? 1.0 / (e.diff_se[i] * e.diff_se[i]) : 1.0);
  }
  auto r = stats::weighted_regression_origin(x, y, w);
  r.slope *= e.kind.rows();
  r.slope_se *= e.kind.rows();
  return r;
}

stats::Regression drift_agreement(const MomentEstimate& e) {
  std::vector<double> emp, se, th;
  for (int i : e.bulk) {
    if (!std::isfinite(e.theory_drift[i])) continue;
    emp.push_back(e.drift[i]);
    se.push_back(e.drift_se[i]);
    th.push_back(e.theory_drift[i]);
  }
  return stats::drift_regression(emp, se, th);
}

namespace {
double median(std::vector<double> v) {
  if (v.empty()) return std::nan("");
  const auto mid = v.begin() + static_cast<long>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  return *mid;
}

bool paired(const MomentEstimate& e, int i, int j) {
  return e.kind.family() == Family::ImaginaryAntisymmetric &&
         i + j == static_cast<int>(e.lambda.size()) - 1;
}
}  // namespace

OffdiagReport offdiag_ratios(const MomentEstimate& e) {
  OffdiagReport r;
  NeumaierSum dsum;
  for (int i : e.bulk) dsum.add(e.second(i, i));
  const double scale = dsum.value() / static_cast<double>(e.bulk.size());
  if (!(scale > 0)) return r;
  const int n = static_cast<int>(e.second.rows());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && !paired(e, i, j)) r.max_ratio = std::max(r.max_ratio, std::fabs(e.second(i, j)) / scale);
  std::vector<double> ratios;
  for (int i : e.bulk)
    for (int j : e.bulk)
      if (i != j && !paired(e, i, j)) ratios.push_back(std::fabs(e.second(i, j)) / scale);
  r.median_ratio = median(std::move(ratios));
  if (e.kind.family() == Family::ImaginaryAntisymmetric) {
    for (int i : e.bulk) {
      const int p = n - 1 - i;
      r.pair_deviation =
          std::max(r.pair_deviation, std::fabs(e.second(i, p) + e.second(i, i)) / e.second(i, i));
    }
  }
  return r;
}

OffdiagReport offdiag_suppression(const MomentConfig& cfg, const SignVector& start) {
  return offdiag_ratios(estimate(cfg, start));
}

MatrixDriftReport matrix_drift_check(const EnsembleKind& kind, std::uint64_t samples,
                                     std::uint64_t dt, std::uint64_t seed, unsigned workers) {
  if (samples < 100) throw ConfigError("matrix_drift_check: need at least 100 bursts");
  if (dt == 0 || dt > kind.dimension()) throw ConfigError("matrix_drift_check: need 0 < dt <= d_N");
  const std::size_t d = kind.dimension();
  const double deta = static_cast<double>(dt) / static_cast<double>(d);
  const SignVector anchor_signs = walk_from(SignVector(kind), default_equilibration(kind),
                                            tagged_stream(seed, StreamTag::Anchor, 0));
  const ScaledMatrix anchor = realize(anchor_signs);
  const double norm2 = anchor.entries.squaredNorm();
  const bool rect = kind.family() == Family::Rectangular;
  Eigen::MatrixXd basis;
  Eigen::VectorXd x;  // 1 - lambda
  double xx = 0;
  if (rect) {
    const auto dec = spectrum(anchor);
    basis = dec.basis.real;
    x = Eigen::VectorXd::Ones(kind.cols());
    for (int i = 0; i < kind.cols(); ++i) x[i] -= dec.spectrum.values[i];
    xx = x.squaredNorm();
  }

  const std::uint64_t nb = std::min<std::uint64_t>(64, samples);
  std::vector<double> ks(nb, 0), as(nb, 0), cnt(nb, 0);
  parallel_blocks(nb, workers, [&](std::uint64_t b) {
    const std::uint64_t lo = b * samples / nb, hi = (b + 1) * samples / nb;
    for (std::uint64_t k = lo; k < hi; ++k) {
      Stream stream = tagged_stream(seed, StreamTag::Burst, k);
      const ScaledMatrix after = burst(anchor, stream, dt);
      const Eigen::MatrixXd db = after.entries - anchor.entries;
      ks[b] += (db.array() * anchor.entries.array()).sum() / (norm2 * deta);
      if (rect) {
        const Eigen::MatrixXd dw = wishart_increment(anchor.entries, db);
        const Eigen::VectorXd first = (basis.transpose() * dw * basis).diagonal();
        as[b] += x.dot(first) / (xx * deta);
      }
      cnt[b] += 1;
    }
  });
  MatrixDriftReport r;
  r.samples = samples;
  const auto jk = stats::block_jackknife(ks, cnt);
  r.kappa = jk.estimate;
  r.kappa_se = jk.se;
  r.kappa_exact = (std::pow(1.0 - 2.0 / static_cast<double>(d + 1), static_cast<double>(dt)) - 1.0) / deta;
  if (rect) {
    const auto ja = stats::block_jackknife(as, cnt);
    r.wishart_a = ja.estimate;
    r.wishart_a_se = ja.se;
  }
  return r;
}

HigherMomentReport higher_moment_scaling(const std::vector<MomentConfig>& configs) {
  std::set<int> sizes;
  for (const auto& c : configs) sizes.insert(c.kind.rows());
  if (sizes.size() < 3) throw ConfigError("higher_moment_scaling needs at least 3 distinct N");
  HigherMomentReport rep;
  for (auto cfg : configs) {
    cfg.higher = true;
    const auto e = estimate(cfg, SignVector(cfg.kind));
    HigherMomentRow row;
    row.n = cfg.kind.rows();
    NeumaierSum ds;
    for (int i : e.bulk) ds.add(e.second(i, i));
    row.diffusion = ds.value() / static_cast<double>(e.bulk.size());
    std::vector<double> t3, t4;
    for (int i : e.bulk)
      for (int j : e.bulk)
        if (i != j && !paired(e, i, j)) {
          t3.push_back(std::fabs(e.third(i, j)));
          t4.push_back(std::fabs(e.fourth(i, j)));
        }
    row.third_median = median(t3);
    row.fourth_median = median(t4);
    row.third_ratio = row.third_median / row.diffusion;
    row.fourth_ratio = row.fourth_median / (row.diffusion * row.diffusion);
    rep.rows.push_back(row);
  }
  std::vector<double> ln, l3, l4, r3, r4, w;
  for (const auto& r : rep.rows) {
    ln.push_back(std::log(r.n));
    l3.push_back(std::log(r.third_median));
    l4.push_back(std::log(r.fourth_median));
    r3.push_back(std::log(r.third_ratio));
    r4.push_back(std::log(r.fourth_ratio));
    w.push_back(1.0);
  }
  rep.third_slope = stats::weighted_regression(ln, l3, w);
  rep.fourth_slope = stats::weighted_regression(ln, l4, w);
  rep.third_ratio_slope = stats::weighted_regression(ln, r3, w);
  rep.fourth_ratio_slope = stats::weighted_regression(ln, r4, w);
  return rep;
}

nlohmann::json to_json(const MomentEstimate& e) {
  nlohmann::json per = nlohmann::json::array();
  for (std::size_t i = 0; i < e.lambda.size(); ++i) {
    per.push_back({{"lambda", e.lambda[i]},
                   {"drift", e.drift[i]},
                   {"drift_se", e.drift_se[i]},
                   {"diff", e.diff[i]},
                   {"diff_se", e.diff_se[i]},
                   {"theory_drift", std::isfinite(e.theory_drift[i]) ? nlohmann::json(e.theory_drift[i]) : nlohmann::json()},
                   {"theory_diff", std::isfinite(e.theory_diff[i]) ? nlohmann::json(e.theory_diff[i]) : nlohmann::json()}});
  }
  const auto off = offdiag_ratios(e);
  nlohmann::json j = {{"kind", family_name(e.kind.family())},
                      {"N", e.kind.rows()},
                      {"M", e.kind.cols()},
                      {"c", e.c},
                      {"dt", e.dt},
                      {"deta", e.deta},
                      {"samples", e.samples},
                      {"discarded", e.discarded},
                      {"anchors", e.anchors},
                      {"seed", e.seed},
                      {"per_nu", per},
                      {"bulk_indices", e.bulk},
                      {"offdiag_max_ratio", off.max_ratio},
                      {"offdiag_median_ratio", off.median_ratio}};
  if (e.third.size()) {
    std::vector<double> t3, t4;
    for (int i : e.bulk)
      for (int k : e.bulk)
        if (i != k && !paired(e, i, k)) {
          t3.push_back(std::fabs(e.third(i, k)));
          t4.push_back(std::fabs(e.fourth(i, k)));
        }
    j["higher"] = {{"third_median_abs", median(t3)}, {"fourth_median_abs", median(t4)}};
  } else {
    j["higher"] = nlohmann::json::object();
  }
  return j;
}

nlohmann::json to_json(const HigherMomentReport& r) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"N", row.n},
                    {"diffusion", row.diffusion},
                    {"third_median", row.third_median},
                    {"fourth_median", row.fourth_median},
                    {"third_ratio", row.third_ratio},
                    {"fourth_ratio", row.fourth_ratio}});
  }
  auto slope = [](const stats::Regression& g) {
    return nlohmann::json{{"slope", g.slope}, {"slope_se", g.slope_se}, {"r2", g.r2}};
  };
  return {{"rows", rows},
          {"third_slope", slope(r.third_slope)},
          {"fourth_slope", slope(r.fourth_slope)},
          {"third_ratio_slope", slope(r.third_ratio_slope)},
          {"fourth_ratio_slope", slope(r.fourth_ratio_slope)}};
}

}  // namespace bwalk
