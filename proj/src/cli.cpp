#include "bwalk/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <exception>
#include <iostream>
#include <sstream>
#include <thread>
#include <json.hpp>

#include "bwalk/errors.hpp"
#include "bwalk/exact_oracle.hpp"
#include "bwalk/hamming.hpp"
#include "bwalk/io.hpp"
#include "bwalk/kernels.hpp"
#include "bwalk/metawalk.hpp"
#include "bwalk/moments.hpp"
#include "bwalk/spectral.hpp"
#include "bwalk/stats.hpp"
#include "bwalk/summation.hpp"
#include "bwalk/theory.hpp"

namespace bwalk::cli {

using nlohmann::json;

EnsembleKind RunConfig::kind() const {
  const Family f = parse_family(family);
  return EnsembleKind::make(f, n, f == Family::Rectangular ? (m > 0 ? m : n / 2) : 0);
}

std::string RunConfig::hash() const {
  std::ostringstream s;
  s << subcommand << '|' << family << '|' << n << '|' << m << '|' << seed.value_or(0) << '|'
    << walkers << '|' << format_double(eta_max) << '|' << steps.value_or(0) << '|' << stride
    << '|' << format_double(c) << '|' << samples.value_or(0) << '|'
    << (dt ? std::to_string(*dt) : "-") << '|' << draws << '|' << bins << '|' << exact << '|'
    << higher << '|' << bursts_per_anchor << '|' << (format == Format::Csv ? "csv" : "json");
  return hex64(fnv1a(s.str()));
}

void RunConfig::validate() const {
  if (!(eta_max > 0)) throw ConfigError("--eta-max must be > 0");
  if (dt && *dt == 0) throw ConfigError("--dt must be >= 1");
  if (!(c > 0 && c < 1)) throw ConfigError("--c must lie in (0, 1)");
  if (bins < 1) throw ConfigError("--bins must be >= 1");
  if (workers < 1) throw ConfigError("--workers must be >= 1");
  kind();  // dimension checks
}

namespace {

// ---------------------------------------------------------------- output

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<json>> rows;
};

std::string cell(const json& v) {
  if (v.is_number_float()) return format_double(v.get<double>());
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return "";
  return v.dump();
}

ArtifactHeader header_for(const RunConfig& cfg, std::string schema) {
  return {std::move(schema), 1, cfg.seed.value_or(0), cfg.hash()};
}

json provenance(const ArtifactHeader& h) {
  return {{"schema", h.schema + "/" + std::to_string(h.schema_version)},
          {"seed", h.seed},
          {"version", std::string(version_string())},
          {"config", h.config_hash}};
}

std::filesystem::path emit_table(const RunConfig& cfg, const std::string& stem, const Table& t) {
  const auto h = header_for(cfg, stem);
  std::ostringstream os;
  std::filesystem::path path = cfg.out / stem;
  if (cfg.format == Format::Csv) {
    path += ".csv";
    os << header_line(h);
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
    os << '\n';
    for (const auto& r : t.rows) {
      for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << cell(r[i]);
      os << '\n';
    }
  } else {
    path += ".json";
    json rows = json::array();
    for (const auto& r : t.rows) {
      json o = json::object();
      for (std::size_t i = 0; i < r.size(); ++i) o[t.columns[i]] = r[i];
      rows.push_back(std::move(o));
    }
    os << json{{"provenance", provenance(h)}, {"rows", std::move(rows)}}.dump(1) << '\n';
  }
  write_file(path, os.str());
  return path;
}

std::filesystem::path emit_json(const RunConfig& cfg, const std::string& stem, json body) {
  body["provenance"] = provenance(header_for(cfg, stem));
  const auto path = cfg.out / (stem + ".json");
  write_file(path, body.dump(1) + "\n");
  return path;
}

std::filesystem::path emit_raw_csv(const RunConfig& cfg, const std::string& stem,
                                   const std::string& body) {
  const auto path = cfg.out / (stem + ".csv");
  write_file(path, header_line(header_for(cfg, stem)) + body);
  return path;
}

json reports_json(const std::vector<stats::ComparisonReport>& reports) {
  json a = json::array();
  for (const auto& r : reports) a.push_back(stats::to_json(r));
  return a;
}

bool all_pass(const std::vector<stats::ComparisonReport>& reports) {
  return std::all_of(reports.begin(), reports.end(), [](const auto& r) { return r.pass; });
}

void print_reports(const std::vector<stats::ComparisonReport>& reports) {
  for (const auto& r : reports) {
    std::cout << (r.pass ? "PASS " : "FAIL ") << r.name << " statistic=" << format_double(r.statistic)
              << " threshold=" << format_double(r.threshold) << '\n';
  }
}

std::uint64_t require_seed(const RunConfig& cfg) {
  if (!cfg.seed) throw ConfigError(cfg.subcommand + ": --seed is required");
  return *cfg.seed;
}

template <class Fn>
void parallel_for(std::uint64_t count, unsigned workers, Fn&& fn) {
  workers = static_cast<unsigned>(std::min<std::uint64_t>(std::max(1u, workers), count ? count : 1));
  if (workers == 1) {
    for (std::uint64_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::uint64_t i = w; i < count; i += workers) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

std::uint64_t steps_for(const RunConfig& cfg, std::size_t d) {
  return cfg.steps.value_or(static_cast<std::uint64_t>(std::ceil(cfg.eta_max * static_cast<double>(d))));
}

/// Independent draws, draw k walked `steps` lazy steps from all +1 on stream
/// (seed, Sampler, k).
std::vector<std::vector<double>> stationary_spectra(const EnsembleKind& kind, std::uint64_t draws,
                                                    std::uint64_t steps, std::uint64_t seed,
                                                    unsigned workers) {
  std::vector<std::vector<double>> out(draws);
  parallel_for(draws, workers, [&](std::uint64_t k) {
    WalkState st{SignVector(kind), 0};
    Stream stream = tagged_stream(seed, StreamTag::Sampler, k);
    for (std::uint64_t t = 0; t < steps; ++t) step(st, stream);
    const auto s = eigenvalues(realize(st.signs));
    check_invariants(s);
    out[k] = s.values;
  });
  return out;
}

std::uint64_t default_stationary_steps(std::size_t d) {
  return static_cast<std::uint64_t>(std::ceil(2.0 * t_crit(d)));
}

/// Histogram, overlay and KS / spacing reports for a pool of spectra.
std::vector<stats::ComparisonReport> stationary_outputs(const RunConfig& cfg,
                                                        const EnsembleKind& kind,
                                                        const std::vector<std::vector<double>>& spectra,
                                                        std::uint64_t seed) {
  std::vector<double> pool;
  for (const auto& s : spectra) pool.insert(pool.end(), s.begin(), s.end());
  const auto [lo, hi] = std::minmax_element(pool.begin(), pool.end());
  const auto [slo, shi] = theory::limiting_support(kind);
  const auto h = stats::histogram(pool, cfg.bins, std::min(*lo, slo), std::max(*hi, shi));
  std::ostringstream hist;
  stats::write_histogram_csv(hist, h);
  emit_raw_csv(cfg, "stationary_histogram", hist.str());
  std::ostringstream dens;
  theory::write_density_csv(dens, kind, 401);
  emit_raw_csv(cfg, "limiting_density", dens.str());

  const std::uint64_t n = pool.size();
  const double ks = stats::ks_distance(pool, [&](double x) { return theory::limiting_cdf(kind, x); });
  std::vector<stats::ComparisonReport> reports;
  reports.push_back(stats::ComparisonReport::make(
      "ks_limiting_density", ks, kind.square() ? 0.02 : 0.03, {n}, seed));

  const auto spacings = stats::unfold_and_spacings(spectra, kind);
  if (spacings.size() >= 100) {
    const bool unitary = kind.family() == Family::ImaginaryAntisymmetric;
    const double ks_rmt = stats::ks_distance(
        spacings, unitary ? stats::gue_surmise_cdf : stats::goe_surmise_cdf);
    const double ks_poisson = stats::ks_distance(spacings, stats::poisson_spacing_cdf);
    reports.push_back(stats::ComparisonReport::make(
        unitary ? "spacing_ks_gue_minus_poisson" : "spacing_ks_goe_minus_poisson",
        ks_rmt - ks_poisson, 0.0, {spacings.size()}, seed));
  }
  return reports;
}

// ------------------------------------------------------------- commands

Table tv_exact_table(const std::vector<TvPoint>& curve) {
  Table t{{"t", "eta", "tv"}, {}};
  for (const auto& p : curve) t.rows.push_back({p.t, p.eta, p.exact});
  return t;
}

Table tv_asymptotic_table(const std::vector<TvPoint>& curve) {
  Table t{{"t", "eta", "asymptotic", "asymptotic_standard", "tail"}, {}};
  for (const auto& p : curve)
    t.rows.push_back({p.t, p.eta, p.asymptotic, p.asymptotic_standard, p.tail});
  return t;
}

Table trajectory_table(const std::vector<WalkTrajectory>& trajs) {
  Table t{{"walker_id", "t", "eta", "observable", "index", "value"}, {}};
  for (const auto& tr : trajs)
    for (std::size_t k = 0; k < tr.t.size(); ++k)
      for (std::size_t i = 0; i < tr.values[k].size(); ++i)
        t.rows.push_back({tr.walker_id, tr.t[k], tr.eta[k], tr.observable, i, tr.values[k][i]});
  return t;
}

}  // namespace

int cmd_hamming(const RunConfig& cfg) {
  const auto kind = cfg.kind();
  const std::size_t d = kind.dimension();
  const std::uint64_t steps = steps_for(cfg, d);
  const std::uint64_t tv_stride = std::max<std::uint64_t>(1, steps / 20000);
  const auto curve = tv_curve(d, steps, tv_stride);
  emit_table(cfg, "tv_exact", tv_exact_table(curve));
  emit_table(cfg, "tv_asymptotic", tv_asymptotic_table(curve));

  const auto stat = ou_limit(stationary(d));
  const auto [ou_slope, ou_diff] = theory::ou_coefficients();
  json report = {{"kind", family_name(kind.family())},
                 {"N", kind.rows()},
                 {"M", kind.cols()},
                 {"d", d},
                 {"steps", steps},
                 {"t_crit", t_crit(d)},
                 {"eta_crit", std::log(static_cast<double>(d)) / 4.0},
                 {"ou_drift_slope", ou_slope},
                 {"ou_diffusion", ou_diff},
                 {"stationary_xi_mean", stat.mean},
                 {"stationary_xi_variance", stat.variance},
                 {"walkers", cfg.walkers}};

  if (cfg.walkers > 0) {
    const std::uint64_t seed = require_seed(cfg);
    const SignVector start(kind);
    const auto trajs =
        run_walkers(start, seed, cfg.walkers, steps, {hamming_observer(start)}, cfg.stride);
    emit_table(cfg, "hamming_trajectories", trajectory_table(trajs));
    const auto fit = ou_drift_regression(trajs);
    NeumaierSum late;
    std::uint64_t late_n = 0;
    for (const auto& tr : trajs)
      for (std::size_t k = 0; k < tr.t.size(); ++k)
        if (tr.eta[k] >= 3.0 && tr.eta[k] <= 6.0) {
          late.add(tr.values[k][0] / static_cast<double>(d + 1));
          ++late_n;
        }
    report["ou_fit"] = {{"slope", fit.slope},         {"intercept", fit.intercept},
                        {"slope_se", fit.slope_se},   {"log_slope", fit.log_slope},
                        {"deta", fit.deta},           {"pairs", fit.pairs},
                        {"slope_expected_at_deta", (std::exp(-2.0 * fit.deta) - 1.0) / fit.deta}};
    if (late_n) {
      report["late_mean_fraction"] = late.value() / static_cast<double>(late_n);
      report["late_samples"] = late_n;
    }
  }
  emit_json(cfg, "ou_report", report);
  std::cout << "d=" << d << " t_crit=" << format_double(t_crit(d))
            << " eta_crit=" << format_double(std::log(static_cast<double>(d)) / 4.0) << '\n';
  return Ok;
}

int cmd_spectra(const RunConfig& cfg) {
  const auto kind = cfg.kind();
  const std::uint64_t seed = require_seed(cfg);
  const std::size_t d = kind.dimension();
  const std::uint64_t steps = steps_for(cfg, d);
  Observer spec{"lambda", [](const SignVector& s) { return eigenvalues(realize(s)).values; }};
  const auto trajs = run_walkers(SignVector(kind), seed, cfg.walkers, steps, {spec}, cfg.stride);
  emit_table(cfg, "spectra_trajectories", trajectory_table(trajs));
  std::vector<stats::ComparisonReport> reports;
  if (cfg.draws > 0) {
    const auto spectra = stationary_spectra(kind, cfg.draws, default_stationary_steps(d), seed,
                                            cfg.workers);
    reports = stationary_outputs(cfg, kind, spectra, seed);
    emit_json(cfg, "spectra_report", {{"reports", reports_json(reports)}});
    print_reports(reports);
  }
  return Ok;
}

int cmd_stationary(const RunConfig& cfg) {
  const auto kind = cfg.kind();
  const std::uint64_t seed = require_seed(cfg);
  const std::size_t d = kind.dimension();
  const std::uint64_t draws = cfg.draws ? cfg.draws : 500;
  const std::uint64_t steps = cfg.steps.value_or(default_stationary_steps(d));
  const auto spectra = stationary_spectra(kind, draws, steps, seed, cfg.workers);
  Table t{{"draw", "index", "lambda"}, {}};
  for (std::size_t k = 0; k < spectra.size(); ++k)
    for (std::size_t i = 0; i < spectra[k].size(); ++i) t.rows.push_back({k, i, spectra[k][i]});
  emit_table(cfg, "stationary_spectra", t);
  const auto reports = stationary_outputs(cfg, kind, spectra, seed);
  emit_json(cfg, "stationary_report",
            {{"kind", family_name(kind.family())}, {"N", kind.rows()}, {"M", kind.cols()},
             {"draws", draws}, {"steps", steps}, {"reports", reports_json(reports)}});
  print_reports(reports);
  return all_pass(reports) ? Ok : AcceptanceFailure;
}

int cmd_moments(const RunConfig& cfg) {
  MomentConfig mc;
  mc.kind = cfg.kind();
  mc.c = cfg.c;
  mc.samples = cfg.samples.value_or(10000);
  mc.seed = require_seed(cfg);
  mc.dt = cfg.dt;
  mc.higher = cfg.higher;
  mc.workers = cfg.workers;
  mc.bursts_per_anchor = cfg.bursts_per_anchor;
  const auto e = estimate(mc, SignVector(mc.kind));
  emit_json(cfg, "moments", to_json(e));

  const std::vector<std::uint64_t> sizes{e.samples};
  std::vector<stats::ComparisonReport> reports;
  double theory_scaled = 0, empirical_scaled = 0;
  if (mc.kind.square()) {
    theory_scaled = mc.kind.family() == Family::RealSymmetric ? 8.0 : 4.0;
    empirical_scaled = bulk_scaled_diffusion(e);
  } else {
    theory_scaled = 16.0;
    empirical_scaled = diffusion_slope(e).slope;
  }
  reports.push_back(stats::ComparisonReport::make(
      "diffusion_relative_error", std::fabs(empirical_scaled / theory_scaled - 1.0), 0.1, sizes,
      mc.seed));
  const auto drift = drift_agreement(e);
  reports.push_back(stats::ComparisonReport::make("drift_slope_error", std::fabs(drift.slope - 1.0),
                                                  0.1, sizes, mc.seed));
  reports.push_back(
      stats::ComparisonReport::make("drift_one_minus_r2", 1.0 - drift.r2, 0.05, sizes, mc.seed));
  emit_json(cfg, "comparison",
            {{"scaled_diffusion", empirical_scaled},
             {"scaled_diffusion_theory", theory_scaled},
             {"drift_fit", {{"slope", drift.slope}, {"intercept", drift.intercept},
                            {"r2", drift.r2}, {"slope_se", drift.slope_se}, {"n", drift.n}}},
             {"reports", reports_json(reports)}});
  print_reports(reports);
  return all_pass(reports) ? Ok : AcceptanceFailure;
}

int cmd_oracle(const RunConfig& cfg) {
  const auto kind = cfg.kind();
  const std::size_t d = kind.dimension();
  if (d > oracle::kMaxFloatDimension) {
    throw ConfigError("oracle: d_N = " + std::to_string(d) + " exceeds the float guard " +
                      std::to_string(oracle::kMaxFloatDimension));
  }
  if (cfg.exact && d > oracle::kMaxRationalDimension) {
    throw ConfigError("oracle: exact rational mode refused, d_N = " + std::to_string(d) +
                      " exceeds " + std::to_string(oracle::kMaxRationalDimension));
  }
  const std::uint64_t seed = cfg.seed.value_or(1);
  std::vector<stats::ComparisonReport> reports;
  auto add = [&](std::string name, double stat, double thr, std::vector<std::uint64_t> n = {}) {
    reports.push_back(stats::ComparisonReport::make(std::move(name), stat, thr, std::move(n), seed));
  };

  // Kernel against the closed forms.
  const SignVector start(kind);
  const std::uint64_t max_dt = std::min<std::uint64_t>(10, d);
  double pmd = 0, first_moment = 0, phi = 0;
  for (std::uint64_t dt = 0; dt <= max_dt; ++dt) {
    const auto k = oracle::exact_transition_kernel(start, dt);
    pmd = std::max(pmd, std::fabs(k[dt] - prob_max_distance(d, dt)));
    NeumaierSum mean;
    for (std::size_t x = 0; x <= d; ++x) mean.add(static_cast<double>(x) * k[x]);
    first_moment = std::max(first_moment, mean.value() - static_cast<double>(dt));
    if (dt >= 1 && d >= 2) phi = std::max(phi, oracle::phi_assembly_error(d, dt));
  }
  add("kernel_vs_prob_max_distance", pmd, 1e-13);
  add("phi_assembly", phi, 1e-13);
  add("mean_distance_excess_over_dt", first_moment, 1e-13);

  // Full-state marginal against the birth-death recursion.
  {
    auto full = oracle::FullStateDistribution::delta(d, 0);
    auto hd = HammingDistribution::delta(d, 0);
    double err = 0;
    for (int t = 1; t <= 50; ++t) {
      full = oracle::apply_walk_operator(full);
      hd = evolve_distribution(hd);
      const auto marg = oracle::hamming_marginal(full);
      for (std::size_t x = 0; x <= d; ++x) err = std::max(err, std::fabs(marg[x] - hd.probs[x]));
    }
    add("full_state_marginal_vs_recursion", err, 1e-13);
    const auto u = oracle::apply_walk_operator(oracle::FullStateDistribution::uniform(d));
    double dev = 0;
    for (double p : u.probs) dev = std::max(dev, std::fabs(p - 1.0 / static_cast<double>(u.probs.size())));
    add("uniform_is_stationary", dev, 1e-15);
  }

  if (cfg.exact) {
    double mismatch = 0;
    for (std::uint64_t dt = 0; dt <= max_dt; ++dt) {
      const auto k = oracle::exact_transition_kernel_rational(d, dt);
      Rational total = 0;
      for (const auto& p : k) total += p;
      if (k[dt] != prob_max_distance_exact(d, dt) || total != 1) mismatch += 1;
    }
    add("rational_kernel_exact", mismatch, 0.0);
    // rate of ||rho^t delta - u||_1 against Lambda_1 over [5d, 20d]
    if (d >= 2) add("decay_rate_relative_error", std::fabs(oracle::decay_rate_ratio(d, 5 * d, 20 * d) - 1.0), 0.02);
  }

  // Exhaustive moments against the path-count assembly, at a random vertex.
  {
    Stream pick = tagged_stream(seed, StreamTag::Anchor, 0);
    WalkState st{start, 0};
    for (std::uint64_t t = 0; t < default_stationary_steps(d); ++t) step(st, pick);
    const auto b = realize(st.signs);
    const auto ex1 = oracle::exhaustive_moments(b, 1);
    const auto as1 = oracle::assembled_moments(b, 1);
    add("delta_b_mean_dt1",
        (ex1.mean_delta + 2.0 / static_cast<double>(d + 1) * b.entries).cwiseAbs().maxCoeff(), 1e-13);
    double err = (ex1.second - as1.second).cwiseAbs().maxCoeff();
    err = std::max(err, (ex1.drift - as1.drift).cwiseAbs().maxCoeff());
    if (d <= oracle::kMaxPairEnumerationDimension) {
      const auto ex2 = oracle::exhaustive_moments(b, 2);
      const auto as2 = oracle::assembled_moments(b, 2);
      err = std::max(err, (ex2.second - as2.second).cwiseAbs().maxCoeff());
      err = std::max(err, (ex2.drift - as2.drift).cwiseAbs().maxCoeff());
    }
    add("exhaustive_vs_assembled_moments", err, 1e-12);
  }

  // Sampler against the enumerated stationary measure (d_N <= 12).
  if (d <= oracle::kMaxRationalDimension) {
    const auto measure = oracle::cached_stationary_measure(kind, cfg.out / "cache");
    const std::uint64_t samples = cfg.samples.value_or(1000000);
    const auto steps = static_cast<std::uint64_t>(std::ceil(10.0 * t_crit(d)));
    const auto freq = oracle::sample_stationary_atoms(measure, samples, steps, seed);
    add("sampler_vs_enumeration_tv", stats::tv_discrete(freq, measure.weights), 0.02,
        {samples, measure.atoms.size()});
  }

  emit_json(cfg, "oracle_report",
            {{"kind", family_name(kind.family())}, {"N", kind.rows()}, {"M", kind.cols()},
             {"d", d}, {"exact", cfg.exact}, {"reports", reports_json(reports)}});
  print_reports(reports);
  return all_pass(reports) ? Ok : AcceptanceFailure;
}

int main(int argc, char** argv) {
  CLI::App app{"Random walks on Bernoulli matrix ensembles"};
  app.set_version_flag("--version", std::string(version_string()));
  app.set_config("--config", "", "flat key=value file; command-line flags override it");
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig cfg;
  std::uint64_t seed = 0, steps = 0, samples = 0, dt = 0;
  std::string format = "csv";
  app.add_option("--kind", cfg.family, "realsym | antisym | rect")
      ->check(CLI::IsMember({"realsym", "antisym", "rect"}));
  app.add_option("--n", cfg.n, "N (rows)");
  app.add_option("--m", cfg.m, "M (rect columns, default N/2)");
  auto* seed_opt = app.add_option("--seed", seed, "64-bit master seed");
  app.add_option("--walkers", cfg.walkers, "independent walkers");
  app.add_option("--eta-max", cfg.eta_max, "walk length in units of d_N");
  auto* steps_opt = app.add_option("--steps", steps, "walk length in steps (overrides --eta-max)");
  app.add_option("--stride", cfg.stride, "sampling stride in steps (0: d_N/10)");
  app.add_option("--c", cfg.c, "burst exponent, dt = round(N^c)");
  auto* samples_opt = app.add_option("--samples", samples, "bursts (moments) or walkers (oracle)");
  auto* dt_opt = app.add_option("--dt", dt, "burst length override");
  app.add_option("--draws", cfg.draws, "stationary draws");
  app.add_option("--bins", cfg.bins, "histogram bins");
  app.add_option("--workers", cfg.workers, "worker threads");
  app.add_flag("--exact", cfg.exact, "oracle: exact rational mode (d_N <= 12)");
  app.add_option("--bursts-per-anchor", cfg.bursts_per_anchor,
                 "moments: re-anchor after this many bursts (0: fixed anchor)");
  app.add_flag("--higher", cfg.higher, "moments: third and fourth moments");
  app.add_option("--out", cfg.out, "output directory");
  app.add_option("--format", format, "tabular output format")->check(CLI::IsMember({"csv", "json"}));

  for (const char* name : {"hamming", "spectra", "moments", "oracle", "stationary"}) {
    app.add_subcommand(name);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return Usage;
  }

  cfg.subcommand = app.get_subcommands().front()->get_name();
  if (seed_opt->count()) cfg.seed = seed;
  if (steps_opt->count()) cfg.steps = steps;
  if (samples_opt->count()) cfg.samples = samples;
  if (dt_opt->count()) cfg.dt = dt;
  cfg.format = format == "json" ? Format::Json : Format::Csv;

  try {
    cfg.validate();
    if (cfg.subcommand == "hamming") return cmd_hamming(cfg);
    if (cfg.subcommand == "spectra") return cmd_spectra(cfg);
    if (cfg.subcommand == "moments") return cmd_moments(cfg);
    if (cfg.subcommand == "oracle") return cmd_oracle(cfg);
    return cmd_stationary(cfg);
  } catch (const bwalk::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return Usage;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return Numerical;
  } catch (const DomainError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return Numerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return Usage;
  }
}

}  // namespace bwalk::cli
