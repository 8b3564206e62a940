#include "bwalk/exact_oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>

#include "bwalk/errors.hpp"
#include "bwalk/hamming.hpp"
#include "bwalk/kernels.hpp"
#include "bwalk/spectral.hpp"
#include "bwalk/stats.hpp"
#include "bwalk/summation.hpp"

namespace bwalk::oracle {

namespace {

void guard(std::size_t d, std::size_t limit, const char* what) {
  if (d > limit) {
    throw ConfigError(std::string(what) + ": d_N = " + std::to_string(d) + " exceeds the limit " +
                      std::to_string(limit));
  }
}

}  // namespace

FullStateDistribution FullStateDistribution::delta(std::size_t d, std::uint64_t state) {
  guard(d, kMaxFloatDimension, "full-state distribution");
  FullStateDistribution p{d, std::vector<double>(std::size_t{1} << d, 0.0)};
  p.probs.at(state) = 1.0;
  return p;
}

FullStateDistribution FullStateDistribution::uniform(std::size_t d) {
  guard(d, kMaxFloatDimension, "full-state distribution");
  const std::size_t n = std::size_t{1} << d;
  return {d, std::vector<double>(n, 1.0 / static_cast<double>(n))};
}

double FullStateDistribution::mass() const {
  NeumaierSum s;
  for (double v : probs) s.add(v);
  return s.value();
}

FullStateDistribution apply_walk_operator(const FullStateDistribution& p) {
  guard(p.d, kMaxFloatDimension, "apply_walk_operator");
  FullStateDistribution out{p.d, std::vector<double>(p.probs.size())};
  kernels::hypercube_step(p.probs, out.probs, static_cast<unsigned>(p.d));
  return out;
}

std::vector<Rational> apply_walk_operator_exact(const std::vector<Rational>& p, std::size_t d) {
  guard(d, kMaxRationalDimension, "exact rational walk operator");
  if (p.size() != (std::size_t{1} << d)) throw ConfigError("rational distribution has wrong size");
  std::vector<Rational> out(p.size());
  for (std::size_t v = 0; v < p.size(); ++v) {
    Rational acc = p[v];
    for (std::size_t i = 0; i < d; ++i) acc += p[v ^ (std::size_t{1} << i)];
    out[v] = acc / static_cast<long long>(d + 1);
  }
  return out;
}

std::vector<double> log_l1_to_uniform_exact(std::size_t d, std::uint64_t t_max) {
  guard(d, kMaxRationalDimension, "exact decay");
  const std::size_t n = std::size_t{1} << d;
  std::vector<BigInt> num(n, 0), next(n);
  num[0] = 1;
  BigInt den = 1;  // (d+1)^t
  std::vector<double> out;
  out.reserve(t_max + 1);
  for (std::uint64_t t = 0;; ++t) {
    // ||p - u||_1 = sum |num 2^d - den| / (den 2^d)
    BigInt dist = 0;
    for (const auto& v : num) {
      BigInt diff = (v << d) - den;
      dist += diff < 0 ? BigInt(-diff) : diff;
    }
    const auto ln = [](const BigInt& x) {
      const std::size_t shift = x > 0 ? std::max<std::size_t>(msb(x), 52) - 52 : 0;
      return std::log(static_cast<double>(BigInt(x >> shift))) + shift * std::log(2.0);
    };
    out.push_back(ln(dist) - ln(den) - d * std::log(2.0));
    if (t == t_max) break;
    for (std::size_t v = 0; v < n; ++v) {
      BigInt acc = num[v];
      for (std::size_t i = 0; i < d; ++i) acc += num[v ^ (std::size_t{1} << i)];
      next[v] = std::move(acc);
    }
    num.swap(next);
    den *= d + 1;
  }
  return out;
}

double decay_rate_ratio(std::size_t d, std::uint64_t t_lo, std::uint64_t t_hi) {
  if (t_hi <= t_lo) throw ConfigError("decay_rate_ratio: empty window");
  const auto l = log_l1_to_uniform_exact(d, t_hi);
  std::vector<double> t, y;
  for (std::uint64_t s = t_lo; s <= t_hi; ++s) {
    t.push_back(static_cast<double>(s));
    y.push_back(l[s]);
  }
  const std::vector<double> w(t.size(), 1.0);
  const auto fit = stats::weighted_regression(t, y, w);
  return fit.slope / std::log(1.0 - 2.0 / (d + 1.0));
}

std::vector<double> hamming_marginal(const FullStateDistribution& p, std::uint64_t origin) {
  std::vector<NeumaierSum> acc(p.d + 1);
  for (std::size_t v = 0; v < p.probs.size(); ++v) acc[std::popcount(v ^ origin)].add(p.probs[v]);
  std::vector<double> out(p.d + 1);
  for (std::size_t x = 0; x <= p.d; ++x) out[x] = acc[x].value();
  return out;
}

std::vector<double> exact_transition_kernel(const SignVector& start, std::uint64_t dt) {
  const std::size_t d = start.size();
  guard(d, kMaxFloatDimension, "exact_transition_kernel");
  const std::uint64_t s0 = start.to_state();
  auto p = FullStateDistribution::delta(d, s0);
  std::vector<double> buf(p.probs.size());
  for (std::uint64_t t = 0; t < dt; ++t) {
    kernels::hypercube_step(p.probs, buf, static_cast<unsigned>(d));
    p.probs.swap(buf);
  }
  return hamming_marginal(p, s0);
}

std::vector<Rational> exact_transition_kernel_rational(std::size_t d, std::uint64_t dt) {
  guard(d, kMaxRationalDimension, "exact rational kernel");
  std::vector<Rational> p(std::size_t{1} << d, Rational(0));
  p[0] = 1;
  for (std::uint64_t t = 0; t < dt; ++t) p = apply_walk_operator_exact(p, d);
  std::vector<Rational> out(d + 1, Rational(0));
  for (std::size_t v = 0; v < p.size(); ++v) out[std::popcount(v)] += p[v];
  return out;
}

double phi_assembly_error(std::size_t d, std::uint64_t dt) {
  guard(d, kMaxFloatDimension, "phi_assembly_error");
  if (d < 2) throw ConfigError("phi_assembly_error needs d_N >= 2");
  auto p = FullStateDistribution::delta(d, 0);
  std::vector<double> buf(p.probs.size());
  for (std::uint64_t t = 0; t < dt; ++t) {
    kernels::hypercube_step(p.probs, buf, static_cast<unsigned>(d));
    p.probs.swap(buf);
  }
  NeumaierSum one, two;
  for (std::size_t v = 0; v < p.probs.size(); ++v) {
    if (v & 1) one.add(p.probs[v]);
    if ((v & 3) == 3) two.add(p.probs[v]);
  }
  const auto px = hamming_marginal(p, 0);
  NeumaierSum a1, a2;
  for (std::size_t x = 0; x <= d; ++x) {
    const BigInt omega = count_ordered_paths(d, x);
    if (x >= 1) {
      a1.add(px[x] * static_cast<double>(Rational(count_paths_containing(d, x, 1), omega)));
    }
    if (x >= 2) {
      a2.add(px[x] * static_cast<double>(Rational(count_paths_containing(d, x, 2), omega)));
    }
  }
  return std::max(std::fabs(one.value() - a1.value()), std::fabs(two.value() - a2.value()));
}

namespace {

std::vector<double> spectrum_of_state(const EnsembleKind& kind, std::uint64_t state) {
  return eigenvalues(realize(SignVector::from_state(kind, state))).values;
}

}  // namespace

SpectralMeasure exact_stationary_spectral_measure(const EnsembleKind& kind, double merge) {
  const std::size_t d = kind.dimension();
  guard(d, kMaxFloatDimension, "exact_stationary_spectral_measure");
  const std::size_t states = std::size_t{1} << d;
  std::vector<std::vector<double>> spectra(states);
  for (std::size_t v = 0; v < states; ++v) spectra[v] = spectrum_of_state(kind, v);

  std::vector<std::uint32_t> order(states);
  std::iota(order.begin(), order.end(), 0u);
  std::stable_sort(order.begin(), order.end(),
                   [&](auto a, auto b) { return spectra[a] < spectra[b]; });

  SpectralMeasure m{kind, {}, {}, std::vector<std::uint32_t>(states)};
  std::vector<std::uint64_t> counts;
  auto close = [&](const std::vector<double>& a, const std::vector<double>& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
      if (std::fabs(a[i] - b[i]) > merge) return false;
    return true;
  };
  // Atoms are created in lexicographic order, so any merge partner has a
  // first coordinate within `merge` of the current one: scan back that far.
  for (auto v : order) {
    const auto& s = spectra[v];
    std::size_t found = m.atoms.size();
    for (std::size_t a = m.atoms.size(); a-- > 0;) {
      if (m.atoms[a][0] < s[0] - merge) break;
      if (close(m.atoms[a], s)) {
        found = a;
        break;
      }
    }
    if (found == m.atoms.size()) {
      m.atoms.push_back(s);
      counts.push_back(0);
    }
    ++counts[found];
    m.atom_of_state[v] = static_cast<std::uint32_t>(found);
  }
  m.weights.resize(counts.size());
  for (std::size_t a = 0; a < counts.size(); ++a) {
    m.weights[a] = static_cast<double>(counts[a]) / static_cast<double>(states);
  }
  return m;
}

namespace {

constexpr char kMagic[8] = {'B', 'W', 'O', 'R', 'A', 'C', 'L', 'E'};
constexpr std::uint32_t kCacheVersion = 1;

template <class T>
void put(std::ofstream& f, const T& v) {
  f.write(reinterpret_cast<const char*>(&v), sizeof v);
}
template <class T>
bool get(std::ifstream& f, T& v) {
  return static_cast<bool>(f.read(reinterpret_cast<char*>(&v), sizeof v));
}

}  // namespace

void save_measure(const std::filesystem::path& file, const SpectralMeasure& m) {
  if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path());
  std::ofstream f(file, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write oracle cache " + file.string());
  f.write(kMagic, sizeof kMagic);
  put(f, kCacheVersion);
  put(f, static_cast<std::uint32_t>(m.kind.family()));
  put(f, static_cast<std::uint32_t>(m.kind.rows()));
  put(f, static_cast<std::uint32_t>(m.kind.cols()));
  put(f, static_cast<std::uint32_t>(0));  // dt: stationary measure
  put(f, static_cast<std::uint64_t>(m.atoms.size()));
  put(f, static_cast<std::uint64_t>(m.atoms.empty() ? 0 : m.atoms[0].size()));
  put(f, static_cast<std::uint64_t>(m.atom_of_state.size()));
  for (std::size_t a = 0; a < m.atoms.size(); ++a) {
    for (double v : m.atoms[a]) put(f, v);
    put(f, m.weights[a]);
  }
  for (auto s : m.atom_of_state) put(f, s);
}

std::optional<SpectralMeasure> load_measure(const std::filesystem::path& file,
                                            const EnsembleKind& kind) {
  std::ifstream f(file, std::ios::binary);
  if (!f) return std::nullopt;
  char magic[8];
  std::uint32_t version, family, n, m, dt;
  std::uint64_t atoms, width, states;
  if (!f.read(magic, 8) || std::memcmp(magic, kMagic, 8) != 0) return std::nullopt;
  if (!get(f, version) || version != kCacheVersion) return std::nullopt;
  if (!get(f, family) || !get(f, n) || !get(f, m) || !get(f, dt)) return std::nullopt;
  if (family != static_cast<std::uint32_t>(kind.family()) ||
      n != static_cast<std::uint32_t>(kind.rows()) || m != static_cast<std::uint32_t>(kind.cols()) ||
      dt != 0) {
    return std::nullopt;
  }
  if (!get(f, atoms) || !get(f, width) || !get(f, states)) return std::nullopt;
  if (states != (std::uint64_t{1} << kind.dimension())) return std::nullopt;
  SpectralMeasure out{kind, std::vector<std::vector<double>>(atoms, std::vector<double>(width)),
                      std::vector<double>(atoms), std::vector<std::uint32_t>(states)};
  for (std::uint64_t a = 0; a < atoms; ++a) {
    for (auto& v : out.atoms[a])
      if (!get(f, v)) return std::nullopt;
    if (!get(f, out.weights[a])) return std::nullopt;
  }
  for (auto& s : out.atom_of_state)
    if (!get(f, s) || s >= atoms) return std::nullopt;
  return out;
}

SpectralMeasure cached_stationary_measure(const EnsembleKind& kind,
                                          const std::filesystem::path& dir) {
  const auto file = dir / ("oracle_" + std::string(family_name(kind.family())) + "_" +
                           std::to_string(kind.rows()) + "_" + std::to_string(kind.cols()) +
                           "_0.bin");
  if (auto hit = load_measure(file, kind)) return *hit;
  auto m = exact_stationary_spectral_measure(kind);
  save_measure(file, m);
  return m;
}

std::vector<double> sample_stationary_atoms(const SpectralMeasure& m, std::uint64_t samples,
                                            std::uint64_t steps, std::uint64_t seed) {
  std::vector<std::uint64_t> counts(m.atoms.size(), 0);
  const SignVector start(m.kind);
  for (std::uint64_t k = 0; k < samples; ++k) {
    WalkState st{start, 0};
    Stream stream = tagged_stream(seed, StreamTag::Sampler, k);
    for (std::uint64_t t = 0; t < steps; ++t) step(st, stream);
    ++counts[m.atom_of_state[st.signs.to_state()]];
  }
  std::vector<double> freq(counts.size());
  for (std::size_t a = 0; a < counts.size(); ++a) {
    freq[a] = static_cast<double>(counts[a]) / static_cast<double>(samples);
  }
  return freq;
}

namespace {

// Accumulates dl products with weight w.
struct MomentSums {
  Eigen::VectorXd s1;
  Eigen::MatrixXd s2, s3, s4, mean_delta;

  MomentSums(int n, const Eigen::MatrixXd& shape)
      : s1(Eigen::VectorXd::Zero(n)),
        s2(Eigen::MatrixXd::Zero(n, n)),
        s3(Eigen::MatrixXd::Zero(n, n)),
        s4(Eigen::MatrixXd::Zero(n, n)),
        mean_delta(Eigen::MatrixXd::Zero(shape.rows(), shape.cols())) {}

  void add(double w, const Eigen::VectorXd& dl, const Eigen::MatrixXd& db) {
    s1 += w * dl;
    const Eigen::VectorXd dl2 = dl.array().square();
    s2 += w * dl * dl.transpose();
    s3 += w * dl2 * dl.transpose();
    s4 += w * dl2 * dl2.transpose();
    mean_delta += w * db;
  }

  ExactMoments finish(std::uint64_t dt, std::size_t d) const {
    ExactMoments e;
    e.dt = dt;
    e.deta = static_cast<double>(dt) / static_cast<double>(d);
    e.drift = s1 / e.deta;
    e.second = s2 / e.deta;
    e.third = s3 / e.deta;
    e.fourth = s4 / e.deta;
    e.mean_delta = mean_delta;
    return e;
  }
};

Eigen::VectorXd increment(const ScaledMatrix& after, const std::vector<double>& before) {
  const auto v = eigenvalues(after).values;
  Eigen::VectorXd dl(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) dl[i] = v[i] - before[i];
  return dl;
}

void check_dt(std::uint64_t dt, std::size_t d) {
  if (dt != 1 && dt != 2) throw ConfigError("exhaustive moments support dt in {1, 2}");
  // (d + 1)^dt decompositions; no 2^d state vector is involved
  if (dt == 2) guard(d, kMaxPairEnumerationDimension, "exhaustive moments (dt = 2)");
}

}  // namespace

ExactMoments exhaustive_moments(const ScaledMatrix& b, std::uint64_t dt) {
  const std::size_t d = b.kind.dimension();
  check_dt(dt, d);
  const auto before = eigenvalues(b).values;
  const int n = static_cast<int>(before.size());
  MomentSums sums(n, b.entries);
  const double w = 1.0 / std::pow(static_cast<double>(d + 1), static_cast<double>(dt));
  for (std::size_t i = 0; i <= d; ++i) {
    ScaledMatrix m1 = b;
    if (i < d) apply_flip(m1, i);
    if (dt == 1) {
      sums.add(w, increment(m1, before), m1.entries - b.entries);
      continue;
    }
    for (std::size_t j = 0; j <= d; ++j) {
      ScaledMatrix m2 = m1;
      if (j < d) apply_flip(m2, j);
      sums.add(w, increment(m2, before), m2.entries - b.entries);
    }
  }
  return sums.finish(dt, d);
}

ExactMoments assembled_moments(const ScaledMatrix& b, std::uint64_t dt) {
  const std::size_t d = b.kind.dimension();
  check_dt(dt, d);
  const auto before = eigenvalues(b).values;
  const int n = static_cast<int>(before.size());
  const auto px = evolve_distribution(HammingDistribution::delta(d, 0), dt).probs;
  MomentSums sums(n, b.entries);
  // X = 0: nothing flipped, contributes zero.
  for (std::size_t i = 0; i < d; ++i) {
    ScaledMatrix m1 = b;
    apply_flip(m1, i);
    sums.add(px[1] / static_cast<double>(d), increment(m1, before), m1.entries - b.entries);
    if (dt < 2) continue;
    const double w2 = px[2] / static_cast<double>(binomial(d, 2));
    for (std::size_t j = i + 1; j < d; ++j) {
      ScaledMatrix m2 = m1;
      apply_flip(m2, j);
      sums.add(w2, increment(m2, before), m2.entries - b.entries);
    }
  }
  return sums.finish(dt, d);
}

}  // namespace bwalk::oracle
