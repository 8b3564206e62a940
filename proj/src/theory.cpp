#include "bwalk/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "bwalk/errors.hpp"
#include "bwalk/io.hpp"
#include "bwalk/kernels.hpp"

namespace bwalk::theory {

namespace {

using kernels::PairTerm;

bool has_coincident(std::span<const double> x) {
  std::vector<double> s(x.begin(), x.end());
  std::sort(s.begin(), s.end());
  return std::adjacent_find(s.begin(), s.end()) != s.end();
}

void require_simple(std::span<const double> x, const char* who) {
  if (has_coincident(x)) throw SingularInputError(std::string(who) + ": coincident eigenvalues");
}

bool odd_antisymmetric(const EnsembleKind& k) {
  return k.family() == Family::ImaginaryAntisymmetric && k.rows() % 2 == 1;
}

void require_positive(std::span<const double> x, const char* who) {
  for (double v : x) {
    if (!(v > 0)) throw SingularInputError(std::string(who) + ": coordinate at the zero pole");
  }
}

std::vector<double> pair(std::span<const double> x, PairTerm t) {
  std::vector<double> out(x.size());
  kernels::pair_sums(x, out, t);
  return out;
}

}  // namespace

std::vector<double> drift(const EnsembleKind& kind, std::span<const double> x) {
  require_simple(x, "drift");
  const double n = kind.rows();
  std::vector<double> out(x.size());
  switch (kind.family()) {
    case Family::RealSymmetric: {
      const auto s = pair(x, PairTerm::InverseDifference);
      for (std::size_t i = 0; i < x.size(); ++i) out[i] = -2.0 * x[i] + 4.0 / n * s[i];
      break;
    }
    case Family::ImaginaryAntisymmetric: {
      require_positive(x, "drift");
      const auto sd = pair(x, PairTerm::InverseDifference);
      const auto ss = pair(x, PairTerm::InverseSum);
      const bool zero_mode = odd_antisymmetric(kind);
      for (std::size_t i = 0; i < x.size(); ++i) {
        out[i] = -2.0 * x[i] + 4.0 / n * (sd[i] + ss[i]);
        if (zero_mode) out[i] += 4.0 / (n * x[i]);
      }
      break;
    }
    case Family::Rectangular: {
      const auto s = pair(x, PairTerm::SumOverDifference);
      for (std::size_t i = 0; i < x.size(); ++i) out[i] = 4.0 * (1.0 - x[i]) + 4.0 / n * s[i];
      break;
    }
  }
  return out;
}

std::vector<double> drift_full_antisymmetric(int n, std::span<const double> values) {
  require_simple(values, "drift");
  const std::size_t len = values.size();
  std::vector<double> out(len);
  for (std::size_t i = 0; i < len; ++i) {
    const std::size_t partner = len - 1 - i;
    if (partner == i) {
      out[i] = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    double s = 0;
    for (std::size_t j = 0; j < len; ++j) {
      if (j != i && j != partner) s += 1.0 / (values[i] - values[j]);
    }
    out[i] = -2.0 * values[i] + 4.0 / n * s;
  }
  return out;
}

std::vector<double> diffusion(const EnsembleKind& kind, std::span<const double> x) {
  const double n = kind.rows();
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    switch (kind.family()) {
      case Family::RealSymmetric: out[i] = 8.0 / n; break;
      case Family::ImaginaryAntisymmetric: out[i] = 4.0 / n; break;
      case Family::Rectangular: out[i] = 16.0 * x[i] / n; break;
    }
  }
  return out;
}

std::vector<double> diffusion_gradient(const EnsembleKind& kind, std::span<const double> x) {
  const double g = kind.family() == Family::Rectangular ? 16.0 / kind.rows() : 0.0;
  return std::vector<double>(x.size(), g);
}

std::vector<double> surrogate_log_density_gradient(const EnsembleKind& kind,
                                                   std::span<const double> x) {
  require_simple(x, "surrogate gradient");
  const double n = kind.rows();
  const std::size_t len = x.size();
  std::vector<double> out(len);
  for (std::size_t i = 0; i < len; ++i) {
    const double a = x[i];
    double s = 0;
    switch (kind.family()) {
      case Family::RealSymmetric:
        for (std::size_t j = 0; j < len; ++j)
          if (j != i) s += 1.0 / (a - x[j]);
        out[i] = s - n * a / 2.0;
        break;
      case Family::ImaginaryAntisymmetric:
        if (!(a > 0)) throw SingularInputError("surrogate gradient: coordinate at the zero pole");
        for (std::size_t j = 0; j < len; ++j)
          if (j != i) s += 4.0 * a / (a * a - x[j] * x[j]);
        out[i] = s - n * a + (odd_antisymmetric(kind) ? 2.0 / a : 0.0);
        break;
      case Family::Rectangular: {
        const double m = kind.cols();
        for (std::size_t j = 0; j < len; ++j)
          if (j != i) s += 1.0 / (a - x[j]);
        const double coef = (n - m - 1.0) / 2.0;
        if (coef != 0.0 && a == 0.0) throw SingularInputError("surrogate gradient: zero eigenvalue");
        out[i] = (coef != 0.0 ? coef / a : 0.0) + s - n / 2.0;
        break;
      }
    }
  }
  return out;
}

double detailed_balance_residual(const EnsembleKind& kind, std::span<const double> x) {
  const auto m1 = drift(kind, x);
  const auto m2 = diffusion(kind, x);
  const auto dm2 = diffusion_gradient(kind, x);
  const auto g = surrogate_log_density_gradient(kind, x);
  double worst = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    worst = std::max(worst, std::fabs(m1[i] - (0.5 * m2[i] * g[i] + 0.5 * dm2[i])));
  }
  return worst;
}

double trace_target(const EnsembleKind& kind) {
  switch (kind.family()) {
    case Family::RealSymmetric:
      return kind.frobenius_norm2();
    case Family::ImaginaryAntisymmetric:
      // Pairs counted once: half of sum over the full spectrum.
      return static_cast<double>(kind.dimension()) / kind.rows();
    case Family::Rectangular:
      return kind.cols();
  }
  return 0;
}

double trace_functional(const EnsembleKind& kind, std::span<const double> x) {
  double s = 0;
  for (double v : x) s += kind.family() == Family::Rectangular ? v : v * v;
  return s;
}

double log_jpdf(const EnsembleKind& kind, std::span<const double> x, bool check_trace) {
  if (check_trace) {
    const double target = trace_target(kind);
    const double got = trace_functional(kind, x);
    if (std::fabs(got - target) > 1e-8 * target) {
      throw DomainError("log_jpdf: spectrum is off the fixed-trace surface (" + format_double(got) +
                        " vs " + format_double(target) + ")");
    }
  }
  const double ninf = -std::numeric_limits<double>::infinity();
  if (has_coincident(x)) return ninf;
  const std::size_t len = x.size();
  double s = 0;
  switch (kind.family()) {
    case Family::RealSymmetric:
      for (std::size_t i = 0; i < len; ++i)
        for (std::size_t j = i + 1; j < len; ++j) s += std::log(std::fabs(x[j] - x[i]));
      break;
    case Family::ImaginaryAntisymmetric:
      for (std::size_t i = 0; i < len; ++i) {
        if (x[i] <= 0) throw DomainError("log_jpdf: antisymmetric coordinates must be positive");
        if (odd_antisymmetric(kind)) s += 2.0 * std::log(x[i]);
        for (std::size_t j = i + 1; j < len; ++j) {
          const double d = std::fabs(x[j] * x[j] - x[i] * x[i]);
          if (d == 0) return ninf;
          s += 2.0 * std::log(d);
        }
      }
      break;
    case Family::Rectangular: {
      const double e = (kind.rows() - kind.cols() + 1) / 2.0 - 1.0;
      for (std::size_t i = 0; i < len; ++i) {
        if (x[i] < 0) throw DomainError("log_jpdf: Wishart eigenvalues must be nonnegative");
        if (e != 0.0) s += e * std::log(x[i]);
        for (std::size_t j = i + 1; j < len; ++j) s += std::log(std::fabs(x[j] - x[i]));
      }
      break;
    }
  }
  return s;
}

double semicircle_density(double x) {
  if (x <= -2.0 || x >= 2.0) return 0.0;
  return std::sqrt(4.0 - x * x) / (2.0 * std::numbers::pi);
}

double semicircle_cdf(double x) {
  if (x <= -2.0) return 0.0;
  if (x >= 2.0) return 1.0;
  return 0.5 + x * std::sqrt(4.0 - x * x) / (4.0 * std::numbers::pi) +
         std::asin(x / 2.0) / std::numbers::pi;
}

namespace {
void check_ratio(double c) {
  if (!(c > 0.0 && c <= 1.0)) throw ConfigError("Marchenko-Pastur ratio must lie in (0, 1]");
}
}  // namespace

std::pair<double, double> marchenko_pastur_support(double c) {
  check_ratio(c);
  const double r = std::sqrt(c);
  return {(1.0 - r) * (1.0 - r), (1.0 + r) * (1.0 + r)};
}

double marchenko_pastur_density(double c, double x) {
  const auto [a, b] = marchenko_pastur_support(c);
  if (x <= a || x >= b || x <= 0.0) return 0.0;
  return std::sqrt((b - x) * (x - a)) / (2.0 * std::numbers::pi * c * x);
}

double marchenko_pastur_cdf(double c, double x) {
  const auto [a, b] = marchenko_pastur_support(c);
  if (x <= a) return 0.0;
  if (x >= b) return 1.0;
  thread_local boost::math::quadrature::tanh_sinh<double> integrator;
  return integrator.integrate([c](double t) { return marchenko_pastur_density(c, t); }, a, x);
}

std::pair<double, double> limiting_support(const EnsembleKind& kind) {
  if (kind.family() == Family::Rectangular) {
    return marchenko_pastur_support(static_cast<double>(kind.cols()) / kind.rows());
  }
  return {-2.0, 2.0};
}

double limiting_density(const EnsembleKind& kind, double x) {
  if (kind.family() == Family::Rectangular) {
    return marchenko_pastur_density(static_cast<double>(kind.cols()) / kind.rows(), x);
  }
  return semicircle_density(x);
}

double limiting_cdf(const EnsembleKind& kind, double x) {
  if (kind.family() == Family::Rectangular) {
    return marchenko_pastur_cdf(static_cast<double>(kind.cols()) / kind.rows(), x);
  }
  return semicircle_cdf(x);
}

double limiting_mass(const EnsembleKind& kind) {
  const auto [a, b] = limiting_support(kind);
  thread_local boost::math::quadrature::tanh_sinh<double> integrator;
  return integrator.integrate([&](double t) { return limiting_density(kind, t); }, a, b);
}

std::pair<double, double> ou_coefficients() { return {-2.0, 0.5}; }

void write_density_csv(std::ostream& os, const EnsembleKind& kind, int points) {
  if (points < 2) throw ConfigError("density grid needs at least two points");
  const auto [a, b] = limiting_support(kind);
  os << "lambda,rho\n";
  for (int i = 0; i < points; ++i) {
    const double x = a + (b - a) * i / (points - 1);
    os << format_double(x) << ',' << format_double(limiting_density(kind, x)) << '\n';
  }
}

}  // namespace bwalk::theory
