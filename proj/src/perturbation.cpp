#include "bwalk/perturbation.hpp"

#include <cmath>

#include "bwalk/errors.hpp"

namespace bwalk {

Coupling coupling(const EigenBasis& basis, const Eigen::MatrixXd& op, Family family) {
  if (op.rows() != basis.real.rows() || op.cols() != basis.real.rows()) {
    throw ConfigError("coupling: operator shape does not match the basis");
  }
  Coupling g;
  if (family == Family::ImaginaryAntisymmetric) {
    // V^dagger (i op) V with V = Vr + i Vi.
    const Eigen::MatrixXd& vr = basis.real;
    const Eigen::MatrixXd& vi = basis.imag;
    const Eigen::MatrixXd ovr = op * vr;
    const Eigen::MatrixXd ovi = op * vi;
    g.re = vi.transpose() * ovr - vr.transpose() * ovi;
    g.im = vr.transpose() * ovr + vi.transpose() * ovi;
  } else {
    g.re = basis.real.transpose() * op * basis.real;
  }
  return g;
}

std::vector<double> first_order(const Coupling& g) {
  std::vector<double> out(g.re.rows());
  for (Eigen::Index i = 0; i < g.re.rows(); ++i) out[i] = g.re(i, i);
  return out;
}

namespace {

void require_simple(const Spectrum& s) {
  if (!is_simple(s.values, 1e-9)) {
    throw NumericalError("near-degenerate spectrum (min gap " + std::to_string(min_gap(s.values)) +
                         "); degenerate perturbation theory is not supported");
  }
}

double abs2(const Coupling& g, Eigen::Index a, Eigen::Index b) {
  double v = g.re(a, b) * g.re(a, b);
  if (g.im.size()) v += g.im(a, b) * g.im(a, b);
  return v;
}

}  // namespace

std::vector<double> second_order(const Spectrum& s, const Coupling& g) {
  require_simple(s);
  const Eigen::Index n = g.re.rows();
  std::vector<double> out(n, 0.0);
  for (Eigen::Index nu = 0; nu < n; ++nu) {
    double acc = 0;
    for (Eigen::Index mu = 0; mu < n; ++mu) {
      if (mu != nu) acc += abs2(g, nu, mu) / (s.values[nu] - s.values[mu]);
    }
    out[nu] = acc;
  }
  return out;
}

std::vector<double> third_order(const Spectrum& s, const Coupling& g) {
  require_simple(s);
  const Eigen::Index n = g.re.rows();
  const bool cplx = g.im.size() != 0;
  std::vector<double> out(n, 0.0);
  Eigen::VectorXd ur(n), ui(n);
  for (Eigen::Index nu = 0; nu < n; ++nu) {
    // u_mu = G_{nu mu} / (l_nu - l_mu); the double sum is u^T G conj(u).
    double tail = 0;
    for (Eigen::Index mu = 0; mu < n; ++mu) {
      if (mu == nu) {
        ur[mu] = ui[mu] = 0;
        continue;
      }
      const double den = s.values[nu] - s.values[mu];
      ur[mu] = g.re(nu, mu) / den;
      ui[mu] = cplx ? g.im(nu, mu) / den : 0.0;
      tail += abs2(g, nu, mu) / (den * den);
    }
    // Re[(ur + i ui)^T (Gr + i Gi) (ur - i ui)]
    double dbl = ur.dot(g.re * ur) + ui.dot(g.re * ui);
    if (cplx) dbl += 2.0 * ur.dot(g.im * ui);
    out[nu] = dbl - g.re(nu, nu) * tail;
  }
  return out;
}

Eigen::MatrixXd wishart_increment(const Eigen::MatrixXd& b, const Eigen::MatrixXd& db) {
  if (b.rows() != db.rows() || b.cols() != db.cols()) {
    throw ConfigError("wishart_increment: shape mismatch");
  }
  return b.transpose() * db + db.transpose() * b + db.transpose() * db;
}

Eigen::MatrixXd expansion_operator(const ScaledMatrix& m, const ScaledMatrix& delta) {
  if (!(m.kind == delta.kind)) throw ConfigError("perturbation: ensemble mismatch");
  if (m.kind.family() == Family::Rectangular) return wishart_increment(m.entries, delta.entries);
  return delta.entries;
}

std::vector<double> exact_shift(const ScaledMatrix& m, const ScaledMatrix& delta) {
  if (!(m.kind == delta.kind)) throw ConfigError("exact_shift: ensemble mismatch");
  const ScaledMatrix moved{m.kind, m.entries + delta.entries};
  const auto a = eigenvalues(m).values;
  const auto b = eigenvalues(moved).values;
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = b[i] - a[i];
  return out;
}

PerturbationReport perturbation_report(const ScaledMatrix& m, const Decomposition& d,
                                       const ScaledMatrix& delta) {
  const auto g = coupling(d.basis, expansion_operator(m, delta), m.kind.family());
  PerturbationReport r;
  r.first = first_order(g);
  r.second = second_order(d.spectrum, g);
  r.third = third_order(d.spectrum, g);
  const ScaledMatrix moved{m.kind, m.entries + delta.entries};
  const auto after = eigenvalues(moved).values;
  r.exact.resize(after.size());
  double s[3] = {0, 0, 0};
  for (std::size_t i = 0; i < after.size(); ++i) {
    r.exact[i] = after[i] - d.spectrum.values[i];
    const double e1 = r.exact[i] - r.first[i];
    const double e2 = e1 - r.second[i];
    const double e3 = e2 - r.third[i];
    s[0] += e1 * e1;
    s[1] += e2 * e2;
    s[2] += e3 * e3;
  }
  for (int k = 0; k < 3; ++k) r.residual[k] = std::sqrt(s[k]);
  return r;
}

nlohmann::json to_json(const PerturbationReport& r, const EnsembleKind& kind,
                       std::size_t flip_index) {
  return {{"kind", family_name(kind.family())}, {"N", kind.rows()},   {"M", kind.cols()},
          {"flip_index", flip_index},           {"residual_1", r.residual[0]},
          {"residual_2", r.residual[1]},        {"residual_3", r.residual[2]}};
}

}  // namespace bwalk
