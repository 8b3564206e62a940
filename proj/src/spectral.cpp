#include "bwalk/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "bwalk/errors.hpp"
#include "bwalk/io.hpp"

namespace bwalk {

std::vector<double> Spectrum::positive_half() const {
  std::vector<double> out;
  for (double v : values) {
    if (v > 1e-10) out.push_back(v);
  }
  return out;
}

double EigenBasis::orthonormality_residual() const {
  const Eigen::Index n = real.cols();
  Eigen::MatrixXd g = real.transpose() * real;
  if (is_complex()) g += imag.transpose() * imag;
  // Imaginary part of V^dagger V.
  Eigen::MatrixXd gi = Eigen::MatrixXd::Zero(n, n);
  if (is_complex()) gi = real.transpose() * imag - imag.transpose() * real;
  g -= Eigen::MatrixXd::Identity(n, n);
  return std::max(g.cwiseAbs().maxCoeff(), gi.size() ? gi.cwiseAbs().maxCoeff() : 0.0);
}

std::uint64_t matrix_hash(const Eigen::MatrixXd& m) {
  const auto* bytes = reinterpret_cast<const char*>(m.data());
  return fnv1a(std::string_view(bytes, static_cast<std::size_t>(m.size()) * sizeof(double)));
}

namespace {

[[noreturn]] void fail(const char* what, const Eigen::MatrixXd& m) {
  throw NumericalError(std::string(what) + " did not converge (matrix hash " +
                       hex64(matrix_hash(m)) + ")");
}

void finish(Spectrum& s) {
  s.trace2 = 0;
  for (double v : s.values) s.trace2 += s.kind.square() ? v * v : v;
  if (s.kind.family() == Family::ImaginaryAntisymmetric) {
    const int n = static_cast<int>(s.values.size());
    s.pair_index.resize(n);
    for (int i = 0; i < n; ++i) s.pair_index[i] = n - 1 - i;
  }
}

std::vector<double> sup_norms(const EigenBasis& b) {
  std::vector<double> out(b.real.cols());
  for (Eigen::Index j = 0; j < b.real.cols(); ++j) {
    if (b.is_complex()) {
      out[j] = (b.real.col(j).array().square() + b.imag.col(j).array().square()).sqrt().maxCoeff();
    } else {
      out[j] = b.real.col(j).cwiseAbs().maxCoeff();
    }
  }
  return out;
}

// Skew A -> Q T Q^T with T skew tridiagonal (subdiagonal e). With
// D = diag(i^k), D^* (iT) D is the real symmetric tridiagonal S with zero
// diagonal and off-diagonal e, so iA = (Q D) S (Q D)^*.
struct SkewTridiagonal {
  Eigen::VectorXd e;
  Eigen::MatrixXd q;
};

SkewTridiagonal reduce_skew(const Eigen::MatrixXd& a, bool want_q) {
  Eigen::HessenbergDecomposition<Eigen::MatrixXd> hd(a);
  const Eigen::MatrixXd h = hd.matrixH();
  const Eigen::Index n = a.rows();
  SkewTridiagonal r;
  r.e.resize(n - 1);
  for (Eigen::Index k = 0; k + 1 < n; ++k) r.e[k] = 0.5 * (h(k + 1, k) - h(k, k + 1));
  if (want_q) r.q = hd.matrixQ();
  return r;
}

Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solve_tridiagonal(const Eigen::VectorXd& e,
                                                                  bool vectors,
                                                                  const Eigen::MatrixXd& src) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  const Eigen::VectorXd diag = Eigen::VectorXd::Zero(e.size() + 1);
  es.computeFromTridiagonal(diag, e, vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) fail("antisymmetric eigensolver", src);
  return es;
}

Eigen::MatrixXd gram(const ScaledMatrix& m) {
  return m.entries.transpose() * m.entries;
}

}  // namespace

Decomposition spectrum(const ScaledMatrix& m) {
  Decomposition out{Spectrum{m.kind, {}, {}, 0}, EigenBasis{}};
  switch (m.kind.family()) {
    case Family::RealSymmetric:
    case Family::Rectangular: {
      const Eigen::MatrixXd a = m.kind.square() ? m.entries : gram(m);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, Eigen::ComputeEigenvectors);
      if (es.info() != Eigen::Success) fail("symmetric eigensolver", m.entries);
      out.spectrum.values.assign(es.eigenvalues().data(),
                                 es.eigenvalues().data() + es.eigenvalues().size());
      out.basis.real = es.eigenvectors();
      break;
    }
    case Family::ImaginaryAntisymmetric: {
      const auto red = reduce_skew(m.entries, true);
      const auto es = solve_tridiagonal(red.e, true, m.entries);
      const Eigen::Index n = m.entries.rows();
      out.spectrum.values.assign(es.eigenvalues().data(), es.eigenvalues().data() + n);
      // D z: component k picks up i^k.
      Eigen::MatrixXd zr = Eigen::MatrixXd::Zero(n, n);
      Eigen::MatrixXd zi = Eigen::MatrixXd::Zero(n, n);
      const Eigen::MatrixXd& z = es.eigenvectors();
      for (Eigen::Index k = 0; k < n; ++k) {
        switch (k & 3) {
          case 0: zr.row(k) = z.row(k); break;
          case 1: zi.row(k) = z.row(k); break;
          case 2: zr.row(k) = -z.row(k); break;
          default: zi.row(k) = -z.row(k); break;
        }
      }
      out.basis.real = red.q * zr;
      out.basis.imag = red.q * zi;
      break;
    }
  }
  finish(out.spectrum);
  out.basis.sup_norms = sup_norms(out.basis);
  return out;
}

Spectrum eigenvalues(const ScaledMatrix& m) {
  Spectrum s{m.kind, {}, {}, 0};
  if (m.kind.family() == Family::ImaginaryAntisymmetric) {
    const auto red = reduce_skew(m.entries, false);
    const auto es = solve_tridiagonal(red.e, false, m.entries);
    s.values.assign(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  } else {
    const Eigen::MatrixXd a = m.kind.square() ? m.entries : gram(m);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) fail("symmetric eigensolver", m.entries);
    s.values.assign(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  }
  finish(s);
  return s;
}

void check_invariants(const Spectrum& s, double tol) {
  const double expected = s.kind.frobenius_norm2();
  double trace2 = 0;
  for (double v : s.values) trace2 += s.kind.square() ? v * v : v;
  if (std::fabs(trace2 - expected) > tol * expected) {
    throw NumericalError("spectrum violates the fixed-trace constraint: " + format_double(trace2) +
                         " vs " + format_double(expected));
  }
  if (!std::is_sorted(s.values.begin(), s.values.end())) {
    throw NumericalError("spectrum not ascending");
  }
  if (s.kind.family() == Family::ImaginaryAntisymmetric) {
    const std::size_t n = s.values.size();
    for (std::size_t i = 0; i < n; ++i) {
      if (std::fabs(s.values[i] + s.values[n - 1 - i]) > tol) {
        throw NumericalError("antisymmetric spectrum not symmetric under negation");
      }
    }
    const auto zeros = std::count_if(s.values.begin(), s.values.end(),
                                     [&](double v) { return std::fabs(v) <= tol; });
    if (zeros != static_cast<long>(n % 2)) {
      throw NumericalError("antisymmetric spectrum has " + std::to_string(zeros) + " zero modes");
    }
  }
  if (s.kind.family() == Family::Rectangular && !s.values.empty() && s.values.front() < -1e-12) {
    throw NumericalError("W has a negative eigenvalue");
  }
}

double min_gap(std::span<const double> values) {
  double g = INFINITY;
  for (std::size_t i = 1; i < values.size(); ++i) g = std::min(g, values[i] - values[i - 1]);
  return g;
}

bool is_simple(std::span<const double> values, double tol) { return min_gap(values) > tol; }

DelocalizationReport delocalization_report(const EigenBasis& basis, double threshold) {
  DelocalizationReport r;
  const Eigen::Index n = basis.real.rows();
  r.threshold = threshold;
  r.reference = n > 1 ? std::sqrt(std::log(static_cast<double>(n)) / static_cast<double>(n)) : 1.0;
  for (Eigen::Index j = 0; j < basis.real.cols(); ++j) {
    Eigen::ArrayXd mod2 = basis.real.col(j).array().square();
    if (basis.is_complex()) mod2 += basis.imag.col(j).array().square();
    const double sup = std::sqrt(mod2.maxCoeff());
    r.sup_norm.push_back(sup);
    r.participation.push_back(1.0 / mod2.square().sum());
    if (sup > threshold * r.reference) r.flagged.push_back(static_cast<int>(j));
  }
  if (!r.sup_norm.empty()) {
    std::vector<double> s = r.sup_norm;
    std::nth_element(s.begin(), s.begin() + s.size() / 2, s.end());
    r.median_sup_norm = s[s.size() / 2];
  }
  return r;
}

std::pair<int, int> bulk_range(int n, double edge) {
  const int cut = static_cast<int>(std::floor(edge * n));
  return {cut, n - cut};
}

GapReport gap_report(std::span<const double> values) {
  if (values.size() < 2) throw ConfigError("gap_report needs at least two values");
  GapReport r;
  for (std::size_t i = 1; i < values.size(); ++i) r.gaps.push_back(values[i] - values[i - 1]);
  r.min_gap = *std::min_element(r.gaps.begin(), r.gaps.end());
  double sum = 0;
  for (double g : r.gaps) sum += g;
  r.mean_gap = sum / static_cast<double>(r.gaps.size());
  const auto [lo, hi] = bulk_range(static_cast<int>(values.size()));
  if (hi - lo >= 2) {
    r.bulk_mean_gap = (values[hi - 1] - values[lo]) / static_cast<double>(hi - 1 - lo);
  } else {
    r.bulk_mean_gap = r.mean_gap;
  }
  return r;
}

}  // namespace bwalk
