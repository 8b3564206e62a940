#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "bwalk/ensemble.hpp"
#include "bwalk/spectral.hpp"

namespace bwalk {

/// Hermitian matrix of elements G_{nu mu} = <nu| op |mu> in an eigenbasis.
/// For the antisymmetric kind the operator on H is i * op, with op the real
/// antisymmetric increment of A.
struct Coupling {
  Eigen::MatrixXd re;
  Eigen::MatrixXd im;  // empty for real kinds
};

Coupling coupling(const EigenBasis& basis, const Eigen::MatrixXd& op, Family family);

/// <nu|op|nu>.
std::vector<double> first_order(const Coupling& g);

/// sum_{mu != nu} |G_{nu mu}|^2 / (l_nu - l_mu). Refuses spectra with a gap
/// below 1e-9 (NumericalError).
std::vector<double> second_order(const Spectrum& s, const Coupling& g);

/// sum_{mu,kappa != nu} G_{nu mu} G_{mu kappa} G_{kappa nu} / ((l_nu - l_mu)(l_nu - l_kappa))
///   - G_{nu nu} sum_{mu != nu} |G_{nu mu}|^2 / (l_nu - l_mu)^2.
std::vector<double> third_order(const Spectrum& s, const Coupling& g);

/// eigenvalues(m + delta) - eigenvalues(m), matched by sorted order. For the
/// rectangular kind delta is the increment of B and the shift is in W.
std::vector<double> exact_shift(const ScaledMatrix& m, const ScaledMatrix& delta);

/// dW = B^T dB + dB^T B + dB^T dB.
Eigen::MatrixXd wishart_increment(const Eigen::MatrixXd& b, const Eigen::MatrixXd& db);

/// The operator whose matrix elements enter the expansion: delta itself for
/// square kinds, the Wishart increment for Rectangular.
Eigen::MatrixXd expansion_operator(const ScaledMatrix& m, const ScaledMatrix& delta);

struct PerturbationReport {
  std::vector<double> first, second, third, exact;
  /// l2 norms of exact - (partial sums through order k), k = 1, 2, 3.
  double residual[3] = {0, 0, 0};
};

PerturbationReport perturbation_report(const ScaledMatrix& m, const Decomposition& d,
                                       const ScaledMatrix& delta);

nlohmann::json to_json(const PerturbationReport& r, const EnsembleKind& kind,
                       std::size_t flip_index);

}  // namespace bwalk
