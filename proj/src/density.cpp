#include "cqad/density.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Eigenvalues>

#include "cqad/error.hpp"

namespace cqad {

void InvariantReport::merge(const InvariantReport& other) {
  trace_drift = std::max(trace_drift, other.trace_drift);
  hermiticity_residual = std::max(hermiticity_residual, other.hermiticity_residual);
  min_eigenvalue = std::min(min_eigenvalue, other.min_eigenvalue);
}

DensityOperator::DensityOperator(ComplexMatrix rho) : rho_(std::move(rho)) {
  if (rho_.rows() != rho_.cols()) throw InvalidArgument("density operator must be square");
}

DensityOperator DensityOperator::pure(const Eigen::VectorXcd& psi) {
  const double norm = psi.norm();
  if (!(norm > 0.0)) throw InvalidArgument("pure state vector has zero norm");
  const Eigen::VectorXcd v = psi / norm;
  return DensityOperator(v * v.adjoint());
}

double DensityOperator::purity() const {
  // Tr(rho^2) = sum |rho_ij|^2 for Hermitian rho.
  return rho_.cwiseAbs2().sum();
}

double DensityOperator::min_eigenvalue() const {
  const Eigen::Index n = dim();
  if (n == 0) return 0.0;
  const Eigen::VectorXd row_mass = rho_.cwiseAbs2().rowwise().sum();
  const Eigen::RowVectorXd col_mass = rho_.cwiseAbs2().colwise().sum();
  std::vector<Eigen::Index> support;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (row_mass(i) > 0.0 || col_mass(i) > 0.0) support.push_back(i);
  }
  if (support.empty()) return 0.0;
  const auto k = static_cast<Eigen::Index>(support.size());
  ComplexMatrix sub(k, k);
  for (Eigen::Index r = 0; r < k; ++r) {
    for (Eigen::Index c = 0; c < k; ++c) sub(r, c) = rho_(support[r], support[c]);
  }
  // Hermitian part; the anti-Hermitian residue is reported separately.
  const ComplexMatrix herm = 0.5 * (sub + sub.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(herm, Eigen::EigenvaluesOnly);
  double lo = es.eigenvalues().minCoeff();
  if (k < n) lo = std::min(lo, 0.0);
  return lo;
}

InvariantReport DensityOperator::invariants() const {
  InvariantReport r;
  r.trace_drift = std::abs(trace() - Complex(1.0));
  r.hermiticity_residual = dim() == 0 ? 0.0 : (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff();
  r.min_eigenvalue = min_eigenvalue();
  return r;
}

void DensityOperator::check(const InvariantTolerances& tol) const { check_invariants(invariants(), tol); }

void check_invariants(const InvariantReport& r, const InvariantTolerances& tol) {
  if (!(r.trace_drift < tol.trace)) {
    throw NumericalError("density operator trace drift " + std::to_string(r.trace_drift) +
                         " exceeds " + std::to_string(tol.trace));
  }
  if (!(r.hermiticity_residual < tol.hermiticity)) {
    throw NumericalError("density operator Hermiticity residual " +
                         std::to_string(r.hermiticity_residual) + " exceeds tolerance");
  }
  if (!(r.min_eigenvalue > -tol.positivity)) {
    throw NumericalError("density operator not positive: smallest eigenvalue " +
                         std::to_string(r.min_eigenvalue));
  }
}

}  // namespace cqad
