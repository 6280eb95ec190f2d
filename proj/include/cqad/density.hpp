#pragma once

#include <Eigen/Dense>

#include "cqad/operators.hpp"

namespace cqad {

struct InvariantTolerances {
  double trace = 1e-8;
  double hermiticity = 1e-10;
  double positivity = 1e-8;  ///< smallest eigenvalue must exceed -positivity
};

struct InvariantReport {
  double trace_drift = 0.0;           ///< |Tr rho - 1|
  double hermiticity_residual = 0.0;  ///< max |rho - rho^dag| entry
  double min_eigenvalue = 1.0;

  /// Element-wise worst case of two reports.
  void merge(const InvariantReport& other);
};

class DensityOperator {
 public:
  DensityOperator() = default;
  explicit DensityOperator(ComplexMatrix rho);

  static DensityOperator pure(const Eigen::VectorXcd& psi);

  Eigen::Index dim() const { return rho_.rows(); }
  const ComplexMatrix& entries() const { return rho_; }
  Complex operator()(Eigen::Index r, Eigen::Index c) const { return rho_(r, c); }

  Complex trace() const { return rho_.trace(); }
  double purity() const;

  /// Smallest eigenvalue. Rows/columns that are identically zero are removed
  /// first; they only contribute exact zero eigenvalues.
  double min_eigenvalue() const;

  InvariantReport invariants() const;
  /// Throws NumericalError naming the first violated invariant.
  void check(const InvariantTolerances& tol = {}) const;

 private:
  ComplexMatrix rho_;
};

/// Throws NumericalError naming the first invariant of `report` outside `tol`.
void check_invariants(const InvariantReport& report, const InvariantTolerances& tol = {});

}  // namespace cqad
