#include "doctest.h"

#include "cqad/density.hpp"
#include "cqad/error.hpp"

using namespace cqad;

TEST_SUITE("density") {

TEST_CASE("pure state invariants") {
  Eigen::VectorXcd psi(3);
  psi << Complex(1, 1), 0.0, Complex(0, 2);
  const auto rho = DensityOperator::pure(psi);
  CHECK(rho.trace().real() == doctest::Approx(1.0));
  CHECK(rho.purity() == doctest::Approx(1.0));
  CHECK(rho.min_eigenvalue() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK_NOTHROW(rho.check());
  CHECK_THROWS_AS(DensityOperator::pure(Eigen::VectorXcd::Zero(2)), InvalidArgument);
}

TEST_CASE("mixed state purity and eigenvalues") {
  ComplexMatrix m = ComplexMatrix::Zero(4, 4);
  m(0, 0) = 0.5;
  m(2, 2) = 0.5;
  const DensityOperator rho(m);
  CHECK(rho.purity() == doctest::Approx(0.5));
  CHECK(rho.min_eigenvalue() == doctest::Approx(0.0));
  CHECK_NOTHROW(rho.check());
}

TEST_CASE("each invariant violation is reported") {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = 0.7;
  m(1, 1) = 0.2;
  CHECK_THROWS_WITH_AS(DensityOperator(m).check(), doctest::Contains("trace"), NumericalError);

  m(1, 1) = 0.3;
  m(0, 1) = 1e-6;
  CHECK_THROWS_WITH_AS(DensityOperator(m).check(), doctest::Contains("Hermiticity"), NumericalError);

  m(0, 1) = 0.0;
  m(0, 0) = 1.1;
  m(1, 1) = -0.1;
  CHECK_THROWS_WITH_AS(DensityOperator(m).check(), doctest::Contains("not positive"), NumericalError);
  CHECK(DensityOperator(m).min_eigenvalue() == doctest::Approx(-0.1));
}

TEST_CASE("report merge keeps the worst values") {
  InvariantReport a{1e-12, 0.0, 0.3};
  const InvariantReport b{0.0, 1e-14, -1e-15};
  a.merge(b);
  CHECK(a.trace_drift == 1e-12);
  CHECK(a.hermiticity_residual == 1e-14);
  CHECK(a.min_eigenvalue == -1e-15);
}

TEST_CASE("non-square matrix is rejected") {
  CHECK_THROWS_AS(DensityOperator(ComplexMatrix::Zero(2, 3)), InvalidArgument);
}

}
