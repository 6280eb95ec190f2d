#include "doctest.h"

#include <cmath>
#include <complex>

#include <Eigen/Eigenvalues>

#include "cqad/analytic.hpp"
#include "cqad/density.hpp"
#include "cqad/error.hpp"
#include "cqad/operators.hpp"
#include "cqad/reference_device.hpp"

using namespace cqad;

namespace {

SystemParams single_mode(double g, double f = 4624.3) {
  SystemParams p;
  p.qubit = {f, 171.0, 0.0};
  p.modes = {{1, f, 0.78, g}};
  return p;
}

// Basis index of |q, n1, n2, ...> with the qubit first and the last mode fastest.
Eigen::Index index_of(const HilbertSpec& s, std::initializer_list<int> levels) {
  Eigen::Index idx = 0;
  std::size_t slot = 0;
  for (int l : levels) idx = idx * s.slot_dim(slot++) + l;
  return idx;
}

double max_singular(const ComplexMatrix& m) {
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  return svd.singularValues()(0);
}

}  // namespace

TEST_SUITE("operators") {

TEST_CASE("destroy") {
  const auto a2 = destroy(2);
  CHECK(a2(0, 1) == Complex(1.0));
  CHECK(a2(1, 0) == Complex(0.0));
  const auto a3 = destroy(3);
  CHECK(a3(0, 1).real() == doctest::Approx(1.0));
  CHECK(a3(1, 2).real() == doctest::Approx(std::sqrt(2.0)));
  const auto n = destroy(4).adjoint() * destroy(4);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) CHECK(std::abs(n(i, j) - Complex(i == j ? i : 0.0)) < 1e-15);
  }
  CHECK_THROWS_AS(destroy(1), InvalidArgument);
}

TEST_CASE("embed") {
  HilbertSpec s;
  s.mode_levels = {3, 2};
  CHECK(s.total_dim() == 12);
  const auto id = embed(OperatorMatrix::identity(3), 1, s);
  CHECK((id.entries() - ComplexMatrix::Identity(12, 12)).cwiseAbs().maxCoeff() == 0.0);

  const auto b = embed(destroy(2), 0, s);
  const auto a = embed(destroy(3), 1, s);
  CHECK(((a * b) - (b * a)).entries().cwiseAbs().maxCoeff() < 1e-15);

  const auto n = destroy(3).adjoint() * destroy(3);
  const auto en = embed(n, 1, s);
  CHECK(en.entries().trace().real() == doctest::Approx(3.0 * 2 * 2));

  // Norm preservation.
  CHECK(max_singular(a.entries()) == doctest::Approx(max_singular(destroy(3).entries())));
  CHECK(max_singular(embed(n, 1, s).entries()) == doctest::Approx(2.0));

  // a acting on |g, 1, 0> gives |g, 0, 0>.
  CHECK(a(index_of(s, {0, 0, 0}), index_of(s, {0, 1, 0})).real() == doctest::Approx(1.0));

  CHECK_THROWS_AS(embed(destroy(2), 3, s), InvalidArgument);
  CHECK_THROWS_AS(embed(destroy(2), 1, s), InvalidArgument);
}

TEST_CASE("full Hamiltonian: coupling element and single-excitation split") {
  const double g = 1.67;
  const SystemParams p = single_mode(g);
  HilbertSpec s;
  s.mode_levels = {3};
  const auto h = hamiltonian_full(p, s, p.qubit.f01);
  CHECK(h.is_hermitian());
  const Eigen::Index e0 = index_of(s, {1, 0});
  const Eigen::Index g1 = index_of(s, {0, 1});
  CHECK(std::abs(h(e0, g1)) == doctest::Approx(kTwoPi * g));
  // Resonant frame: the single-excitation block is [[0, G], [G, 0]] with
  // eigenvalues -G, +G, so the split is 2G.
  CHECK(std::abs(h(e0, e0)) < 1e-12);
  CHECK(std::abs(h(g1, g1)) < 1e-12);
  Eigen::Matrix2cd block;
  block << h(e0, e0), h(e0, g1), h(g1, e0), h(g1, g1);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(block);
  CHECK(es.eigenvalues()(1) - es.eigenvalues()(0) == doctest::Approx(2.0 * kTwoPi * g));
}

TEST_CASE("full Hamiltonian with a three-level qubit carries the anharmonic term") {
  const SystemParams p = single_mode(0.0);
  HilbertSpec s;
  s.qubit_levels = 3;
  s.mode_levels = {2};
  const auto h = hamiltonian_full(p, s, p.qubit.f01);
  // |f, 0>: 2 (f01 - frame) - ec in angular units.
  const Eigen::Index f0 = index_of(s, {2, 0});
  CHECK(h(f0, f0).real() == doctest::Approx(-kTwoPi * 171.0));
}

TEST_CASE("dispersive Hamiltonian") {
  const SystemParams p = reference::seven_mode_system(reference::kCouplingMaxMHz);
  const HilbertSpec s = HilbertSpec::uniform(2, 7, 2);
  const auto h = hamiltonian_dispersive(p, s, 6, p.qubit.f01);
  CHECK(h.is_hermitian());

  // chi for mode 5 against direct arithmetic; the sigma_z n_5 term splits
  // |e, n5 = 1> from |e, 0> by 2pi (f5 - frame + chi) and |g, n5 = 1> by 2pi (f5 - frame - chi).
  const double delta = p.qubit.f01 - p.mode(5).f;
  const double chi_direct = -(0.82 * 0.82 * 171.0) / (delta * (delta - 171.0));
  CHECK(chi_dispersive(0.82, delta, 171.0) == doctest::Approx(chi_direct).epsilon(1e-12));
  const Eigen::Index e_n5 = index_of(s, {1, 0, 0, 0, 0, 1, 0, 0});
  const Eigen::Index e_0 = index_of(s, {1, 0, 0, 0, 0, 0, 0, 0});
  const Eigen::Index g_n5 = index_of(s, {0, 0, 0, 0, 0, 1, 0, 0});
  const Eigen::Index g_0 = index_of(s, {0, 0, 0, 0, 0, 0, 0, 0});
  const double detune = p.mode(5).f - p.qubit.f01;
  CHECK((h(e_n5, e_n5) - h(e_0, e_0)).real() == doctest::Approx(kTwoPi * (detune + chi_direct)));
  CHECK((h(g_n5, g_n5) - h(g_0, g_0)).real() == doctest::Approx(kTwoPi * (detune - chi_direct)));

  // Exchange term couples |e, 0> and |g, 1_6> only.
  const Eigen::Index g_16 = index_of(s, {0, 0, 0, 0, 0, 0, 1, 0});
  CHECK(std::abs(h(e_0, g_16)) == doctest::Approx(kTwoPi * 1.67));
  const Eigen::Index e_16 = index_of(s, {1, 0, 0, 0, 0, 0, 1, 0});
  CHECK(std::abs(h(g_0, e_16)) == 0.0);

  CHECK_THROWS_AS(hamiltonian_dispersive(p, s, 9), InvalidArgument);
  HilbertSpec three = s;
  three.qubit_levels = 3;
  CHECK_THROWS_AS(hamiltonian_dispersive(p, three, 6), InvalidArgument);
}

TEST_CASE("full and dispersive agree for a two-level qubit once chi is switched off") {
  // With only the resonant mode coupled, every chi vanishes; with ec = 0 the
  // anharmonic term is absent from the full Hamiltonian too. The two then
  // differ by a constant (sigma_z/2 versus b^dag b).
  SystemParams p = reference::seven_mode_system(reference::kCouplingMaxMHz);
  for (auto& m : p.modes) {
    if (m.index != 6) m.g = 0.0;
  }
  p.qubit.f01 = 4600.0;
  HilbertSpec s = HilbertSpec::uniform(2, 7, 2);
  const double frame = 4624.3;
  const auto hf = hamiltonian_full(p, s, frame);
  const auto hd = hamiltonian_dispersive(p, s, 6, frame);
  const ComplexMatrix diff = hf.entries() - hd.entries();
  const Complex offset = diff(0, 0);
  CHECK(std::abs(offset - Complex(0.5 * kTwoPi * (4600.0 - frame))) < 1e-9);
  CHECK((diff - offset * ComplexMatrix::Identity(diff.rows(), diff.cols())).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("collapse operators") {
  SystemParams p = single_mode(1.0);
  HilbertSpec s;
  s.mode_levels = {3};
  CHECK(collapse_ops(p, s, true).size() == 1);  // gamma = 0
  p.qubit.gamma = 0.2;
  const auto ops = collapse_ops(p, s, true);
  REQUIRE(ops.size() == 2);
  const Eigen::Index e0 = index_of(s, {1, 0});
  const Eigen::Index g0 = index_of(s, {0, 0});
  CHECK(ops[0](g0, e0).real() == doctest::Approx(std::sqrt(kTwoPi * 0.2)));
}

TEST_CASE("initial states") {
  HilbertSpec s;
  s.mode_levels = {2, 3};
  const DensityOperator e = initial_state(s, true);
  const DensityOperator g = initial_state(s, false);
  CHECK(e.trace().real() == doctest::Approx(1.0));
  CHECK(e.purity() == doctest::Approx(1.0));
  CHECK(g.entries()(0, 0).real() == doctest::Approx(1.0));
  // sigma_z = |e><e| - |g><g| reads +1 on the excited state.
  const auto pe = qubit_excited_projector(s);
  const ComplexMatrix sz = 2.0 * pe.entries() - ComplexMatrix::Identity(s.total_dim(), s.total_dim());
  CHECK((e.entries() * sz).trace().real() == doctest::Approx(1.0));
  CHECK((g.entries() * sz).trace().real() == doctest::Approx(-1.0));
}

TEST_CASE("every Hamiltonian built is Hermitian") {
  const SystemParams p = reference::seven_mode_system(reference::kCouplingWeakMHz);
  const HilbertSpec s = HilbertSpec::uniform(2, 7, 2);
  for (int m = 1; m <= 7; ++m) {
    const auto h = hamiltonian_dispersive(p, s, m);
    CHECK(h.hermiticity_residual(false) <= 1e-12 * h.entries().cwiseAbs().maxCoeff());
  }
  const auto hf = hamiltonian_full(p, s, 4600.0);
  CHECK(hf.hermiticity_residual(false) <= 1e-12 * hf.entries().cwiseAbs().maxCoeff());
}

}
