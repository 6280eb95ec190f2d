#pragma once

// Operators on the truncated composite Hilbert space.
//
// Layout: qubit factor first, then the modes in SystemParams order, so the
// basis index of |q, n_1, ..., n_M> is row-major with the last mode fastest.
// Hamiltonians are H/hbar in rad/us; collapse operators carry sqrt(rad/us).
//
// Qubit Pauli convention: sigma_z = |e><e| - |g><g|, sigma_- = |g><e|.

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "cqad/model.hpp"

namespace cqad {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;

class DensityOperator;

class OperatorMatrix {
 public:
  OperatorMatrix() = default;
  explicit OperatorMatrix(ComplexMatrix entries);

  static OperatorMatrix zero(Eigen::Index dim);
  static OperatorMatrix identity(Eigen::Index dim);

  Eigen::Index dim() const { return entries_.rows(); }
  const ComplexMatrix& entries() const { return entries_; }
  Complex operator()(Eigen::Index r, Eigen::Index c) const { return entries_(r, c); }

  OperatorMatrix adjoint() const { return OperatorMatrix(entries_.adjoint()); }

  /// max |H - H^dag| entry; relative to max |H| entry when `relative`.
  double hermiticity_residual(bool relative = true) const;
  bool is_hermitian(double rel_tol = 1e-12) const;

  friend OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b);
  friend OperatorMatrix operator+(const OperatorMatrix& a, const OperatorMatrix& b);
  friend OperatorMatrix operator-(const OperatorMatrix& a, const OperatorMatrix& b);
  friend OperatorMatrix operator*(Complex s, const OperatorMatrix& a);
  OperatorMatrix& operator+=(const OperatorMatrix& o);

 private:
  ComplexMatrix entries_;
};

/// Truncated lowering operator: entry (n-1, n) = sqrt(n).
OperatorMatrix destroy(int levels);

/// |level><level| on a single factor.
OperatorMatrix projector(int levels, int level);

/// Kronecker product a (x) b.
OperatorMatrix kron(const OperatorMatrix& a, const OperatorMatrix& b);

/// Places `op` on tensor slot `slot` (0 = qubit, k = k-th mode) with the
/// identity on every other factor.
OperatorMatrix embed(const OperatorMatrix& op, std::size_t slot, const HilbertSpec& spec);

/// Full multimode transmon Hamiltonian in a frame rotating at `frame_freq`
/// (MHz):
///   2pi(f_q - f_fr) b^dag b - pi E_c b^dag b^dag b b
///   + sum_m [2pi(f_m - f_fr) a_m^dag a_m + 2pi g_m (b a_m^dag + b^dag a_m)]
OperatorMatrix hamiltonian_full(const SystemParams& params, const HilbertSpec& spec,
                                double frame_freq);

/// Dispersive reduction around one resonant mode: Jaynes-Cummings coupling
/// to that mode, state-dependent shifts chi_n sigma_z a_n^dag a_n for the
/// others (chi_n from chi_dispersive with Delta_n = f_q - f_n). Rotating
/// frame subtracts `frame_freq` times the total excitation number; by default
/// the frame is the resonant mode frequency. Requires a two-level qubit.
OperatorMatrix hamiltonian_dispersive(const SystemParams& params, const HilbertSpec& spec,
                                      int resonant_index);
OperatorMatrix hamiltonian_dispersive(const SystemParams& params, const HilbertSpec& spec,
                                      int resonant_index, double frame_freq);

/// One collapse operator per dissipation channel, qubit first (omitted when
/// gamma == 0), then sqrt(2pi kappa_m) a_m per mode. With `two_level` the
/// qubit channel uses sigma_- (requires qubit_levels == 2), otherwise b.
std::vector<OperatorMatrix> collapse_ops(const SystemParams& params, const HilbertSpec& spec,
                                         bool two_level);

/// |e,0,...,0> or |g,0,...,0> as a density operator.
DensityOperator initial_state(const HilbertSpec& spec, bool qubit_excited);

/// Qubit excited-state projector |e><e| (x) 1.
OperatorMatrix qubit_excited_projector(const HilbertSpec& spec);

/// Total excitation number b^dag b + sum_m a_m^dag a_m.
OperatorMatrix excitation_number(const HilbertSpec& spec);

}  // namespace cqad
