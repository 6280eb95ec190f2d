#pragma once

// Lindblad master-equation integration:
//   d rho/dt = -i [H, rho] + sum_k (L_k rho L_k^dag - 1/2 {L_k^dag L_k, rho})
// with H in rad/us and L_k in sqrt(rad/us).

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "cqad/density.hpp"
#include "cqad/model.hpp"
#include "cqad/operators.hpp"

namespace cqad {

struct EvolveOptions {
  double rel_tol = 1e-8;
  double abs_tol = 1e-10;
  double max_step = 0.0;       ///< us; 0 means unbounded
  bool store_states = true;    ///< keep a copy of rho at every output time
  /// Integrate only on the basis states reachable from the support of rho0
  /// through H and the collapse operators (exact; rho is identically zero
  /// elsewhere). Output states are always full-dimensional.
  bool reduce_to_reachable = true;
  double initial_step = 0.0;   ///< us; 0 selects one automatically
  double min_step = 1e-13;     ///< us; smaller proposals are a step-size underflow
  std::size_t max_steps = 50'000'000;
  InvariantTolerances tolerances;

  void check() const;
};

struct EvolveStats {
  std::size_t accepted_steps = 0;
  std::size_t integrated_dim = 0;  ///< dimension actually integrated (largest across merged runs)
  std::size_t rejected_steps = 0;
  std::size_t rhs_evaluations = 0;
  /// Sum over accepted steps of the largest local error entry; a loose bound
  /// on the accumulated integration error of any density-matrix entry.
  double error_estimate = 0.0;
  /// Worst invariant values seen across all output times.
  InvariantReport hygiene;

  void merge(const EvolveStats& other);
};

struct Trajectory {
  std::vector<double> times;
  std::vector<DensityOperator> states;  ///< one per output time when store_states
  DensityOperator final_state;
  EvolveStats stats;
};

/// Called once per output time, in order, after the invariant check.
using Observer = std::function<void(std::size_t index, double t, const DensityOperator& rho)>;

/// Integrates from rho0 at times[0] = 0 through every requested time
/// (ascending). Throws NumericalError on step-size underflow (with the time
/// reached) or when an output state violates the density-operator invariants.
Trajectory evolve(const OperatorMatrix& hamiltonian, std::span<const OperatorMatrix> collapse,
                  const DensityOperator& rho0, std::span<const double> times,
                  const EvolveOptions& opts = {}, const Observer& observer = {});

/// Tr(rho op) for a Hermitian op; throws on a non-Hermitian op or an
/// imaginary residue above 1e-10.
double expect(const OperatorMatrix& op, const DensityOperator& rho);

/// Default truncation for a resonant run: two-level qubit, three levels on the
/// resonant mode, two on every other mode.
HilbertSpec resonant_spec(const SystemParams& params, int resonant_index);

/// Resonant evolution with one mode: the qubit is moved onto f_m, prepared in
/// |e, 0...0>, and evolved under the dispersive Hamiltonian with collapse
/// channels sqrt(gamma') sigma_- and sqrt(kappa_m) a_m. Returns P_e(t).
TimeSeries simulate_resonant_pe(const SystemParams& params, const HilbertSpec& spec,
                                int resonant_index, std::span<const double> times,
                                const EvolveOptions& opts = {}, EvolveStats* stats = nullptr);

}  // namespace cqad
