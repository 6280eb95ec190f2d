#include "cqad/engine.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <string>

#include <Eigen/Sparse>

#include "cqad/analytic.hpp"
#include "cqad/error.hpp"

namespace cqad {

namespace {

using SparseMatrix = Eigen::SparseMatrix<Complex>;

// Dormand-Prince 5(4) tableau.
constexpr std::array<double, 7> kC = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
constexpr std::array<std::array<double, 6>, 7> kA = {{
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
}};
// Fifth-order weights minus embedded fourth-order weights.
constexpr std::array<double, 7> kE = {71.0 / 57600,      0.0,          -71.0 / 16695, 71.0 / 1920,
                                      -17253.0 / 339200, 22.0 / 525,   -1.0 / 40};

class LindbladRhs {
 public:
  LindbladRhs(SparseMatrix heff, std::vector<SparseMatrix> jumps)
      : heff_(std::move(heff)), jumps_(std::move(jumps)) {
    const Eigen::Index n = heff_.rows();
    work_.resize(n, n);
    work_adj_.resize(n, n);
  }

  // out = M + M^dag with M = -i Heff rho + 1/2 sum L rho L^dag; exact
  // Hermitian symmetry of the result holds entry by entry.
  void operator()(const ComplexMatrix& rho, ComplexMatrix& out) {
    out.noalias() = heff_ * rho;
    out *= Complex(0.0, -1.0);
    for (const auto& l : jumps_) {
      work_.noalias() = l * rho;
      work_adj_ = work_.adjoint();
      work_.noalias() = l * work_adj_;
      out += 0.5 * work_;
    }
    work_ = out.adjoint();
    out += work_;
    ++evaluations;
  }

  std::size_t evaluations = 0;

 private:
  SparseMatrix heff_;
  std::vector<SparseMatrix> jumps_;
  ComplexMatrix work_;
  ComplexMatrix work_adj_;
};

// Basis states reachable from the support of rho0 through the sparsity
// patterns of Heff and the jump operators. The span of that set is invariant
// under the generator, so rho vanishes identically outside it.
std::vector<Eigen::Index> reachable_states(const ComplexMatrix& rho0, const SparseMatrix& heff,
                                           const std::vector<SparseMatrix>& jumps) {
  const Eigen::Index n = rho0.rows();
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  std::vector<Eigen::Index> queue;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (rho0.row(i).cwiseAbs().maxCoeff() > 0.0 || rho0.col(i).cwiseAbs().maxCoeff() > 0.0) {
      seen[static_cast<std::size_t>(i)] = 1;
      queue.push_back(i);
    }
  }
  auto visit = [&](const SparseMatrix& m, Eigen::Index col) {
    for (SparseMatrix::InnerIterator it(m, col); it; ++it) {
      if (it.value() == Complex(0.0)) continue;
      auto& flag = seen[static_cast<std::size_t>(it.row())];
      if (!flag) {
        flag = 1;
        queue.push_back(it.row());
      }
    }
  };
  for (std::size_t q = 0; q < queue.size(); ++q) {
    const Eigen::Index j = queue[q];
    visit(heff, j);
    for (const auto& l : jumps) visit(l, j);
  }
  std::sort(queue.begin(), queue.end());
  return queue;
}

SparseMatrix restrict_to(const SparseMatrix& m, const std::vector<Eigen::Index>& keep) {
  std::vector<Eigen::Index> pos(static_cast<std::size_t>(m.rows()), -1);
  for (std::size_t k = 0; k < keep.size(); ++k) pos[static_cast<std::size_t>(keep[k])] = static_cast<Eigen::Index>(k);
  std::vector<Eigen::Triplet<Complex>> trips;
  for (Eigen::Index c = 0; c < m.outerSize(); ++c) {
    const Eigen::Index pc = pos[static_cast<std::size_t>(c)];
    if (pc < 0) continue;
    for (SparseMatrix::InnerIterator it(m, c); it; ++it) {
      const Eigen::Index pr = pos[static_cast<std::size_t>(it.row())];
      if (pr >= 0) trips.emplace_back(pr, pc, it.value());
    }
  }
  const auto k = static_cast<Eigen::Index>(keep.size());
  SparseMatrix out(k, k);
  out.setFromTriplets(trips.begin(), trips.end());
  return out;
}

double scaled_max(const ComplexMatrix& err, const ComplexMatrix& y0, const ComplexMatrix& y1,
                  double atol, double rtol) {
  const auto scale = atol + rtol * y0.cwiseAbs().cwiseMax(y1.cwiseAbs()).array();
  return (err.cwiseAbs().array() / scale).maxCoeff();
}

std::string time_str(double t) {
  std::ostringstream os;
  os.precision(10);
  os << t;
  return os.str();
}

}  // namespace

void EvolveOptions::check() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw InvalidArgument("evolve: tolerances must be > 0");
  if (max_step < 0.0) throw InvalidArgument("evolve: max_step must be >= 0");
  if (!(min_step > 0.0)) throw InvalidArgument("evolve: min_step must be > 0");
}

void EvolveStats::merge(const EvolveStats& other) {
  accepted_steps += other.accepted_steps;
  integrated_dim = std::max(integrated_dim, other.integrated_dim);
  rejected_steps += other.rejected_steps;
  rhs_evaluations += other.rhs_evaluations;
  error_estimate = std::max(error_estimate, other.error_estimate);
  hygiene.merge(other.hygiene);
}

Trajectory evolve(const OperatorMatrix& hamiltonian, std::span<const OperatorMatrix> collapse,
                  const DensityOperator& rho0, std::span<const double> times,
                  const EvolveOptions& opts, const Observer& observer) {
  opts.check();
  const Eigen::Index n = hamiltonian.dim();
  if (rho0.dim() != n) throw InvalidArgument("evolve: rho0 dimension does not match H");
  for (std::size_t k = 0; k < collapse.size(); ++k) {
    if (collapse[k].dim() != n) {
      throw InvalidArgument("evolve: collapse operator " + std::to_string(k) + " dimension mismatch");
    }
  }
  if (!hamiltonian.is_hermitian()) throw InvalidArgument("evolve: Hamiltonian is not Hermitian");
  if (times.empty()) throw InvalidArgument("evolve: no output times");
  if (times.front() != 0.0) throw InvalidArgument("evolve: times must start at 0");
  for (std::size_t k = 1; k < times.size(); ++k) {
    if (!(times[k] > times[k - 1])) throw InvalidArgument("evolve: times must be strictly ascending");
  }

  Trajectory traj;
  traj.times.assign(times.begin(), times.end());
  if (opts.store_states) traj.states.reserve(times.size());

  auto emit_full = [&](std::size_t index, const ComplexMatrix& y_full) {
    DensityOperator rho(y_full);
    const InvariantReport rep = rho.invariants();
    traj.stats.hygiene.merge(rep);
    try {
      check_invariants(rep, opts.tolerances);
    } catch (const NumericalError& e) {
      throw NumericalError(std::string("evolve: at t = ") + time_str(times[index]) + " us: " + e.what());
    }
    if (observer) observer(index, times[index], rho);
    if (opts.store_states) traj.states.push_back(rho);
    if (index + 1 == times.size()) traj.final_state = std::move(rho);
  };

  SparseMatrix heff = hamiltonian.entries().sparseView();
  std::vector<SparseMatrix> jumps;
  for (const auto& c : collapse) {
    SparseMatrix l = c.entries().sparseView();
    SparseMatrix ld = l.adjoint();
    SparseMatrix ldl = ld * l;
    heff -= Complex(0.0, 0.5) * ldl;
    jumps.push_back(std::move(l));
  }

  std::vector<Eigen::Index> keep;
  if (opts.reduce_to_reachable) keep = reachable_states(rho0.entries(), heff, jumps);
  const bool reduced = opts.reduce_to_reachable && static_cast<Eigen::Index>(keep.size()) < n;
  ComplexMatrix y;
  if (reduced) {
    heff = restrict_to(heff, keep);
    for (auto& l : jumps) l = restrict_to(l, keep);
    const auto kdim = static_cast<Eigen::Index>(keep.size());
    y.resize(kdim, kdim);
    for (Eigen::Index r = 0; r < kdim; ++r) {
      for (Eigen::Index c = 0; c < kdim; ++c) y(r, c) = rho0.entries()(keep[static_cast<std::size_t>(r)], keep[static_cast<std::size_t>(c)]);
    }
  } else {
    y = rho0.entries();
  }
  const Eigen::Index m = y.rows();
  traj.stats.integrated_dim = static_cast<std::size_t>(m);
  LindbladRhs rhs(std::move(heff), std::move(jumps));

  ComplexMatrix full;
  auto emit = [&](std::size_t index, const ComplexMatrix& y_int) {
    if (!reduced) {
      emit_full(index, y_int);
      return;
    }
    full.setZero(n, n);
    for (Eigen::Index r = 0; r < m; ++r) {
      for (Eigen::Index c = 0; c < m; ++c) full(keep[static_cast<std::size_t>(r)], keep[static_cast<std::size_t>(c)]) = y_int(r, c);
    }
    emit_full(index, full);
  };

  traj.stats.hygiene = rho0.invariants();
  emit(0, y);
  if (times.size() == 1) return traj;

  std::array<ComplexMatrix, 7> k;
  for (auto& km : k) km.resize(m, m);
  ComplexMatrix stage(m, m);
  ComplexMatrix y_new(m, m);
  ComplexMatrix err(m, m);

  rhs(y, k[0]);

  double t = 0.0;
  const double t_end = times.back();
  double h = opts.initial_step;
  if (!(h > 0.0)) {
    // Hairer's first guess: 1% of |y| / |f| in the scaled max norm.
    const auto scale = opts.abs_tol + opts.rel_tol * y.cwiseAbs().array();
    const double d0 = (y.cwiseAbs().array() / scale).maxCoeff();
    const double d1 = (k[0].cwiseAbs().array() / scale).maxCoeff();
    h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 * std::max(1.0, t_end) : 0.01 * d0 / d1;
    h = std::min(h, t_end);
  }
  if (opts.max_step > 0.0) h = std::min(h, opts.max_step);

  std::size_t next = 1;
  std::size_t steps = 0;
  while (next < times.size()) {
    const double target = times[next];
    bool hit = false;
    double h_try = h;
    if (t + h_try >= target || target - (t + h_try) < 1e-12 * std::max(1.0, target)) {
      h_try = target - t;
      hit = true;
    }
    if (h_try < opts.min_step * std::max(1.0, std::abs(t))) {
      throw NumericalError("evolve: step size underflow at t = " + time_str(t) + " us");
    }
    if (++steps > opts.max_steps) {
      throw NumericalError("evolve: step limit exceeded at t = " + time_str(t) + " us");
    }

    for (int s = 1; s < 7; ++s) {
      stage = y;
      for (int j = 0; j < s; ++j) {
        if (kA[s][j] != 0.0) stage += (h_try * kA[s][j]) * k[j];
      }
      if (s == 6) {
        y_new = stage;
      }
      rhs(s == 6 ? y_new : stage, k[s]);
    }
    err = (h_try * kE[0]) * k[0];
    for (int j = 2; j < 7; ++j) err += (h_try * kE[j]) * k[j];
    const double e = scaled_max(err, y, y_new, opts.abs_tol, opts.rel_tol);

    if (e <= 1.0 && std::isfinite(e)) {
      t = hit ? target : t + h_try;
      y.swap(y_new);
      std::swap(k[0], k[6]);
      ++traj.stats.accepted_steps;
      traj.stats.error_estimate += err.cwiseAbs().maxCoeff();
      const double factor = e == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(e, -0.2), 0.2, 5.0);
      // Clamped steps keep the unclamped proposal alive for the next interval.
      h = hit ? std::max(h, h_try * factor) : h_try * factor;
      if (opts.max_step > 0.0) h = std::min(h, opts.max_step);
      if (hit) {
        emit(next, y);
        ++next;
      }
    } else {
      ++traj.stats.rejected_steps;
      const double factor = std::isfinite(e) ? std::max(0.2, 0.9 * std::pow(e, -0.2)) : 0.2;
      h = h_try * factor;
    }
  }
  traj.stats.rhs_evaluations = rhs.evaluations;
  return traj;
}

double expect(const OperatorMatrix& op, const DensityOperator& rho) {
  if (op.dim() != rho.dim()) throw InvalidArgument("expect: dimension mismatch");
  if (!op.is_hermitian(1e-10)) throw InvalidArgument("expect: operator is not Hermitian");
  const Complex v = (rho.entries().array() * op.entries().transpose().array()).sum();
  const double scale = std::max(1.0, op.dim() == 0 ? 0.0 : op.entries().cwiseAbs().maxCoeff());
  if (std::abs(v.imag()) > 1e-10 * scale) {
    throw NumericalError("expect: imaginary residue " + std::to_string(v.imag()) + " above tolerance");
  }
  return v.real();
}

HilbertSpec resonant_spec(const SystemParams& params, int resonant_index) {
  const std::size_t res = params.position_of(resonant_index);
  HilbertSpec spec = HilbertSpec::uniform(2, params.modes.size(), 2);
  spec.mode_levels[res] = 3;
  return spec;
}

TimeSeries simulate_resonant_pe(const SystemParams& params, const HilbertSpec& spec,
                                int resonant_index, std::span<const double> times,
                                const EvolveOptions& opts, EvolveStats* stats) {
  validate(params);
  const std::size_t res = params.position_of(resonant_index);
  const ModeParams& mode = params.modes[res];

  SystemParams aligned = params;
  aligned.qubit.f01 = mode.f;
  const double gp = gamma_prime(params, resonant_index);

  const OperatorMatrix h = hamiltonian_dispersive(aligned, spec, resonant_index);
  std::vector<OperatorMatrix> collapse;
  if (gp > 0.0) {
    collapse.push_back(Complex(std::sqrt(kTwoPi * gp)) * embed(destroy(2), 0, spec));
  }
  collapse.push_back(Complex(std::sqrt(kTwoPi * mode.kappa)) *
                     embed(destroy(spec.mode_levels[res]), res + 1, spec));

  const OperatorMatrix pe_op = qubit_excited_projector(spec);
  TimeSeries out;
  out.label = "P_e mode " + std::to_string(resonant_index);
  out.times.assign(times.begin(), times.end());
  out.values.resize(times.size());

  EvolveOptions o = opts;
  o.store_states = false;
  const Trajectory traj = evolve(h, collapse, initial_state(spec, true), times, o,
                                 [&](std::size_t i, double, const DensityOperator& rho) {
                                   out.values[i] = expect(pe_op, rho);
                                 });
  if (stats != nullptr) *stats = traj.stats;
  return out;
}

}  // namespace cqad
