#include "cqad/operators.hpp"

#include <cmath>
#include <initializer_list>
#include <utility>
#include <string>

#include "cqad/analytic.hpp"
#include "cqad/density.hpp"
#include "cqad/error.hpp"

namespace cqad {

OperatorMatrix::OperatorMatrix(ComplexMatrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols()) throw InvalidArgument("operator matrix must be square");
}

OperatorMatrix OperatorMatrix::zero(Eigen::Index dim) {
  return OperatorMatrix(ComplexMatrix::Zero(dim, dim));
}

OperatorMatrix OperatorMatrix::identity(Eigen::Index dim) {
  return OperatorMatrix(ComplexMatrix::Identity(dim, dim));
}

double OperatorMatrix::hermiticity_residual(bool relative) const {
  if (entries_.size() == 0) return 0.0;
  const double res = (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
  if (!relative) return res;
  const double scale = entries_.cwiseAbs().maxCoeff();
  return scale > 0.0 ? res / scale : res;
}

bool OperatorMatrix::is_hermitian(double rel_tol) const {
  return hermiticity_residual(true) < rel_tol || hermiticity_residual(false) == 0.0;
}

OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b) {
  if (a.dim() != b.dim()) throw InvalidArgument("operator dimension mismatch");
  return OperatorMatrix(a.entries_ * b.entries_);
}

OperatorMatrix operator+(const OperatorMatrix& a, const OperatorMatrix& b) {
  if (a.dim() != b.dim()) throw InvalidArgument("operator dimension mismatch");
  return OperatorMatrix(a.entries_ + b.entries_);
}

OperatorMatrix operator-(const OperatorMatrix& a, const OperatorMatrix& b) {
  if (a.dim() != b.dim()) throw InvalidArgument("operator dimension mismatch");
  return OperatorMatrix(a.entries_ - b.entries_);
}

OperatorMatrix operator*(Complex s, const OperatorMatrix& a) {
  return OperatorMatrix(s * a.entries_);
}

OperatorMatrix& OperatorMatrix::operator+=(const OperatorMatrix& o) {
  if (dim() != o.dim()) throw InvalidArgument("operator dimension mismatch");
  entries_ += o.entries_;
  return *this;
}

OperatorMatrix destroy(int levels) {
  if (levels < 2) throw InvalidArgument("destroy: levels must be >= 2");
  ComplexMatrix a = ComplexMatrix::Zero(levels, levels);
  for (int n = 1; n < levels; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return OperatorMatrix(std::move(a));
}

OperatorMatrix projector(int levels, int level) {
  if (level < 0 || level >= levels) throw InvalidArgument("projector: level out of range");
  ComplexMatrix p = ComplexMatrix::Zero(levels, levels);
  p(level, level) = 1.0;
  return OperatorMatrix(std::move(p));
}

OperatorMatrix kron(const OperatorMatrix& a, const OperatorMatrix& b) {
  const Eigen::Index na = a.dim();
  const Eigen::Index nb = b.dim();
  ComplexMatrix out(na * nb, na * nb);
  for (Eigen::Index i = 0; i < na; ++i) {
    for (Eigen::Index j = 0; j < na; ++j) {
      if (a(i, j) == Complex(0.0)) {
        out.block(i * nb, j * nb, nb, nb).setZero();
      } else {
        out.block(i * nb, j * nb, nb, nb) = a(i, j) * b.entries();
      }
    }
  }
  return OperatorMatrix(std::move(out));
}

namespace {

// Tensor product over all slots, with `factors` placed at their slots and the
// identity elsewhere. Cost is O(dim^2), independent of how many factors.
OperatorMatrix place(std::initializer_list<std::pair<std::size_t, const OperatorMatrix*>> factors,
                     const HilbertSpec& spec) {
  OperatorMatrix out = OperatorMatrix::identity(1);
  for (std::size_t s = 0; s < spec.slot_count(); ++s) {
    const OperatorMatrix* local = nullptr;
    for (const auto& [slot, op] : factors) {
      if (slot == s) local = op;
    }
    out = local != nullptr ? kron(out, *local) : kron(out, OperatorMatrix::identity(spec.slot_dim(s)));
  }
  return out;
}

}  // namespace

OperatorMatrix embed(const OperatorMatrix& op, std::size_t slot, const HilbertSpec& spec) {
  spec.check();
  if (slot >= spec.slot_count()) {
    throw InvalidArgument("embed: slot " + std::to_string(slot) + " out of range");
  }
  if (op.dim() != spec.slot_dim(slot)) {
    throw InvalidArgument("embed: operator dimension " + std::to_string(op.dim()) +
                          " does not match slot dimension " + std::to_string(spec.slot_dim(slot)));
  }
  return place({{slot, &op}}, spec);
}

namespace {

void require_mode_count(const SystemParams& params, const HilbertSpec& spec) {
  if (spec.mode_levels.size() != params.modes.size()) {
    throw InvalidArgument("Hilbert spec has " + std::to_string(spec.mode_levels.size()) +
                          " modes but params have " + std::to_string(params.modes.size()));
  }
}

OperatorMatrix number_op(int levels) {
  const OperatorMatrix a = destroy(levels);
  return a.adjoint() * a;
}

}  // namespace

OperatorMatrix hamiltonian_full(const SystemParams& params, const HilbertSpec& spec,
                                double frame_freq) {
  validate(params);
  spec.check();
  require_mode_count(params, spec);

  const OperatorMatrix b = destroy(spec.qubit_levels);
  const OperatorMatrix bd = b.adjoint();
  const OperatorMatrix nq = bd * b;
  const OperatorMatrix kerr = bd * bd * b * b;

  OperatorMatrix h = Complex(kTwoPi * (params.qubit.f01 - frame_freq)) * place({{0, &nq}}, spec);
  h += Complex(-std::numbers::pi * params.qubit.ec) * place({{0, &kerr}}, spec);
  for (std::size_t k = 0; k < params.modes.size(); ++k) {
    const auto& m = params.modes[k];
    const std::size_t slot = k + 1;
    const OperatorMatrix a = destroy(spec.mode_levels[k]);
    const OperatorMatrix ad = a.adjoint();
    const OperatorMatrix n = number_op(spec.mode_levels[k]);
    h += Complex(kTwoPi * (m.f - frame_freq)) * place({{slot, &n}}, spec);
    if (m.g != 0.0) {
      h += Complex(kTwoPi * m.g) * (place({{0, &b}, {slot, &ad}}, spec) + place({{0, &bd}, {slot, &a}}, spec));
    }
  }
  return h;
}

OperatorMatrix hamiltonian_dispersive(const SystemParams& params, const HilbertSpec& spec,
                                      int resonant_index) {
  return hamiltonian_dispersive(params, spec, resonant_index, params.mode(resonant_index).f);
}

OperatorMatrix hamiltonian_dispersive(const SystemParams& params, const HilbertSpec& spec,
                                      int resonant_index, double frame_freq) {
  validate(params);
  spec.check();
  require_mode_count(params, spec);
  if (spec.qubit_levels != 2) throw InvalidArgument("hamiltonian_dispersive: qubit_levels must be 2");
  const std::size_t res = params.position_of(resonant_index);

  const OperatorMatrix sm = destroy(2);  // sigma_- in basis order (g, e)
  const OperatorMatrix sp = sm.adjoint();
  ComplexMatrix z(2, 2);
  z << -1.0, 0.0, 0.0, 1.0;
  const OperatorMatrix sz(z);

  OperatorMatrix h = Complex(0.5 * kTwoPi * (params.qubit.f01 - frame_freq)) * place({{0, &sz}}, spec);
  for (std::size_t k = 0; k < params.modes.size(); ++k) {
    const auto& m = params.modes[k];
    const std::size_t slot = k + 1;
    const OperatorMatrix a = destroy(spec.mode_levels[k]);
    const OperatorMatrix ad = a.adjoint();
    const OperatorMatrix n = number_op(spec.mode_levels[k]);
    h += Complex(kTwoPi * (m.f - frame_freq)) * place({{slot, &n}}, spec);
    if (k == res) {
      h += Complex(kTwoPi * m.g) * (place({{0, &sm}, {slot, &ad}}, spec) + place({{0, &sp}, {slot, &a}}, spec));
    } else {
      const double chi = m.g == 0.0 ? 0.0 : chi_dispersive(m.g, params.qubit.f01 - m.f, params.qubit.ec);
      if (chi != 0.0) h += Complex(kTwoPi * chi) * place({{0, &sz}, {slot, &n}}, spec);
    }
  }
  return h;
}

std::vector<OperatorMatrix> collapse_ops(const SystemParams& params, const HilbertSpec& spec,
                                         bool two_level) {
  validate(params);
  spec.check();
  require_mode_count(params, spec);
  if (two_level && spec.qubit_levels != 2) {
    throw InvalidArgument("collapse_ops: two_level requires qubit_levels == 2");
  }
  std::vector<OperatorMatrix> ops;
  if (params.qubit.gamma > 0.0) {
    ops.push_back(Complex(std::sqrt(kTwoPi * params.qubit.gamma)) *
                  embed(destroy(spec.qubit_levels), 0, spec));
  }
  for (std::size_t k = 0; k < params.modes.size(); ++k) {
    ops.push_back(Complex(std::sqrt(kTwoPi * params.modes[k].kappa)) *
                  embed(destroy(spec.mode_levels[k]), k + 1, spec));
  }
  return ops;
}

DensityOperator initial_state(const HilbertSpec& spec, bool qubit_excited) {
  spec.check();
  Eigen::Index stride = 1;
  for (int l : spec.mode_levels) stride *= l;
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(spec.total_dim()));
  psi(qubit_excited ? stride : 0) = 1.0;
  return DensityOperator::pure(psi);
}

OperatorMatrix qubit_excited_projector(const HilbertSpec& spec) {
  return embed(projector(spec.qubit_levels, 1), 0, spec);
}

OperatorMatrix excitation_number(const HilbertSpec& spec) {
  OperatorMatrix n = embed(number_op(spec.qubit_levels), 0, spec);
  for (std::size_t k = 0; k < spec.mode_levels.size(); ++k) {
    n += embed(number_op(spec.mode_levels[k]), k + 1, spec);
  }
  return n;
}

}  // namespace cqad
