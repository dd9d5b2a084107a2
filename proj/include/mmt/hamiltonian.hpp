#pragma once

// Quadratic Hamiltonians H = ½ ξ^T H(τ) ξ on a 2n-dimensional phase space
// ξ = (q¹..qⁿ, p¹..pⁿ), with Hamilton's equations ξ̇ = J ∂H/∂ξ.
//
// Every momentum block that multiplies ½ P·P is the identity, so the
// expanded Hamiltonians reproduce the second-order equations exactly
// (Z̈ + K Z = 0 for the Jacobi and constant-curvature forms).

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mmt/geometry.hpp"
#include "mmt/linalg.hpp"
#include "mmt/transport.hpp"

namespace mmt {

enum class HamiltonianKind {
  JacobiSecondOrder,
  JacobiFirstOrder,
  MetricSecondOrder,
  MetricQuadraticForm,
  MetricFirstOrder,
  TargetConstant,
};

std::string to_string(HamiltonianKind kind);

struct PhaseState {
  Vec xi;
};

struct QuadHamiltonian {
  std::size_t n = 0;
  std::function<Mat(double)> coeff;
  HamiltonianKind kind = HamiltonianKind::TargetConstant;
  /// Optional (τ, ξ) -> C with C_{lj} = ∂H_{ij}/∂ξ^l ξ^i, for coefficient
  /// matrices that depend on the state.
  std::function<Mat(double, const Vec&)> state_dependent_gradient;
  /// Optional (τ, ξ) -> H(τ, ξ). Used in place of coeff whenever a state is
  /// available; absent means H depends on τ only.
  std::function<Mat(double, const Vec&)> state_dependent_coeff;
  /// True when coeff does not depend on τ.
  bool constant_in_tau = false;

  bool state_dependent() const noexcept {
    return static_cast<bool>(state_dependent_gradient) || static_cast<bool>(state_dependent_coeff);
  }
};

/// ξ̇ = J (H ξ + ½ C ξ), with C the state-dependent correction when present.
Vec hamilton_rhs(const QuadHamiltonian& hq, double tau, const PhaseState& s);

/// ½ ξ^T H(τ, ξ) ξ.
double energy(const QuadHamiltonian& hq, double tau, const PhaseState& s);

/// X = H(ξ_ref) + ½ C(ξ_ref). With dt/dτ = 1 this is also the transfer matrix Z
/// (source side) or Y (target side). Throws InvalidArgument when the
/// Hamiltonian is state dependent and no reference is given.
Mat coefficient_X(const QuadHamiltonian& hq, double tau,
                  const std::optional<PhaseState>& reference = std::nullopt);

/// [[K_{0A0C}(τ), 0], [0, I]]: H = ½(P·P + Z K Z).
QuadHamiltonian build_jacobi_H_second_order(const FrameCurvature& fc);

/// [[0, M], [M^T, 0]] with M_{AC} = V_{C;A}, so that ζ̇^A = V_{A;C} ζ^C.
QuadHamiltonian build_jacobi_H_first_order(std::function<Mat(double)> M_of_tau, std::size_t n);

/// [[diag(K_l), 0], [0, I]], τ-independent.
QuadHamiltonian build_target_C_constant(const ConstantCurvatureSpec& spec);

/// [[G(τ), 0], [0, I]]; rejects asymmetric G at τ = 0.
QuadHamiltonian build_metric_H_second_order(std::function<Mat(double)> G_of_tau, std::size_t n,
                                            bool constant_in_tau = false);

/// [[G(τ), 0], [0, 0]]: a pure position quadratic form, degenerate flow.
QuadHamiltonian build_metric_quadratic_form(std::function<Mat(double)> G_of_tau, std::size_t n,
                                            bool constant_in_tau = false);

/// [[0, M], [M^T, 0]] with M_{ij} = G_{ji}; G may be asymmetric.
QuadHamiltonian build_metric_H_first_order(std::function<Mat(double)> G_of_tau, std::size_t n,
                                           bool constant_in_tau = false);

/// Uniform τ grid: tau0, tau0 + step, ..., tau0 + steps * step.
struct Grid {
  double tau0 = 0.0;
  double step = 1e-3;
  std::size_t steps = 0;

  std::size_t size() const noexcept { return steps + 1; }
  double tau(std::size_t i) const noexcept { return tau0 + step * static_cast<double>(i); }
};

/// RK4 integration of Hamilton's equations on the grid.
std::vector<Vec> integrate_flow(const QuadHamiltonian& hq, const Grid& grid, const PhaseState& s0);

}  // namespace mmt
