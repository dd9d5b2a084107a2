#pragma once

// Transfer matrices between two quadratic Hamiltonian systems.
//
// If ξ̇ = J Z(τ) ξ (source) and η̇ = J Y(τ) η (target), then η = T ξ carries
// source solutions to target solutions whenever
//
//     Ṫ + T J Z = J Y T.
//
// T is in general not symplectic. The equation is integrated directly, and
// through the factorization T = S A R with Ṡ = J Y S, Ṙ = -R J Z and a
// constant A = [[a, d], [b, c]] fixed by T(τ0).

#include <optional>
#include <vector>

#include "mmt/hamiltonian.hpp"
#include "mmt/linalg.hpp"

namespace mmt {

struct TransferProblem {
  QuadHamiltonian source;
  QuadHamiltonian target;
  Mat T0;
  Grid grid;

  std::size_t n() const noexcept { return source.n; }
  /// Checks equal half-dimensions, a positive step and a 2n x 2n T0.
  void validate() const;
};

/// Constant n x n blocks of A = [[a, d], [b, c]].
struct ConstantBlocks {
  Mat a, b, c, d;

  Mat assemble() const;
  static ConstantBlocks from_matrix(const Mat& A);
};

struct Factorization {
  std::vector<Mat> S;
  std::vector<Mat> R;
  ConstantBlocks blocks;
};

struct TransferSolution {
  Grid grid;
  std::vector<Mat> T;
  /// ||Ṫ + T J Z - J Y T||_F with Ṫ from second-order finite differences.
  std::vector<double> ode_residual;
  std::vector<double> symplectic_defect;
  std::optional<Factorization> factorization;
};

/// Ṫ = J Y T - T J Z from T(τ0) = T0 by RK4.
TransferSolution integrate_T_direct(const TransferProblem& p);

/// Ṡ = J Y S (target only).
std::vector<Mat> integrate_S(const QuadHamiltonian& target, const Mat& S0, const Grid& grid);

/// Ṙ = -R J Z (source only).
std::vector<Mat> integrate_R(const QuadHamiltonian& source, const Mat& R0, const Grid& grid);

/// T = S A R, assembled blockwise:
///   T1 = (S1 a + S2 b) R1 + (S1 d + S2 c) R3, etc.
Mat compose_T(const Mat& S, const Mat& R, const ConstantBlocks& blocks);
std::vector<Mat> compose_T(const std::vector<Mat>& S, const std::vector<Mat>& R,
                           const ConstantBlocks& blocks);

/// A = S0⁻¹ T0 R0⁻¹ split into blocks.
ConstantBlocks fit_constant_blocks(const Mat& S0, const Mat& R0, const Mat& T0);

/// Integrates S and R from the given initial values (identity by default),
/// fits the constant blocks to p.T0 and composes T.
TransferSolution integrate_T_factorized(const TransferProblem& p,
                                        const std::optional<Mat>& S0 = std::nullopt,
                                        const std::optional<Mat>& R0 = std::nullopt);

/// η = T ξ.
PhaseState map_phase_state(const Mat& T, const PhaseState& s);

struct MappingReport {
  double max_residual = 0.0;
  /// ||η̇ - J Y η|| at each grid point.
  std::vector<double> residual;
  std::vector<Vec> source_trajectory;
  std::vector<Vec> mapped_trajectory;
};

/// Integrates the source flow from xi0, maps it with T(τ) and measures how far
/// the image is from solving the target Hamilton equations.
MappingReport verify_solution_mapping(const TransferProblem& p, const TransferSolution& sol,
                                      const PhaseState& xi0);

/// Second-order finite-difference derivative of uniformly sampled values:
/// centered inside, one-sided three-point at the ends.
std::vector<Mat> finite_difference_derivative(const std::vector<Mat>& values, double step);
std::vector<Vec> finite_difference_derivative(const std::vector<Vec>& values, double step);

/// max_i ||a_i - b_i||_inf (largest absolute entry).
double max_discrepancy(const std::vector<Mat>& a, const std::vector<Mat>& b);

}  // namespace mmt
