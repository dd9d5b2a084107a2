#include "mmt/transfer.hpp"

#include <algorithm>
#include <cmath>

#include "mmt/error.hpp"
#include "mmt/rk4.hpp"

namespace mmt {

namespace {

template <class T>
std::vector<T> fd_derivative(const std::vector<T>& v, double h) {
  std::vector<T> d;
  d.reserve(v.size());
  const std::size_t m = v.size();
  if (m == 0) return d;
  if (m == 1) {
    d.push_back((0.0) * v[0]);
    return d;
  }
  if (m == 2) {
    const T fwd = (1.0 / h) * (v[1] - v[0]);
    d.push_back(fwd);
    d.push_back(fwd);
    return d;
  }
  d.push_back((1.0 / (2.0 * h)) * ((-3.0) * v[0] + 4.0 * v[1] - v[2]));
  for (std::size_t i = 1; i + 1 < m; ++i) d.push_back((1.0 / (2.0 * h)) * (v[i + 1] - v[i - 1]));
  d.push_back((1.0 / (2.0 * h)) * (3.0 * v[m - 1] - 4.0 * v[m - 2] + v[m - 3]));
  return d;
}

void require_coefficient_only(const QuadHamiltonian& h, const char* side) {
  if (h.state_dependent()) {
    throw InvalidArgument(std::string("transfer: ") + side +
                          " Hamiltonian has state-dependent coefficients; the transfer equation "
                          "is only linear for τ-dependent coefficients");
  }
}

template <class Rhs>
std::vector<Mat> integrate_matrix_ode(const Rhs& rhs, const Mat& y0, const Grid& grid,
                                      const char* what) {
  if (!(grid.step > 0.0)) throw InvalidArgument(std::string(what) + ": step must be positive");
  std::vector<Mat> out;
  out.reserve(grid.size());
  Mat y = y0;
  out.push_back(y);
  for (std::size_t i = 0; i < grid.steps; ++i) {
    y = rk4_step(rhs, grid.tau(i), y, grid.step);
    if (!y.all_finite()) {
      throw Diverged(std::string(what) + ": non-finite entries at tau = " +
                         std::to_string(grid.tau(i + 1)),
                     grid.tau(i + 1));
    }
    out.push_back(y);
  }
  return out;
}

}  // namespace

std::vector<Mat> finite_difference_derivative(const std::vector<Mat>& values, double step) {
  return fd_derivative(values, step);
}

std::vector<Vec> finite_difference_derivative(const std::vector<Vec>& values, double step) {
  return fd_derivative(values, step);
}

double max_discrepancy(const std::vector<Mat>& a, const std::vector<Mat>& b) {
  if (a.size() != b.size()) {
    throw DimensionMismatch("max_discrepancy: " + std::to_string(a.size()) + " vs " +
                            std::to_string(b.size()) + " samples");
  }
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, (a[i] - b[i]).max_abs());
  return m;
}

void TransferProblem::validate() const {
  if (source.n != target.n) {
    throw DimensionMismatch("transfer: source n = " + std::to_string(source.n) +
                            " but target n = " + std::to_string(target.n));
  }
  if (!(grid.step > 0.0)) throw InvalidArgument("transfer: grid step must be positive");
  if (T0.rows() != 2 * source.n || T0.cols() != 2 * source.n) {
    throw DimensionMismatch("transfer: T0 is " + T0.shape() + ", expected " +
                            std::to_string(2 * source.n) + "x" + std::to_string(2 * source.n));
  }
  require_coefficient_only(source, "source");
  require_coefficient_only(target, "target");
}

Mat ConstantBlocks::assemble() const {
  return BlockMat2n::from_blocks(a, d, b, c).flatten();
}

ConstantBlocks ConstantBlocks::from_matrix(const Mat& A) {
  const BlockMat2n blk = BlockMat2n::split(A);
  return ConstantBlocks{blk.b11(), blk.b21(), blk.b22(), blk.b12()};
}

std::vector<Mat> integrate_S(const QuadHamiltonian& target, const Mat& S0, const Grid& grid) {
  require_coefficient_only(target, "target");
  const SymplecticForm j(target.n);
  const auto rhs = [&](double tau, const Mat& s) {
    return j.apply(matmul(coefficient_X(target, tau), s));
  };
  return integrate_matrix_ode(rhs, S0, grid, "integrate_S");
}

std::vector<Mat> integrate_R(const QuadHamiltonian& source, const Mat& R0, const Grid& grid) {
  require_coefficient_only(source, "source");
  const SymplecticForm j(source.n);
  const auto rhs = [&](double tau, const Mat& r) {
    return -matmul(j.apply_right(r), coefficient_X(source, tau));
  };
  return integrate_matrix_ode(rhs, R0, grid, "integrate_R");
}

Mat compose_T(const Mat& S, const Mat& R, const ConstantBlocks& k) {
  const BlockMat2n s = BlockMat2n::split(S);
  const BlockMat2n r = BlockMat2n::split(R);
  const Mat upper_a = matmul(s.b11(), k.a) + matmul(s.b12(), k.b);  // S1 a + S2 b
  const Mat upper_d = matmul(s.b11(), k.d) + matmul(s.b12(), k.c);  // S1 d + S2 c
  const Mat lower_a = matmul(s.b21(), k.a) + matmul(s.b22(), k.b);  // S3 a + S4 b
  const Mat lower_d = matmul(s.b21(), k.d) + matmul(s.b22(), k.c);  // S3 d + S4 c
  return BlockMat2n::from_blocks(matmul(upper_a, r.b11()) + matmul(upper_d, r.b21()),
                                 matmul(upper_a, r.b12()) + matmul(upper_d, r.b22()),
                                 matmul(lower_a, r.b11()) + matmul(lower_d, r.b21()),
                                 matmul(lower_a, r.b12()) + matmul(lower_d, r.b22()))
      .flatten();
}

std::vector<Mat> compose_T(const std::vector<Mat>& S, const std::vector<Mat>& R,
                           const ConstantBlocks& blocks) {
  if (S.size() != R.size()) {
    throw DimensionMismatch("compose_T: S has " + std::to_string(S.size()) + " samples, R has " +
                            std::to_string(R.size()));
  }
  std::vector<Mat> t;
  t.reserve(S.size());
  for (std::size_t i = 0; i < S.size(); ++i) t.push_back(compose_T(S[i], R[i], blocks));
  return t;
}

ConstantBlocks fit_constant_blocks(const Mat& S0, const Mat& R0, const Mat& T0) {
  // S0 A R0 = T0  =>  A = S0⁻¹ T0 R0⁻¹;  A^T = R0^{-T} (S0⁻¹ T0)^T.
  const Mat left = solve_linear(S0, T0);
  const Mat a = solve_linear(R0.transpose(), left.transpose()).transpose();
  return ConstantBlocks::from_matrix(a);
}

namespace {

void fill_diagnostics(const TransferProblem& p, TransferSolution& sol) {
  const SymplecticForm j(p.n());
  const std::vector<Mat> dT = finite_difference_derivative(sol.T, p.grid.step);
  sol.ode_residual.clear();
  sol.symplectic_defect.clear();
  for (std::size_t i = 0; i < sol.T.size(); ++i) {
    const double tau = p.grid.tau(i);
    const Mat& t = sol.T[i];
    const Mat lhs = dT[i] + matmul(j.apply_right(t), coefficient_X(p.source, tau));
    const Mat rhs = j.apply(matmul(coefficient_X(p.target, tau), t));
    sol.ode_residual.push_back((lhs - rhs).norm_frobenius());
    sol.symplectic_defect.push_back(symplectic_defect(p.n(), t));
  }
}

}  // namespace

TransferSolution integrate_T_direct(const TransferProblem& p) {
  p.validate();
  const SymplecticForm j(p.n());
  const auto rhs = [&](double tau, const Mat& t) {
    return j.apply(matmul(coefficient_X(p.target, tau), t)) -
           matmul(j.apply_right(t), coefficient_X(p.source, tau));
  };
  TransferSolution sol;
  sol.grid = p.grid;
  sol.T = integrate_matrix_ode(rhs, p.T0, p.grid, "integrate_T_direct");
  fill_diagnostics(p, sol);
  return sol;
}

TransferSolution integrate_T_factorized(const TransferProblem& p, const std::optional<Mat>& S0,
                                        const std::optional<Mat>& R0) {
  p.validate();
  const std::size_t dim = 2 * p.n();
  const Mat s0 = S0.value_or(Mat::identity(dim));
  const Mat r0 = R0.value_or(Mat::identity(dim));
  Factorization f;
  f.S = integrate_S(p.target, s0, p.grid);
  f.R = integrate_R(p.source, r0, p.grid);
  f.blocks = fit_constant_blocks(s0, r0, p.T0);

  TransferSolution sol;
  sol.grid = p.grid;
  sol.T = compose_T(f.S, f.R, f.blocks);
  sol.factorization = std::move(f);
  fill_diagnostics(p, sol);
  return sol;
}

PhaseState map_phase_state(const Mat& T, const PhaseState& s) {
  if (T.cols() != s.xi.size()) {
    throw DimensionMismatch("map_phase_state: T is " + T.shape() + " but state has length " +
                            std::to_string(s.xi.size()));
  }
  return PhaseState{matvec(T, s.xi)};
}

MappingReport verify_solution_mapping(const TransferProblem& p, const TransferSolution& sol,
                                      const PhaseState& xi0) {
  if (sol.T.size() != p.grid.size()) {
    throw DimensionMismatch("verify_solution_mapping: solution has " +
                            std::to_string(sol.T.size()) + " samples, grid has " +
                            std::to_string(p.grid.size()));
  }
  const SymplecticForm j(p.n());
  MappingReport rep;
  rep.source_trajectory = integrate_flow(p.source, p.grid, xi0);
  rep.mapped_trajectory.reserve(sol.T.size());
  for (std::size_t i = 0; i < sol.T.size(); ++i) {
    rep.mapped_trajectory.push_back(matvec(sol.T[i], rep.source_trajectory[i]));
  }
  const std::vector<Vec> deta = finite_difference_derivative(rep.mapped_trajectory, p.grid.step);
  rep.residual.reserve(sol.T.size());
  for (std::size_t i = 0; i < sol.T.size(); ++i) {
    const Vec target_rhs =
        j.apply(matvec(coefficient_X(p.target, p.grid.tau(i)), rep.mapped_trajectory[i]));
    const double r = (deta[i] - target_rhs).norm();
    rep.residual.push_back(r);
    rep.max_residual = std::max(rep.max_residual, r);
  }
  return rep;
}

}  // namespace mmt
