#include "mmt/hamiltonian.hpp"

#include "mmt/error.hpp"
#include "mmt/rk4.hpp"

namespace mmt {

namespace {

Mat block_diagonal(const Mat& position, const Mat& momentum) {
  const std::size_t n = position.rows();
  Mat c(2 * n, 2 * n);
  c.set_block(0, 0, position);
  c.set_block(n, n, momentum);
  return c;
}

Mat off_diagonal(const Mat& m) {
  const std::size_t n = m.rows();
  Mat c(2 * n, 2 * n);
  c.set_block(0, n, m);
  c.set_block(n, 0, m.transpose());
  return c;
}

void require_square(const Mat& m, std::size_t n, const char* what) {
  if (m.rows() != n || m.cols() != n) {
    throw DimensionMismatch(std::string(what) + ": expected " + std::to_string(n) + "x" +
                            std::to_string(n) + ", got " + m.shape());
  }
}

void require_symmetric(const Mat& m, const char* what) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i + 1; j < m.cols(); ++j)
      if (m(i, j) != m(j, i)) {
        throw InvalidArgument(std::string(what) + ": matrix is not symmetric at (" +
                              std::to_string(i) + ", " + std::to_string(j) + ")");
      }
}

}  // namespace

std::string to_string(HamiltonianKind kind) {
  switch (kind) {
    case HamiltonianKind::JacobiSecondOrder: return "jacobi-second-order";
    case HamiltonianKind::JacobiFirstOrder: return "jacobi-first-order";
    case HamiltonianKind::MetricSecondOrder: return "metric-second-order";
    case HamiltonianKind::MetricQuadraticForm: return "metric-quadratic-form";
    case HamiltonianKind::MetricFirstOrder: return "metric-first-order";
    case HamiltonianKind::TargetConstant: return "target-constant";
  }
  return "unknown";
}

Mat coefficient_X(const QuadHamiltonian& hq, double tau, const std::optional<PhaseState>& reference) {
  if (!hq.state_dependent()) return hq.coeff(tau);
  if (!reference) {
    throw InvalidArgument("coefficient_X: state-dependent Hamiltonian needs a reference state");
  }
  const Vec& xi = reference->xi;
  Mat x = hq.state_dependent_coeff ? hq.state_dependent_coeff(tau, xi) : hq.coeff(tau);
  if (hq.state_dependent_gradient) x += 0.5 * hq.state_dependent_gradient(tau, xi);
  return x;
}

Vec hamilton_rhs(const QuadHamiltonian& hq, double tau, const PhaseState& s) {
  if (s.xi.size() != 2 * hq.n) {
    throw DimensionMismatch("hamilton_rhs: state length " + std::to_string(s.xi.size()) +
                            " for n = " + std::to_string(hq.n));
  }
  const Mat x = hq.state_dependent() ? coefficient_X(hq, tau, s) : hq.coeff(tau);
  return SymplecticForm(hq.n).apply(matvec(x, s.xi));
}

double energy(const QuadHamiltonian& hq, double tau, const PhaseState& s) {
  const Mat h = hq.state_dependent_coeff ? hq.state_dependent_coeff(tau, s.xi) : hq.coeff(tau);
  return 0.5 * dot(s.xi, matvec(h, s.xi));
}

QuadHamiltonian build_jacobi_H_second_order(const FrameCurvature& fc) {
  if (fc.samples.empty()) throw InvalidArgument("build_jacobi_H_second_order: no curvature samples");
  const std::size_t n = fc.n();
  QuadHamiltonian h;
  h.n = n;
  h.kind = HamiltonianKind::JacobiSecondOrder;
  h.coeff = [fc, n](double tau) { return block_diagonal(fc.at(tau), Mat::identity(n)); };
  return h;
}

QuadHamiltonian build_jacobi_H_first_order(std::function<Mat(double)> M_of_tau, std::size_t n) {
  QuadHamiltonian h;
  h.n = n;
  h.kind = HamiltonianKind::JacobiFirstOrder;
  h.coeff = [M = std::move(M_of_tau), n](double tau) {
    const Mat m = M(tau);
    require_square(m, n, "build_jacobi_H_first_order");
    return off_diagonal(m);
  };
  return h;
}

QuadHamiltonian build_target_C_constant(const ConstantCurvatureSpec& spec) {
  const std::size_t n = spec.n();
  const Mat c = block_diagonal(constant_curvature_frame_block(spec), Mat::identity(n));
  QuadHamiltonian h;
  h.n = n;
  h.kind = HamiltonianKind::TargetConstant;
  h.constant_in_tau = true;
  h.coeff = [c](double) { return c; };
  return h;
}

QuadHamiltonian build_metric_H_second_order(std::function<Mat(double)> G_of_tau, std::size_t n,
                                            bool constant_in_tau) {
  const Mat g0 = G_of_tau(0.0);
  require_square(g0, n, "build_metric_H_second_order");
  require_symmetric(g0, "build_metric_H_second_order");
  QuadHamiltonian h;
  h.n = n;
  h.kind = HamiltonianKind::MetricSecondOrder;
  h.constant_in_tau = constant_in_tau;
  h.coeff = [G = std::move(G_of_tau), n](double tau) {
    const Mat g = G(tau);
    require_symmetric(g, "build_metric_H_second_order");
    return block_diagonal(g, Mat::identity(n));
  };
  return h;
}

QuadHamiltonian build_metric_quadratic_form(std::function<Mat(double)> G_of_tau, std::size_t n,
                                            bool constant_in_tau) {
  require_square(G_of_tau(0.0), n, "build_metric_quadratic_form");
  QuadHamiltonian h;
  h.n = n;
  h.kind = HamiltonianKind::MetricQuadraticForm;
  h.constant_in_tau = constant_in_tau;
  h.coeff = [G = std::move(G_of_tau), n](double tau) {
    return block_diagonal(G(tau), Mat(n, n));
  };
  return h;
}

QuadHamiltonian build_metric_H_first_order(std::function<Mat(double)> G_of_tau, std::size_t n,
                                           bool constant_in_tau) {
  require_square(G_of_tau(0.0), n, "build_metric_H_first_order");
  QuadHamiltonian h;
  h.n = n;
  h.kind = HamiltonianKind::MetricFirstOrder;
  h.constant_in_tau = constant_in_tau;
  // M_ij = G_ji
  h.coeff = [G = std::move(G_of_tau)](double tau) { return off_diagonal(G(tau).transpose()); };
  return h;
}

std::vector<Vec> integrate_flow(const QuadHamiltonian& hq, const Grid& grid, const PhaseState& s0) {
  if (s0.xi.size() != 2 * hq.n) {
    throw DimensionMismatch("integrate_flow: state length " + std::to_string(s0.xi.size()) +
                            " for n = " + std::to_string(hq.n));
  }
  const auto rhs = [&](double tau, const Vec& xi) { return hamilton_rhs(hq, tau, PhaseState{xi}); };
  std::vector<Vec> out;
  out.reserve(grid.size());
  Vec xi = s0.xi;
  out.push_back(xi);
  for (std::size_t i = 0; i < grid.steps; ++i) {
    xi = rk4_step(rhs, grid.tau(i), xi, grid.step);
    if (!xi.all_finite()) throw Diverged("Hamilton flow diverged", grid.tau(i + 1));
    out.push_back(xi);
  }
  return out;
}

}  // namespace mmt
