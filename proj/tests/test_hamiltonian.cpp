#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "mmt/error.hpp"
#include "mmt/hamiltonian.hpp"
#include "mmt/metrics.hpp"

using namespace mmt;

namespace {

Grid grid(double h, double tau_max) {
  return Grid{0.0, h, static_cast<std::size_t>(std::llround(tau_max / h))};
}

Mat random_symmetric(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Mat m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) m(i, j) = m(j, i) = u(rng);
  return m;
}

double max_diff(const std::vector<Vec>& a, const std::vector<Vec>& b) {
  double w = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) w = std::max(w, (a[i] - b[i]).max_abs());
  return w;
}

// Central-difference gradient of a scalar function of ξ.
template <class F>
Vec numeric_gradient(const F& f, const Vec& x, double h = 1e-6) {
  Vec g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    Vec p = x, q = x;
    p[i] += h;
    q[i] -= h;
    g[i] = (f(p) - f(q)) / (2 * h);
  }
  return g;
}

}  // namespace

TEST_CASE("hamilton_rhs examples") {
  QuadHamiltonian osc;
  osc.n = 1;
  osc.coeff = [](double) { return Mat::identity(2); };
  CHECK(hamilton_rhs(osc, 0.0, PhaseState{Vec{1.0, 0.0}}) == Vec{0.0, -1.0});

  QuadHamiltonian zero;
  zero.n = 2;
  zero.coeff = [](double) { return Mat(4, 4); };
  CHECK(hamilton_rhs(zero, 0.0, PhaseState{Vec{1, 2, 3, 4}}).max_abs() == 0.0);

  CHECK_THROWS_AS(hamilton_rhs(osc, 0.0, PhaseState{Vec{1, 2, 3}}), DimensionMismatch);
}

TEST_CASE("first-order Jacobi Hamiltonian gives dζ^A/dτ = V_{A;C} ζ^C") {
  const Mat v{{0.1, 0.7, -0.3}, {0.2, 0.0, 0.5}, {-0.4, 0.6, 0.9}};  // V_{A;C}
  const QuadHamiltonian h = build_jacobi_H_first_order([&](double) { return v.transpose(); }, 3);
  const Vec zeta{1.0, -2.0, 0.5}, pi{0.3, 0.1, -0.7};
  Vec xi(6);
  for (std::size_t i = 0; i < 3; ++i) {
    xi[i] = zeta[i];
    xi[3 + i] = pi[i];
  }
  const Vec rhs = hamilton_rhs(h, 0.0, PhaseState{xi});
  const Vec expect = matvec(v, zeta);
  for (std::size_t i = 0; i < 3; ++i) CHECK(rhs[i] == doctest::Approx(expect[i]).epsilon(1e-15));
  // dπ^C/dτ = -∂H/∂ζ^C = -(M π)_C
  const Vec dpi = -matvec(v.transpose(), pi);
  for (std::size_t i = 0; i < 3; ++i) CHECK(rhs[3 + i] == doctest::Approx(dpi[i]).epsilon(1e-15));
  CHECK(h.coeff(0.0) == h.coeff(0.0).transpose());
  CHECK(h.kind == HamiltonianKind::JacobiFirstOrder);
}

TEST_CASE("first-order flows") {
  SUBCASE("M = 0 is static") {
    const auto h = build_jacobi_H_first_order([](double) { return Mat(2, 2); }, 2);
    const auto f = integrate_flow(h, grid(1e-2, 1.0), PhaseState{Vec{1, 2, 3, 4}});
    CHECK(f.back() == Vec{1, 2, 3, 4});
  }
  SUBCASE("M = mu I is exponential") {
    const double mu = -0.6;
    const auto h = build_jacobi_H_first_order([mu](double) { return mu * Mat::identity(2); }, 2);
    const Grid g = grid(1e-3, 4.0);
    const auto f = integrate_flow(h, g, PhaseState{Vec{1.0, -0.5, 0.2, 0.3}});
    double w = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
      const double e = std::exp(mu * g.tau(i));
      w = std::max(w, std::abs(f[i][0] - e * 1.0));
      w = std::max(w, std::abs(f[i][1] + e * 0.5));
      w = std::max(w, std::abs(f[i][2] - 0.2 / e));
    }
    CHECK(w <= 1e-8);
  }
  SUBCASE("antisymmetric M conserves |ζ|") {
    const Mat a{{0.0, 0.8, -0.2}, {-0.8, 0.0, 0.5}, {0.2, -0.5, 0.0}};
    const auto h = build_jacobi_H_first_order([&](double) { return a; }, 3);
    const auto f = integrate_flow(h, grid(1e-3, 5.0), PhaseState{Vec{1, 2, -1, 0, 0, 0}});
    const double n0 = std::sqrt(6.0);
    double w = 0.0;
    for (const Vec& x : f) w = std::max(w, std::abs(std::hypot(x[0], x[1], x[2]) - n0));
    CHECK(w <= 1e-10);
  }
}

TEST_CASE("second-order Jacobi Hamiltonian") {
  SUBCASE("flat curvature gives free motion") {
    const auto fc = FrameCurvature::constant(Mat(3, 3), 0.0, 1e-2, 101);
    const auto h = build_jacobi_H_second_order(fc);
    Mat expect(6, 6);
    expect.set_block(3, 3, Mat::identity(3));
    CHECK(h.coeff(0.5) == expect);
    const auto f = integrate_flow(h, grid(1e-2, 1.0), PhaseState{Vec{0, 0, 0, 1, 2, 3}});
    CHECK((f.back() - Vec{1, 2, 3, 1, 2, 3}).max_abs() <= 1e-13);
  }
  SUBCASE("K I gives the oscillator system") {
    const double K = 2.5;
    const auto fc = FrameCurvature::constant(K * Mat::identity(2), 0.0, 1e-2, 11);
    const auto h = build_jacobi_H_second_order(fc);
    const Vec rhs = hamilton_rhs(h, 0.05, PhaseState{Vec{1.0, -2.0, 0.3, 0.4}});
    CHECK(rhs == Vec{0.3, 0.4, -K * 1.0, K * 2.0});
  }
  SUBCASE("empty curvature is rejected") {
    CHECK_THROWS_AS(build_jacobi_H_second_order(FrameCurvature{}), InvalidArgument);
  }
}

TEST_CASE("Hamilton flow reproduces the Jacobi integration on a Schwarzschild radial geodesic") {
  const Metric m = metrics::schwarzschild(1.0);
  const double r0 = 10.0, f = 1.0 - 2.0 / r0, h = 1e-3;
  const CurveSampling c = integrate_geodesic(m, Point{0.0, r0, std::numbers::pi / 2, 0.0},
                                             Vec{1.0 / std::sqrt(f), 0.0, 0.0, 0.0}, h, 3000);
  const FrameCurvature fc = sample_frame_curvature(m, c);
  const Vec z0{1.0, 0.5, -0.2}, zd0{0.0, 0.1, 0.3};
  const JacobiTrajectory j = integrate_jacobi_geodesic(fc, z0, zd0);
  const auto flow = integrate_flow(build_jacobi_H_second_order(fc), Grid{0.0, h, 3000},
                                   PhaseState{Vec{1.0, 0.5, -0.2, 0.0, 0.1, 0.3}});
  double w = 0.0;
  for (std::size_t i = 0; i < flow.size(); ++i)
    for (std::size_t a = 0; a < 3; ++a) {
      w = std::max(w, std::abs(flow[i][a] - j.position[i][a]));
      w = std::max(w, std::abs(flow[i][3 + a] - j.velocity[i][a]));
    }
  CHECK(w <= 1e-8);
}

TEST_CASE("constant-curvature target") {
  SUBCASE("K = 1 components oscillate") {
    const auto h = build_target_C_constant(ConstantCurvatureSpec::uniform(1.0, 2));
    CHECK(h.constant_in_tau);
    const Grid g = grid(1e-3, 6.0);
    const auto f = integrate_flow(h, g, PhaseState{Vec{0.0, 1.0, 1.0, 0.0}});
    double w = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
      w = std::max(w, std::abs(f[i][0] - std::sin(g.tau(i))));
      w = std::max(w, std::abs(f[i][1] - std::cos(g.tau(i))));
    }
    CHECK(w <= 1e-8);
  }
  SUBCASE("K = 0 is free motion") {
    const auto h = build_target_C_constant(ConstantCurvatureSpec::uniform(0.0, 1));
    const auto f = integrate_flow(h, grid(1e-2, 2.0), PhaseState{Vec{1.0, 0.5}});
    CHECK((f.back() - Vec{2.0, 0.5}).max_abs() <= 1e-13);
  }
  SUBCASE("K = (1, -1): oscillation and cosh growth") {
    const auto h = build_target_C_constant(ConstantCurvatureSpec{{1.0, -1.0}});
    const Grid g = grid(1e-3, 3.0);
    const auto f = integrate_flow(h, g, PhaseState{Vec{1.0, 1.0, 0.0, 0.0}});
    double w = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
      w = std::max(w, std::abs(f[i][0] - std::cos(g.tau(i))));
      w = std::max(w, std::abs(f[i][1] - std::cosh(g.tau(i))));
    }
    CHECK(w <= 1e-6);
  }
}

TEST_CASE("energy is conserved for tau-constant coefficients") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 5; ++trial) {
    const Mat hm = random_symmetric(rng, 4);
    QuadHamiltonian h;
    h.n = 2;
    h.constant_in_tau = true;
    h.coeff = [hm](double) { return hm; };
    const PhaseState s0{Vec{0.3, -0.2, 0.5, 0.1}};
    const auto f = integrate_flow(h, grid(1e-3, 5.0), s0);
    const double e0 = energy(h, 0.0, s0);
    double w = 0.0;
    for (const Vec& x : f) w = std::max(w, std::abs(energy(h, 0.0, PhaseState{x}) - e0));
    CHECK(w <= 1e-8);
  }
}

TEST_CASE("hamilton_rhs is linear in the state") {
  std::mt19937_64 rng(43);
  const Mat hm = random_symmetric(rng, 6);
  QuadHamiltonian h;
  h.n = 3;
  h.coeff = [hm](double tau) { return (1.0 + tau) * hm; };
  const Vec x{1, 2, 3, 4, 5, 6}, y{-1, 0.5, 2, 0, 1, -3};
  const double a = 0.3, b = -2.0;
  const Vec lhs = hamilton_rhs(h, 0.7, PhaseState{a * x + b * y});
  const Vec rhs = a * hamilton_rhs(h, 0.7, PhaseState{x}) + b * hamilton_rhs(h, 0.7, PhaseState{y});
  CHECK((lhs - rhs).max_abs() <= 1e-12);
}

TEST_CASE("metric Hamiltonians") {
  SUBCASE("second order with G = I is the isotropic oscillator") {
    const auto h = build_metric_H_second_order([](double) { return Mat::identity(2); }, 2, true);
    CHECK(h.coeff(0.0) == Mat::identity(4));
  }
  SUBCASE("second order with constant diag(b) equals the constant-curvature target") {
    const Vec b{0.5, -1.5, 2.0};
    const auto h = build_metric_H_second_order([&](double) { return Mat::diagonal(b); }, 3, true);
    const auto c = build_target_C_constant(ConstantCurvatureSpec{{0.5, -1.5, 2.0}});
    CHECK(h.coeff(1.0) == c.coeff(1.0));
  }
  SUBCASE("second order rejects an asymmetric G") {
    CHECK_THROWS_AS(build_metric_H_second_order([](double) { return Mat{{0, 1}, {0, 0}}; }, 2),
                    InvalidArgument);
  }
  SUBCASE("tau-dependent G = (1 + tau^2) I against a step-halved integration") {
    const auto h =
        build_metric_H_second_order([](double t) { return Mat{{1.0 + t * t}}; }, 1);
    const PhaseState s0{Vec{1.0, 0.0}};
    const auto coarse = integrate_flow(h, grid(1e-2, 3.0), s0);
    const auto fine = integrate_flow(h, grid(5e-3, 3.0), s0);
    CHECK((coarse.back() - fine.back()).max_abs() <= 1e-6);
  }
  SUBCASE("quadratic form has a degenerate flow") {
    const auto h = build_metric_quadratic_form([](double) { return Mat::identity(1); }, 1);
    CHECK(h.kind == HamiltonianKind::MetricQuadraticForm);
    CHECK(hamilton_rhs(h, 0.0, PhaseState{Vec{2.0, 5.0}}) == Vec{0.0, -2.0});
    const auto g = build_metric_quadratic_form([](double) { return Mat{{1, 2}, {2, 3}}; }, 2);
    const Vec r = hamilton_rhs(g, 0.0, PhaseState{Vec{1, 2, 3, 4}});
    CHECK(r[0] == 0.0);
    CHECK(r[1] == 0.0);
    CHECK(coefficient_X(g, 0.3) == g.coeff(0.3));
  }
  SUBCASE("first order with G = I matches the Jacobi first-order builder with M = I") {
    const auto a = build_metric_H_first_order([](double) { return Mat::identity(2); }, 2);
    const auto b = build_jacobi_H_first_order([](double) { return Mat::identity(2); }, 2);
    CHECK(a.coeff(0.0) == b.coeff(0.0));
  }
  SUBCASE("first order with asymmetric G is symmetric as a 2n x 2n matrix") {
    const Mat g{{0, 1}, {0, 0}};
    const auto h = build_metric_H_first_order([&](double) { return g; }, 2);
    const Mat c = h.coeff(0.0);
    CHECK(c == c.transpose());
    CHECK(c.block(0, 2, 2, 2) == g.transpose());
    // hamilton_rhs agrees with J times the numerical gradient of H.
    const Vec xi{0.4, -1.0, 0.7, 2.0};
    const auto energy_of = [&](const Vec& x) { return energy(h, 0.0, PhaseState{x}); };
    const Vec grad = numeric_gradient(energy_of, xi);
    const Vec expect = SymplecticForm(2).apply(grad);
    CHECK((hamilton_rhs(h, 0.0, PhaseState{xi}) - expect).max_abs() <= 1e-8);
  }
}

TEST_CASE("coefficient_X") {
  const auto c = build_target_C_constant(ConstantCurvatureSpec::uniform(1.0, 2));
  CHECK(coefficient_X(c, 0.0) == c.coeff(0.0));
  CHECK(coefficient_X(c, 9.0) == c.coeff(0.0));

  // H(ξ) = base + α q² e₀e₀ᵀ, a quartic correction to a quadratic form.
  const double alpha = 0.3;
  const Mat base{{1.0, 0.2}, {0.2, 0.5}};
  QuadHamiltonian q;
  q.n = 1;
  q.coeff = [base](double) { return base; };
  q.state_dependent_coeff = [base, alpha](double, const Vec& xi) {
    Mat h = base;
    h(0, 0) += alpha * xi[0] * xi[0];
    return h;
  };
  q.state_dependent_gradient = [alpha](double, const Vec& xi) {
    Mat c(2, 2);
    c(0, 0) = 2.0 * alpha * xi[0] * xi[0];  // Σ_i ∂H_{i0}/∂ξ^0 ξ^i
    return c;
  };
  const PhaseState ref{Vec{0.8, -0.4}};
  CHECK_THROWS_AS(coefficient_X(q, 0.0), InvalidArgument);
  const Mat x = coefficient_X(q, 0.0, ref);
  const auto full_energy = [&](const Vec& v) {
    Mat h = base;
    h(0, 0) += alpha * v[0] * v[0];
    return 0.5 * dot(v, matvec(h, v));
  };
  CHECK((matvec(x, ref.xi) - numeric_gradient(full_energy, ref.xi)).max_abs() <= 1e-7);
  CHECK((hamilton_rhs(q, 0.0, ref) - SymplecticForm(1).apply(matvec(x, ref.xi))).max_abs() == 0.0);
}

TEST_CASE("integrate_flow reports divergence with the tau of failure") {
  QuadHamiltonian h;
  h.n = 1;
  h.coeff = [](double) { return Mat{{-1e200, 0}, {0, 1e200}}; };
  try {
    integrate_flow(h, grid(1.0, 10.0), PhaseState{Vec{1.0, 1.0}});
    FAIL("expected Diverged");
  } catch (const Diverged& e) {
    CHECK(e.tau() > 0.0);
  }
}

TEST_CASE("kind names") {
  CHECK(to_string(HamiltonianKind::JacobiSecondOrder) == "jacobi-second-order");
  CHECK(to_string(HamiltonianKind::MetricFirstOrder) == "metric-first-order");
  CHECK(to_string(HamiltonianKind::TargetConstant) == "target-constant");
}
