// Acceptance run: one PASS/FAIL line per criterion, measured values in
// brackets. Exit status is 0 only when every criterion passes.

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mmt/config.hpp"
#include "mmt/hamiltonian.hpp"
#include "mmt/metrics.hpp"
#include "mmt/scenario.hpp"
#include "mmt/transfer.hpp"
#include "mmt/transport.hpp"

using namespace mmt;
namespace fs = std::filesystem;

namespace {

struct Criterion {
  bool ok = true;
  std::string detail;

  void check(const std::string& name, double value, bool pass) {
    ok = ok && pass;
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s%s=%.3g%s", detail.empty() ? "" : ", ", name.c_str(), value,
                  pass ? "" : "(!)");
    detail += buf;
  }
  void check(const std::string& name, bool pass) {
    ok = ok && pass;
    detail += (detail.empty() ? "" : ", ") + name + (pass ? "" : "(!)");
  }
};

int report(int id, const char* title, const std::function<void(Criterion&)>& body) {
  Criterion c;
  try {
    body(c);
  } catch (const std::exception& e) {
    c.ok = false;
    c.detail += std::string(c.detail.empty() ? "" : ", ") + "exception: " + e.what();
  }
  std::printf("criterion %d %s: %s [%s]\n", id, title, c.ok ? "PASS" : "FAIL", c.detail.c_str());
  std::fflush(stdout);
  return c.ok ? 0 : 1;
}

double max_diff(const Tensor4& a, const Tensor4& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.values().size(); ++i)
    m = std::max(m, std::abs(a.values()[i] - b.values()[i]));
  return m;
}

double symmetry_defect(const Tensor4& k) {
  const std::size_t d = k.dim();
  const double scale = k.max_abs();
  double w = 0.0;
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b)
      for (std::size_t c = 0; c < d; ++c)
        for (std::size_t e = 0; e < d; ++e) {
          w = std::max(w, std::abs(k(a, b, c, e) + k(b, a, c, e)));
          w = std::max(w, std::abs(k(a, b, c, e) + k(a, b, e, c)));
          w = std::max(w, std::abs(k(a, b, c, e) - k(c, e, a, b)));
          w = std::max(w, std::abs(k(a, b, c, e) + k(a, c, e, b) + k(a, e, b, c)));
        }
  return w / scale;
}

double curve_drift(const Metric& m, const CurveSampling& c) {
  double w = 0.0;
  for (const auto& s : c.states) w = std::max({w, norm_drift(m, s), frame_drift(m, s)});
  return w;
}

Grid grid_to(double h, double tau_max) {
  return Grid{0.0, h, static_cast<std::size_t>(std::llround(tau_max / h))};
}

QuadHamiltonian constant_K(double K, std::size_t n) {
  return build_target_C_constant(ConstantCurvatureSpec::uniform(K, n));
}

TransferProblem problem(QuadHamiltonian src, QuadHamiltonian tgt, const Grid& g) {
  const Mat t0 = Mat::identity(2 * src.n);
  return TransferProblem{std::move(src), std::move(tgt), t0, g};
}

double max_mapping(const TransferProblem& p, const TransferSolution& sol) {
  double w = 0.0;
  for (std::size_t i = 0; i < 2 * p.n(); ++i) {
    Vec e(2 * p.n());
    e[i] = 1.0;
    w = std::max(w, verify_solution_mapping(p, sol, PhaseState{e}).max_residual);
  }
  return w;
}

Mat random_symmetric(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  Mat m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) m(i, j) = m(j, i) = u(rng);
  return m;
}

ScenarioConfig template_config(const std::string& name) {
  for (const auto& t : scenario_templates())
    if (t.name == name) return parse_config(t.text);
  throw std::runtime_error("no template " + name);
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int run_cli(const std::string& args) {
  const std::string cmd = "\"" MMT_CLI_PATH "\" " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

int main() {
  int failures = 0;

  failures += report(1, "geometry", [](Criterion& c) {
    const Metric flat = metrics::minkowski(4);
    c.check("flat Riemann", riemann(flat, Point{0.3, -1, 2, 0.5}).components.max_abs(),
            riemann(flat, Point{0.3, -1, 2, 0.5}).components.max_abs() <= 1e-10);

    const Metric s2 = metrics::numeric_only(metrics::sphere(1.0));
    double sphere = 0.0;
    for (double th : {0.4, 1.0, 2.2}) {
      const Point x{th, 0.7};
      const Tensor4 low = lower_first_index(riemann(s2, x), s2.at(x));
      sphere = std::max(sphere, std::abs(low(0, 1, 0, 1) - std::sin(th) * std::sin(th)));
    }
    c.check("sphere", sphere, sphere <= 1e-5);

    double cc = 0.0;
    for (double K : {1.0, -0.5, 2.0}) {
      const Metric m = metrics::numeric_only(metrics::constant_curvature(4, K));
      const Point x{0.1, 0.2, -0.15, 0.05};
      const Mat g = m.at(x);
      Tensor4 closed(4);
      for (std::size_t a = 0; a < 4; ++a)
        for (std::size_t b = 0; b < 4; ++b)
          for (std::size_t o = 0; o < 4; ++o)
            for (std::size_t q = 0; q < 4; ++q)
              closed(a, b, o, q) = K * (g(a, q) * g(b, o) - g(a, o) * g(b, q));
      cc = std::max(cc, max_diff(lower_first_index(riemann(m, x), g), closed));
    }
    c.check("constant curvature", cc, cc <= 1e-5);

    double sym = 0.0;
    for (const Metric& m : {metrics::schwarzschild(1.0), metrics::numeric_only(metrics::schwarzschild(1.0))})
      for (double r : {6.0, 10.0, 20.0}) {
        const Point x{0.0, r, 1.2, 0.4};
        sym = std::max(sym, symmetry_defect(lower_first_index(riemann(m, x), m.at(x))));
      }
    c.check("Schwarzschild symmetries", sym, sym <= 1e-5);
  });

  failures += report(2, "transport", [](Criterion& c) {
    const Metric m = metrics::schwarzschild(1.0);
    const double r = 10.0;
    const double ut = 1.0 / std::sqrt(1.0 - 3.0 / r);
    const CurveSampling circ = integrate_geodesic(
        m, Point{0.0, r, std::numbers::pi / 2, 0.0}, Vec{ut, 0.0, 0.0, std::sqrt(1.0 / (r * r * r)) * ut},
        1e-3, 10000);
    c.check("circular drift", curve_drift(m, circ), curve_drift(m, circ) <= 1e-8);
    const CurveSampling radial = integrate_geodesic(m, Point{0.0, r, std::numbers::pi / 2, 0.0},
                                                    Vec{1.0 / std::sqrt(1.0 - 2.0 / r), 0, 0, 0},
                                                    1e-3, 10000);
    c.check("radial drift", curve_drift(m, radial), curve_drift(m, radial) <= 1e-8);

    const Point x0{0.0, 8.0, 1.3, 0.0};
    const Vec v0 = normalize_timelike(m, x0, Vec{1.0, 0.01, 0.002, 0.03});
    const AccelerationField zero = [](const Point& x, const Vec&) { return Vec(x.size()); };
    const CurveSampling g = integrate_geodesic(m, x0, v0, 1e-2, 500);
    const CurveSampling a = integrate_accelerated_curve(m, x0, v0, zero, 1e-2, 500);
    double fw = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
      fw = std::max({fw, (g.states[i].x - a.states[i].x).max_abs(),
                     (g.states[i].frame.E - a.states[i].frame.E).max_abs()});
    c.check("FW vs parallel", fw, fw <= 1e-12);

    // Straight line of flat 2+1 space in polar coordinates.
    const Metric polar = metrics::diagonal({"-1", "1", "x1^2"}, metrics::lorentzian(3));
    const double tau_end = 8.0;
    auto err = [&](double h) {
      const auto steps = static_cast<std::size_t>(std::llround(tau_end / h));
      const CurveState s =
          integrate_geodesic(polar, Point{0, 1, 0}, Vec{1.25, 0, 0.75}, h, steps).states.back();
      const double y = 0.75 * tau_end;
      return (s.x - Point{1.25 * tau_end, std::sqrt(1 + y * y), std::atan(y)}).max_abs();
    };
    const double ratio = err(0.2) / err(0.1);
    c.check("RK4 ratio", ratio, ratio >= 12 && ratio <= 20);
  });

  failures += report(3, "frame curvature", [](Criterion& c) {
    double cc = 0.0;
    for (double K : {1.0, -0.5}) {
      const Metric m = metrics::constant_curvature(4, K);
      const Point x0{0.05, 0.1, -0.1, 0.02};
      const Vec v0 = normalize_timelike(m, x0, Vec{1.0, 0.3, -0.2, 0.1});
      const FrameCurvature fc = sample_frame_curvature(m, integrate_geodesic(m, x0, v0, 1e-2, 100));
      for (const Mat& k : fc.samples) cc = std::max(cc, (k - K * Mat::identity(3)).max_abs());
    }
    c.check("K delta", cc, cc <= 1e-5);

    const Metric s = metrics::schwarzschild(1.0);
    double trace = 0.0;
    const double ut = 1.0 / std::sqrt(1.0 - 3.0 / 10.0);
    for (const Vec& v0 : {Vec{1.0 / std::sqrt(0.8), 0, 0, 0}, Vec{ut, 0, 0, std::sqrt(1e-3) * ut}}) {
      const FrameCurvature fc = sample_frame_curvature(
          s, integrate_geodesic(s, Point{0.0, 10.0, std::numbers::pi / 2, 0.0}, v0, 1e-2, 500));
      for (const Mat& k : fc.samples) trace = std::max(trace, std::abs(k(0, 0) + k(1, 1) + k(2, 2)));
    }
    c.check("Schwarzschild trace", trace, trace <= 1e-4);
  });

  failures += report(4, "Jacobi", [](Criterion& c) {
    const double h = 1e-3;
    const auto osc = integrate_jacobi_geodesic(FrameCurvature::constant(Mat::identity(3), 0, h, 10001),
                                               Vec{1, 0, 0}, Vec{0, 1, 0});
    double w = 0.0;
    for (std::size_t i = 0; i < osc.size(); ++i) {
      const double t = h * i;
      w = std::max({w, std::abs(osc.position[i][0] - std::cos(t)),
                    std::abs(osc.position[i][1] - std::sin(t))});
    }
    c.check("sin/cos", w, w <= 1e-8);

    const auto hyp = integrate_jacobi_geodesic(FrameCurvature::constant(-Mat::identity(3), 0, h, 3001),
                                               Vec{1, 0, 0}, Vec{0, 1, 0});
    double wh = 0.0;
    for (std::size_t i = 0; i < hyp.size(); ++i) {
      const double t = h * i;
      wh = std::max({wh, std::abs(hyp.position[i][0] - std::cosh(t)),
                     std::abs(hyp.position[i][1] - std::sinh(t))});
    }
    c.check("sinh/cosh", wh, wh <= 1e-6);

    const auto fc = FrameCurvature::constant(Mat{{0.3, 0.1, 0}, {0.1, -0.2, 0}, {0, 0, 0.5}}, 0, h, 2001);
    CongruenceData zero;
    zero.M_of_tau = [](double) { return Mat(3, 3); };
    zero.a_of_tau = [](double) { return Vec(3); };
    zero.gradient_a = [](double) { return Mat(3, 3); };
    const auto g = integrate_jacobi_geodesic(fc, Vec{1, 2, 3}, Vec{-1, 0, 1});
    const auto ng = integrate_jacobi_nongeodesic(fc, zero, Vec{1, 2, 3}, Vec{-1, 0, 1});
    double wz = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
      wz = std::max({wz, (g.position[i] - ng.position[i]).max_abs(),
                     (g.velocity[i] - ng.velocity[i]).max_abs()});
    c.check("zero congruence", wz, wz <= 1e-12);

    const double mu = 0.4;
    CongruenceData d = zero;
    d.M_of_tau = [mu](double) { return mu * Mat::identity(3); };
    const Vec z0{1, -2, 0.5};
    const auto z = integrate_deviation_first_order(d, 0.0, h, 5000, z0);
    double we = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i)
      we = std::max(we, (z[i] - std::exp(mu * h * i) * z0).max_abs());
    c.check("exponential", we, we <= 1e-8);
  });

  failures += report(5, "Hamiltonian consistency", [](Criterion& c) {
    const Metric m = metrics::schwarzschild(1.0);
    const double h = 1e-3;
    const CurveSampling curve = integrate_geodesic(m, Point{0.0, 10.0, std::numbers::pi / 2, 0.0},
                                                   Vec{1.0 / std::sqrt(0.8), 0, 0, 0}, h, 3000);
    const FrameCurvature fc = sample_frame_curvature(m, curve);
    const JacobiTrajectory j = integrate_jacobi_geodesic(fc, Vec{1.0, 0.5, -0.2}, Vec{0.0, 0.1, 0.3});
    const auto flow = integrate_flow(build_jacobi_H_second_order(fc), Grid{0.0, h, 3000},
                                     PhaseState{Vec{1.0, 0.5, -0.2, 0.0, 0.1, 0.3}});
    double w = 0.0;
    for (std::size_t i = 0; i < flow.size(); ++i)
      for (std::size_t a = 0; a < 3; ++a)
        w = std::max({w, std::abs(flow[i][a] - j.position[i][a]),
                      std::abs(flow[i][3 + a] - j.velocity[i][a])});
    c.check("flow vs Jacobi", w, w <= 1e-8);

    std::mt19937_64 rng(7);
    double we = 0.0;
    for (int trial = 0; trial < 3; ++trial) {
      const Mat k = random_symmetric(rng, 2, 0.2, 0.6) + Mat::identity(2);
      const auto hq = build_metric_H_second_order([k](double) { return k; }, 2, true);
      const PhaseState s0{Vec{0.3, -0.2, 0.5, 0.1}};
      const double e0 = energy(hq, 0.0, s0);
      for (const Vec& x : integrate_flow(hq, grid_to(1e-3, 5.0), s0))
        we = std::max(we, std::abs(energy(hq, 0.0, PhaseState{x}) - e0));
    }
    c.check("energy", we, we <= 1e-8);

    // dζ^A/dτ = V_{A;C} ζ^C with M_{AC} = V_{C;A}.
    const Mat v{{0.1, 0.7, -0.3}, {0.2, 0.0, 0.5}, {-0.4, 0.6, 0.9}};
    const auto fo = build_jacobi_H_first_order([&](double) { return v.transpose(); }, 3);
    const Vec rhs = hamilton_rhs(fo, 0.0, PhaseState{Vec{1.0, -2.0, 0.5, 0.3, 0.1, -0.7}});
    const Vec want = matvec(v, Vec{1.0, -2.0, 0.5});
    double wf = 0.0;
    for (std::size_t a = 0; a < 3; ++a) wf = std::max(wf, std::abs(rhs[a] - want[a]));
    c.check("first-order literal", wf, wf <= 1e-15);
  });

  failures += report(6, "transfer", [](Criterion& c) {
    const Grid g = grid_to(1e-3, 5.0);

    // (a) source = target: T stays I.
    {
      const Metric m = metrics::schwarzschild(1.0);
      const FrameCurvature fc = sample_frame_curvature(
          m, integrate_geodesic(m, Point{0.0, 10.0, std::numbers::pi / 2, 0.0},
                                Vec{1.0 / std::sqrt(0.8), 0, 0, 0}, g.step, g.steps));
      const QuadHamiltonian hj = build_jacobi_H_second_order(fc);
      double w = 0.0;
      for (const auto& p : {problem(hj, hj, g), problem(constant_K(1.0, 3), constant_K(1.0, 3), g)})
        for (const Mat& t : integrate_T_direct(p).T) w = std::max(w, (t - Mat::identity(6)).max_abs());
      c.check("(a) T=I", w, w <= 1e-12);
    }

    // (b) direct vs factorized.
    {
      double w = 0.0;
      w = std::max(w, max_discrepancy(integrate_T_direct(problem(constant_K(0, 3), constant_K(1, 3), g)).T,
                                      integrate_T_factorized(problem(constant_K(0, 3), constant_K(1, 3), g)).T));
      w = std::max(w, max_discrepancy(integrate_T_direct(problem(constant_K(2, 3), constant_K(1, 3), g)).T,
                                      integrate_T_factorized(problem(constant_K(2, 3), constant_K(1, 3), g)).T));
      std::mt19937_64 rng(2024);
      for (int trial = 0; trial < 5; ++trial) {
        const Mat a = random_symmetric(rng, 2, -1, 1), b = random_symmetric(rng, 2, -1, 1);
        const auto p = problem(build_metric_H_second_order([a](double) { return a; }, 2, true),
                               build_metric_H_second_order([b](double) { return b; }, 2, true),
                               grid_to(1e-3, 2.0));
        w = std::max(w, max_discrepancy(integrate_T_direct(p).T, integrate_T_factorized(p).T));
      }
      c.check("(b) direct vs SAR", w, w <= 1e-6);
    }

    // (c) mapping residuals and second-order decay.
    double analytic = 0.0;
    for (const auto& [ks, kt] : {std::pair{0.0, 1.0}, {2.0, 1.0}, {-1.0, 0.5}}) {
      const auto p = problem(constant_K(ks, 3), constant_K(kt, 3), g);
      analytic = std::max(analytic, max_mapping(p, integrate_T_direct(p)));
    }
    c.check("(c) analytic mapping", analytic, analytic <= 1e-5);

    const ScenarioReport head = run_scenario(template_config("schwarzschild-to-sphere"));
    c.check("(c) headline mapping", head.summary.max_mapping_residual,
            head.summary.max_mapping_residual <= 1e-4);
    ScenarioConfig coarse_cfg = template_config("schwarzschild-to-sphere");
    coarse_cfg.h = 2e-3;
    const double decay = run_scenario(coarse_cfg).summary.max_mapping_residual /
                         head.summary.max_mapping_residual;
    c.check("(c) decay ratio", decay, decay >= 3.5 && decay <= 4.5);

    // (d) non-symplecticity on flat -> K = 1 with T0 = I.
    const auto p = problem(constant_K(0, 3), constant_K(1, 3), g);
    const TransferSolution sol = integrate_T_direct(p);
    double defect = 0.0;
    for (double d : sol.symplectic_defect) defect = std::max(defect, d);
    const double mapping = max_mapping(p, sol);
    c.check("(d) max symplectic defect", defect, defect > 1e-3);
    c.check("(d) mapping", mapping, mapping <= 1e-5);
  });

  failures += report(7, "CLI", [](Criterion& c) {
    const fs::path fixtures = fs::path(MMT_SOURCE_DIR) / "tests" / "fixtures";
    const fs::path out = fs::temp_directory_path() / "mmt_acceptance";
    fs::remove_all(out);
    const auto cfg = [&](const char* f) { return "\"" + (fixtures / f).string() + "\""; };
    const auto dir = [&](const char* d) { return " --out \"" + (out / d).string() + "\""; };

    const int pass = run_cli("run " + cfg("pass.cfg") + dir("a"));
    const int again = run_cli("run " + cfg("pass.cfg") + dir("b"));
    bool identical = pass == 0 && again == 0;
    for (const char* f : {"samples.csv", "summary.json"})
      identical = identical && read_file(out / "a" / f) == read_file(out / "b" / f) &&
                  !read_file(out / "a" / f).empty();
    c.check("byte-identical", identical);

    bool strict = true;
    for (const char* bad : {"targett.K = 1\n", "target.K = 2\n", "source.metric = minkowski\n",
                            "integration.h = (1e-3\n"}) {
      const std::string text = read_file(fixtures / "pass.cfg") + bad;
      try {
        parse_config(text);
        strict = false;
      } catch (const ConfigError& e) {
        strict = strict && e.line() == 10;
      }
    }
    c.check("strict rejection", strict);

    const int fail = run_cli("run " + cfg("tolerance_fail.cfg") + dir("c"));
    const int error = run_cli("run " + cfg("error.cfg") + dir("d"));
    c.check("exit codes 0/2/1", pass == 0 && fail == 2 && error == 1);
    fs::remove_all(out);
  });

  return failures == 0 ? 0 : 1;
}
