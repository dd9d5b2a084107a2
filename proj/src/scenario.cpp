#include "mmt/scenario.hpp"

#include <algorithm>
#include <future>
#include <fstream>
#include "json.hpp"

#include "mmt/expression.hpp"
#include "mmt/hamiltonian.hpp"
#include "mmt/metrics.hpp"
#include "mmt/transfer.hpp"
#include "mmt/transport.hpp"

namespace mmt {

namespace {

template <class F>
auto in_stage(const char* stage, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(stage, e.what());
  }
}

void require_params(const SideConfig& s, std::size_t count, const std::string& what) {
  if (s.params.size() != count) {
    throw InvalidArgument("'" + what + "' takes " + std::to_string(count) + " parameter" +
                          (count == 1 ? "" : "s") + ", got " + std::to_string(s.params.size()));
  }
}

std::size_t dimension_param(double x) {
  if (x < 2 || x > 16 || x != static_cast<double>(static_cast<std::size_t>(x)))
    throw InvalidArgument("dimension must be an integer in [2, 16], got " + format_double(x));
  return static_cast<std::size_t>(x);
}

struct Source {
  QuadHamiltonian h;
  std::vector<double> norm_drift;
  std::vector<double> frame_drift;
};

std::function<Mat(double)> expression_matrix(const std::vector<std::vector<std::string>>& rows) {
  const std::size_t n = rows.size();
  auto exprs = std::make_shared<std::vector<Expression>>();
  for (const auto& row : rows)
    for (const auto& e : row) exprs->emplace_back(e, std::vector<std::string>{"tau"});
  return [exprs, n](double tau) {
    Mat m(n, n);
    const double arg[1] = {tau};
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m(i, j) = (*exprs)[i * n + j](arg);
    return m;
  };
}

QuadHamiltonian analytic_hamiltonian(const SideConfig& s) {
  const std::size_t n = *s.n;
  if (s.kind == "constant-curvature") return build_target_C_constant(ConstantCurvatureSpec{s.K});

  std::function<Mat(double)> g;
  bool constant = false;
  if (!s.b.empty()) {
    const Mat d = Mat::diagonal(Vec(s.b));
    g = [d](double) { return d; };
    constant = true;
  } else {
    g = expression_matrix(s.G);
  }
  if (s.kind == "metric-second-order") return build_metric_H_second_order(g, n, constant);
  if (s.kind == "metric-quadratic-form") return build_metric_quadratic_form(g, n, constant);
  return build_metric_H_first_order(g, n, constant);
}

Source build_source(const ScenarioConfig& cfg, const Grid& grid) {
  const SideConfig& s = cfg.source;
  Source out;
  if (s.kind == "jacobi-second-order") {
    const Metric m = in_stage("geometry", [&] { return build_metric(s); });
    const CurveSampling curve = in_stage("transport", [&] {
      const Vec v0 = normalize_timelike(m, Point(s.x0), Vec(s.v0));
      return integrate_geodesic(m, Point(s.x0), v0, grid.step, grid.steps);
    });
    const FrameCurvature fc =
        in_stage("geometry", [&] { return sample_frame_curvature(m, curve); });
    for (const CurveState& st : curve.states) {
      out.norm_drift.push_back(mmt::norm_drift(m, st));
      out.frame_drift.push_back(mmt::frame_drift(m, st));
    }
    out.h = in_stage("hamiltonian", [&] { return build_jacobi_H_second_order(fc); });
    return out;
  }
  if (s.kind == "jacobi-first-order") {
    const congruences::Congruence c = in_stage("geometry", [&] { return build_congruence(s); });
    const CurveSampling curve = in_stage("transport", [&] {
      return integrate_accelerated_curve(c.metric, c.x0, c.v0, c.acceleration, grid.step,
                                         grid.steps);
    });
    for (const CurveState& st : curve.states) {
      out.norm_drift.push_back(mmt::norm_drift(c.metric, st));
      out.frame_drift.push_back(mmt::frame_drift(c.metric, st));
    }
    out.h = in_stage("hamiltonian", [&] {
      return build_jacobi_H_first_order(c.data.M_of_tau, c.metric.dim - 1);
    });
    return out;
  }
  out.norm_drift.assign(grid.size(), 0.0);
  out.frame_drift.assign(grid.size(), 0.0);
  out.h = in_stage("hamiltonian", [&] { return analytic_hamiltonian(s); });
  return out;
}

double column_max(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, x);
  return m;
}

}  // namespace

Metric build_metric(const SideConfig& s) {
  const std::string& name = s.metric;
  if (!s.signature.empty() && name != "constant-curvature" && name != "diagonal")
    throw InvalidArgument("metric '" + name + "' does not take a signature");
  if (!s.diag.empty() && name != "diagonal")
    throw InvalidArgument("metric '" + name + "' does not take diag");
  if (name == "minkowski") {
    require_params(s, 1, name);
    return metrics::minkowski(dimension_param(s.params[0]));
  }
  if (name == "schwarzschild") {
    require_params(s, 1, name);
    return metrics::schwarzschild(s.params[0]);
  }
  if (name == "constant-curvature") {
    require_params(s, 2, name);
    const std::size_t dim = dimension_param(s.params[0]);
    if (!s.signature.empty() && s.signature.size() != dim)
      throw InvalidArgument("signature has " + std::to_string(s.signature.size()) +
                            " entries, dimension is " + std::to_string(dim));
    return metrics::constant_curvature(dim, s.params[1], s.signature);
  }
  if (name == "sphere") {
    require_params(s, 1, name);
    return metrics::sphere(s.params[0]);
  }
  if (name == "diagonal") {
    require_params(s, 0, name);
    if (s.diag.empty()) throw InvalidArgument("metric 'diagonal' needs diag");
    if (s.signature.size() != s.diag.size())
      throw InvalidArgument("metric 'diagonal' needs a signature with one entry per component");
    return metrics::diagonal(s.diag, s.signature);
  }
  throw InvalidArgument("unknown metric '" + name + "'");
}

congruences::Congruence build_congruence(const SideConfig& s) {
  const std::string& name = s.congruence;
  if (name == "rindler") {
    require_params(s, 1, name);
    return congruences::rindler(s.params[0]);
  }
  if (name == "schwarzschild-static") {
    require_params(s, 2, name);
    return congruences::schwarzschild_static(s.params[0], s.params[1]);
  }
  throw InvalidArgument("unknown congruence '" + name + "'");
}

ScenarioSummary summarize(const ScenarioReport& r, double factorization_discrepancy) {
  const Tolerances& t = r.config.tolerance;
  ScenarioSummary s;
  s.max_ode_residual = column_max(r.ode_residual);
  s.max_mapping_residual = column_max(r.mapping_residual);
  s.max_symplectic_defect = column_max(r.symplectic_defect);
  s.max_norm_drift = column_max(r.norm_drift);
  s.max_frame_drift = column_max(r.frame_drift);
  s.factorization_discrepancy = factorization_discrepancy;
  s.ode_ok = s.max_ode_residual <= t.ode;
  s.mapping_ok = s.max_mapping_residual <= t.mapping;
  s.factorization_ok = s.factorization_discrepancy <= t.factorization;
  s.norm_drift_ok = s.max_norm_drift <= t.norm_drift;
  s.frame_drift_ok = s.max_frame_drift <= t.frame_drift;
  s.non_symplectic = s.max_symplectic_defect > t.symplectic_flag;
  s.pass = s.ode_ok && s.mapping_ok && s.factorization_ok && s.norm_drift_ok && s.frame_drift_ok;
  return s;
}

ScenarioReport run_scenario(const ScenarioConfig& cfg) {
  in_stage("config", [&] { validate_config(cfg); });
  const std::size_t n = cfg.n();
  const Grid grid{0.0, cfg.h, cfg.steps()};

  Source src = build_source(cfg, grid);
  const QuadHamiltonian target =
      in_stage("hamiltonian", [&] { return analytic_hamiltonian(cfg.target); });

  TransferProblem problem;
  problem.source = src.h;
  problem.target = target;
  problem.grid = grid;
  problem.T0 = cfg.T0.empty() ? Mat::identity(2 * n) : Mat(2 * n, 2 * n, cfg.T0);

  const TransferSolution direct = in_stage("transfer", [&] { return integrate_T_direct(problem); });
  const TransferSolution factored =
      in_stage("transfer", [&] { return integrate_T_factorized(problem); });
  const double discrepancy = in_stage("transfer", [&] { return max_discrepancy(direct.T, factored.T); });

  std::vector<Vec> states;
  if (cfg.verify_states.empty()) {
    for (std::size_t i = 0; i < 2 * n; ++i) {
      Vec e(2 * n);
      e[i] = 1.0;
      states.push_back(e);
    }
  } else {
    for (const auto& s : cfg.verify_states) states.emplace_back(s);
  }

  std::vector<std::future<MappingReport>> jobs;
  for (const Vec& s : states) {
    jobs.push_back(std::async(std::launch::async, [&problem, &direct, s] {
      return verify_solution_mapping(problem, direct, PhaseState{s});
    }));
  }
  std::vector<double> mapping(grid.size(), 0.0);
  in_stage("verification", [&] {
    // Collect every job before rethrowing so none outlives the problem.
    std::exception_ptr first;
    for (auto& job : jobs) {
      try {
        const MappingReport rep = job.get();
        for (std::size_t i = 0; i < mapping.size(); ++i)
          mapping[i] = std::max(mapping[i], rep.residual[i]);
      } catch (...) {
        if (!first) first = std::current_exception();
      }
    }
    if (first) std::rethrow_exception(first);
  });

  return in_stage("report", [&] {
    ScenarioReport r;
    r.config = cfg;
    r.n = n;
    for (std::size_t i = 0; i < grid.size(); ++i) r.tau.push_back(grid.tau(i));
    r.T = direct.T;
    r.ode_residual = direct.ode_residual;
    r.mapping_residual = std::move(mapping);
    r.symplectic_defect = direct.symplectic_defect;
    r.norm_drift = std::move(src.norm_drift);
    r.frame_drift = std::move(src.frame_drift);
    if (r.norm_drift.size() != r.rows() || r.frame_drift.size() != r.rows())
      throw DimensionMismatch("curve and transfer grids differ in length");
    r.summary = summarize(r, discrepancy);
    return r;
  });
}

std::string samples_csv(const ScenarioReport& r) {
  const std::size_t dim = 2 * r.n;
  std::string out = "tau";
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j)
      out += ",T_" + std::to_string(i) + "_" + std::to_string(j);
  out += ",ode_residual,mapping_residual,symplectic_defect,norm_drift,frame_drift\n";
  for (std::size_t k = 0; k < r.rows(); ++k) {
    out += format_double(r.tau[k]);
    for (double x : r.T[k].data()) out += "," + format_double(x);
    for (double x : {r.ode_residual[k], r.mapping_residual[k], r.symplectic_defect[k],
                     r.norm_drift[k], r.frame_drift[k]})
      out += "," + format_double(x);
    out += '\n';
  }
  return out;
}

std::string summary_json(const ScenarioReport& r) {
  using nlohmann::ordered_json;
  const ScenarioSummary& s = r.summary;
  const Tolerances& t = r.config.tolerance;
  ordered_json j;
  j["scenario"] = r.config.name;
  j["n"] = r.n;
  j["rows"] = r.rows();
  j["max"] = {{"ode_residual", s.max_ode_residual},
              {"mapping_residual", s.max_mapping_residual},
              {"symplectic_defect", s.max_symplectic_defect},
              {"norm_drift", s.max_norm_drift},
              {"frame_drift", s.max_frame_drift},
              {"factorization_discrepancy", s.factorization_discrepancy}};
  j["tolerance"] = {{"ode", t.ode},
                    {"mapping", t.mapping},
                    {"factorization", t.factorization},
                    {"norm_drift", t.norm_drift},
                    {"frame_drift", t.frame_drift},
                    {"symplectic_flag", t.symplectic_flag}};
  j["checks"] = {{"ode", s.ode_ok},
                 {"mapping", s.mapping_ok},
                 {"factorization", s.factorization_ok},
                 {"norm_drift", s.norm_drift_ok},
                 {"frame_drift", s.frame_drift_ok}};
  j["non_symplectic"] = s.non_symplectic;
  j["pass"] = s.pass;
  j["config"] = echo_config(r.config);
  return j.dump(2) + "\n";
}

std::vector<std::filesystem::path> emit_report(const ScenarioReport& r,
                                               const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw StageError("report", "cannot create directory '" + dir.string() + "': " + ec.message());

  std::vector<fs::path> written;
  const auto write = [&](const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw StageError("report", "cannot open '" + path.string() + "' for writing");
    out << text;
    out.close();
    if (!out) throw StageError("report", "write to '" + path.string() + "' failed");
    written.push_back(path);
  };
  for (const std::string& f : r.config.formats) {
    if (f == "csv") write(dir / "samples.csv", samples_csv(r));
    if (f == "json") write(dir / "summary.json", summary_json(r));
  }
  return written;
}

const std::vector<ScenarioTemplate>& scenario_templates() {
  static const std::vector<ScenarioTemplate> templates = {
      {"flat-identity", "geodesic in Minkowski space mapped to a flat target; T stays I",
       R"(# Flat source, flat target: the transfer matrix stays the identity.
scenario.name = "flat-identity"
source.kind = jacobi-second-order
source.metric = minkowski
source.params = (4)
source.x0 = (0, 0, 0, 0)
source.v0 = (1, 0, 0, 0)
target.kind = constant-curvature
target.K = 0
integration.h = 1e-3
integration.tau_max = 2
tolerance.ode = 1e-10
tolerance.mapping = 1e-10
tolerance.factorization = 1e-10
)"},
      {"curvature-2-to-1", "constant curvature K = 2 mapped to K = 1, no geometry",
       R"(# Oscillators with K = 2 mapped to oscillators with K = 1.
scenario.name = "curvature-2-to-1"
source.kind = constant-curvature
source.K = 2
source.n = 3
target.kind = constant-curvature
target.K = 1
integration.h = 1e-3
integration.tau_max = 5
tolerance.mapping = 1e-5
)"},
      {"schwarzschild-to-sphere",
       "radial Schwarzschild geodesic from r = 10 mapped to a K = 1 maximally symmetric target",
       R"(# Radial fall from rest at r = 10M, mapped to constant curvature K = 1.
scenario.name = "schwarzschild-to-sphere"
source.kind = jacobi-second-order
source.metric = schwarzschild
source.params = (1)
source.x0 = (0, 10, 1.5707963267948966, 0)
source.v0 = (1, 0, 0, 0)
target.kind = constant-curvature
target.K = 1
integration.h = 1e-3
integration.tau_max = 5
)"},
      {"rindler-first-order", "first-order deviation of Rindler observers mapped to a flat target",
       R"(# Uniformly accelerated observers, first-order deviation Hamiltonian.
scenario.name = "rindler-first-order"
source.kind = jacobi-first-order
source.congruence = rindler
source.params = (0.5)
target.kind = metric-second-order
target.b = 0
integration.h = 1e-3
integration.tau_max = 2
)"},
  };
  return templates;
}

}  // namespace mmt
