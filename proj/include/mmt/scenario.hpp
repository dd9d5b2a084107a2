#pragma once

// End-to-end scenario runs: source geometry and curve, both Hamiltonians, the
// transfer matrix by both paths, the mapping check, and the report files.

#include <filesystem>
#include <string>
#include <vector>

#include "mmt/config.hpp"
#include "mmt/congruences.hpp"
#include "mmt/error.hpp"
#include "mmt/geometry.hpp"
#include "mmt/linalg.hpp"

namespace mmt {

/// An error raised inside one pipeline stage: config, geometry, transport,
/// hamiltonian, transfer, verification or report.
class StageError : public Error {
 public:
  StageError(std::string stage, const std::string& what)
      : Error(stage + ": " + what), stage_(std::move(stage)) {}
  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

/// Metric named by a jacobi-second-order side.
Metric build_metric(const SideConfig& side);
/// Congruence named by a jacobi-first-order side.
congruences::Congruence build_congruence(const SideConfig& side);

struct ScenarioSummary {
  double max_ode_residual = 0.0;
  double max_mapping_residual = 0.0;
  double max_symplectic_defect = 0.0;
  double max_norm_drift = 0.0;
  double max_frame_drift = 0.0;
  /// max |T_direct - T_factorized| over all samples and entries.
  double factorization_discrepancy = 0.0;

  bool ode_ok = false;
  bool mapping_ok = false;
  bool factorization_ok = false;
  bool norm_drift_ok = false;
  bool frame_drift_ok = false;
  /// Informational: max symplectic defect above tolerance.symplectic_flag.
  bool non_symplectic = false;
  bool pass = false;
};

struct ScenarioReport {
  ScenarioConfig config;
  std::size_t n = 0;
  std::vector<double> tau;
  /// Direct-integration T at each sample.
  std::vector<Mat> T;
  std::vector<double> ode_residual;
  /// Max over the verification states.
  std::vector<double> mapping_residual;
  std::vector<double> symplectic_defect;
  /// Zero for sources without a curve.
  std::vector<double> norm_drift;
  std::vector<double> frame_drift;
  ScenarioSummary summary;

  std::size_t rows() const noexcept { return tau.size(); }
};

/// Runs the full pipeline. Errors are rethrown as StageError.
ScenarioReport run_scenario(const ScenarioConfig& cfg);

/// Recomputes the summary from the columns and the configured tolerances.
ScenarioSummary summarize(const ScenarioReport& r, double factorization_discrepancy);

std::string samples_csv(const ScenarioReport& r);
std::string summary_json(const ScenarioReport& r);

/// Writes samples.csv and/or summary.json (per cfg.formats) into `dir`,
/// creating it. Returns the written paths.
std::vector<std::filesystem::path> emit_report(const ScenarioReport& r,
                                               const std::filesystem::path& dir);

struct ScenarioTemplate {
  std::string name;
  std::string description;
  std::string text;
};

const std::vector<ScenarioTemplate>& scenario_templates();

}  // namespace mmt
