#pragma once

// Curves, Fermi-Walker transported frames, sampled frame curvature and the
// Jacobi (geodesic deviation) equations along them. All integrations use
// fixed-step classical RK4 on a uniform proper-time grid.

#include <functional>
#include <vector>

#include "mmt/error.hpp"
#include "mmt/geometry.hpp"
#include "mmt/linalg.hpp"

namespace mmt {

struct CurveState {
  double tau = 0.0;
  Point x;
  Vec v;
  Vielbein frame;
};

struct CurveSampling {
  std::vector<CurveState> states;
  double step = 0.0;
  /// Coordinate acceleration at each sample; empty for geodesics.
  std::vector<Vec> acceleration;

  std::size_t size() const noexcept { return states.size(); }
  bool is_geodesic() const noexcept { return acceleration.empty(); }
};

/// Coordinate acceleration a^l as a function of position and velocity. Must
/// be g-orthogonal to the velocity.
using AccelerationField = std::function<Vec(const Point& x, const Vec& v)>;

class IntegrationAborted : public Error {
 public:
  IntegrationAborted(const std::string& what, CurveState last_good)
      : Error(what), last_good_(std::move(last_good)) {}
  const CurveState& last_good() const noexcept { return last_good_; }

 private:
  CurveState last_good_;
};

/// Rescales a timelike v so that g(v, v) = -1.
Vec normalize_timelike(const Metric& m, const Point& x, const Vec& v);

/// |g(V, V) + 1| at a state.
double norm_drift(const Metric& m, const CurveState& s);
/// ||E^T G E - eta||_inf at a state.
double frame_drift(const Metric& m, const CurveState& s);

/// Geodesic with parallel-transported frame; frame column 0 is v0. Requires
/// g(v0, v0) = -1 within 1e-10. A singular metric, non-finite values or a
/// frame defect above 1e-3 end the run with IntegrationAborted.
CurveSampling integrate_geodesic(const Metric& m, const Point& x0, const Vec& v0, double h,
                                 std::size_t steps);

/// Accelerated curve with Fermi-Walker transported frame.
CurveSampling integrate_accelerated_curve(const Metric& m, const Point& x0, const Vec& v0,
                                          const AccelerationField& a_field, double h,
                                          std::size_t steps);

/// One RK4 step of position, velocity and Fermi-Walker frame
///   ∇_V X = g(X, a) V - g(X, V) a.
CurveState fermi_walker_curve_step(const Metric& m, const CurveState& s,
                                   const AccelerationField& a_field, double h);

/// Frame part of fermi_walker_curve_step. Throws DegenerateFrame if the
/// stepped frame has lost orthonormality (defect above 1e-3).
Vielbein fermi_walker_step(const Metric& m, const CurveState& s, const AccelerationField& a_field,
                           double h);

/// K_{0A0C}(τ) sampled on a uniform grid, spatial frame indices 1..n.
struct FrameCurvature {
  double tau0 = 0.0;
  double step = 0.0;
  std::vector<Mat> samples;
  /// Max |K - K^T| before symmetrization, per sample.
  std::vector<double> asymmetry;
  /// Signs of the spatial frame directions (all +1 for Lorentzian metrics).
  std::vector<int> spatial_eta;

  std::size_t n() const noexcept { return samples.empty() ? 0 : samples.front().rows(); }
  double tau_end() const noexcept {
    return tau0 + step * static_cast<double>(samples.empty() ? 0 : samples.size() - 1);
  }
  /// Linear interpolation between samples.
  Mat at(double tau) const;

  static FrameCurvature constant(const Mat& k, double tau0, double step, std::size_t count);
};

FrameCurvature sample_frame_curvature(const Metric& m, const CurveSampling& curve,
                                      const FiniteDifferenceOptions& opt = {});

/// Congruence derivatives along the curve, in the transported frame.
struct CongruenceData {
  /// M_{AC} = V_{C;A}.
  std::function<Mat(double)> M_of_tau;
  /// Frame acceleration V̇_A.
  std::function<Vec(double)> a_of_tau;
  /// V̇_{A;C}.
  std::function<Mat(double)> gradient_a;

  bool complete() const noexcept { return M_of_tau && a_of_tau && gradient_a; }
};

/// Uniform-grid trajectory of a Jacobi field and its τ-derivative.
struct JacobiTrajectory {
  double tau0 = 0.0;
  double step = 0.0;
  std::vector<Vec> position;
  std::vector<Vec> velocity;

  std::size_t size() const noexcept { return position.size(); }
};

/// d²Z_A/dτ² + K_{0A0C}(τ) Z_C = 0 on the grid of `fc`.
JacobiTrajectory integrate_jacobi_geodesic(const FrameCurvature& fc, const Vec& z0,
                                           const Vec& zdot0);

/// Coefficient of the non-geodesic Jacobi equation,
/// R_{0A0C} - V̇_{A;C} - V̇_A V̇^C.
Mat nongeodesic_jacobi_matrix(const FrameCurvature& fc, const CongruenceData& cong, double tau);

/// d²ζ_A/dτ² + (R_{0A0C} - V̇_{A;C} - V̇_A V̇^C) ζ_C = 0 on the grid of `fc`.
JacobiTrajectory integrate_jacobi_nongeodesic(const FrameCurvature& fc, const CongruenceData& cong,
                                              const Vec& z0, const Vec& zdot0);

/// First-order deviation flow dζ^A/dτ = V_{A;C} ζ^C = (M^T ζ)_A.
std::vector<Vec> integrate_deviation_first_order(const CongruenceData& cong, double tau0,
                                                 double step, std::size_t steps, const Vec& z0);

}  // namespace mmt
