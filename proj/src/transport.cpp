#include "mmt/transport.hpp"

#include <algorithm>
#include <cmath>

#include "mmt/rk4.hpp"

namespace mmt {

namespace {

constexpr double kFrameDegeneracy = 1e-3;
constexpr double kOrthogonalityTol = 1e-8;

// Packed curve state: x (d), v (d), frame columns (d*d, column A at 2d + A*d).
Vec pack(const CurveState& s) {
  const std::size_t d = s.x.size();
  Vec y(2 * d + d * d);
  for (std::size_t i = 0; i < d; ++i) {
    y[i] = s.x[i];
    y[d + i] = s.v[i];
  }
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t l = 0; l < d; ++l) y[2 * d + a * d + l] = s.frame.E(l, a);
  return y;
}

CurveState unpack(const Vec& y, std::size_t d, double tau, const std::vector<int>& eta) {
  CurveState s;
  s.tau = tau;
  s.x = Vec(d);
  s.v = Vec(d);
  s.frame = Vielbein{Mat(d, d), eta};
  for (std::size_t i = 0; i < d; ++i) {
    s.x[i] = y[i];
    s.v[i] = y[d + i];
  }
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t l = 0; l < d; ++l) s.frame.E(l, a) = y[2 * d + a * d + l];
  return s;
}

// Right-hand side of the packed system. Without an acceleration field this is
// geodesic motion with parallel transport; with one, the Fermi-Walker terms
// g(X, a) V - g(X, V) a are added to each frame vector.
Vec curve_rhs(const Metric& m, const Vec& y, const AccelerationField* a_field) {
  const std::size_t d = m.dim;
  Point x(d);
  Vec v(d);
  for (std::size_t i = 0; i < d; ++i) {
    x[i] = y[i];
    v[i] = y[d + i];
  }
  const Tensor3 gamma = christoffel(m, x);

  // Γ^l_{pq} v^p as a matrix acting on q.
  Mat gv(d, d);
  for (std::size_t l = 0; l < d; ++l)
    for (std::size_t p = 0; p < d; ++p) {
      if (v[p] == 0.0) continue;
      for (std::size_t q = 0; q < d; ++q) gv(l, q) += gamma(l, p, q) * v[p];
    }

  Vec dy(y.size());
  for (std::size_t i = 0; i < d; ++i) dy[i] = v[i];
  const Vec acc_geo = -matvec(gv, v);
  for (std::size_t i = 0; i < d; ++i) dy[d + i] = acc_geo[i];

  Vec a;
  Mat g;
  if (a_field) {
    a = (*a_field)(x, v);
    g = m.at(x);
    for (std::size_t i = 0; i < d; ++i) dy[d + i] += a[i];
  }

  for (std::size_t col = 0; col < d; ++col) {
    Vec e(d);
    for (std::size_t l = 0; l < d; ++l) e[l] = y[2 * d + col * d + l];
    Vec de = -matvec(gv, e);
    if (a_field) {
      de += inner(g, e, a) * v;
      de -= inner(g, e, v) * a;
    }
    for (std::size_t l = 0; l < d; ++l) dy[2 * d + col * d + l] = de[l];
  }
  return dy;
}

void check_orthogonal(const Metric& m, const CurveState& s, const Vec& a) {
  const double gav = inner(m.at(s.x), a, s.v);
  const double scale = std::max(1.0, a.norm() * s.v.norm());
  if (std::abs(gav) > kOrthogonalityTol * scale) {
    throw InvalidAcceleration("acceleration is not orthogonal to the velocity at tau = " +
                              std::to_string(s.tau) + " (g(a, V) = " + std::to_string(gav) + ")");
  }
}

CurveSampling integrate_curve(const Metric& m, const Point& x0, const Vec& v0, double h,
                              std::size_t steps, const AccelerationField* a_field) {
  if (!(h > 0.0)) throw InvalidArgument("curve integration: step must be positive");
  if (x0.size() != m.dim || v0.size() != m.dim) {
    throw DimensionMismatch("curve integration: initial data does not match metric dimension " +
                            std::to_string(m.dim));
  }
  const double vv = inner(m.at(x0), v0, v0);
  if (std::abs(vv + 1.0) > 1e-10) {
    throw InvalidArgument("curve integration: g(v0, v0) = " + std::to_string(vv) +
                          ", expected -1 (see normalize_timelike)");
  }

  CurveSampling out;
  out.step = h;
  out.states.reserve(steps + 1);
  CurveState s{0.0, x0, v0, build_vielbein_with_tangent(m, x0, v0)};
  // The timelike column is V itself, not a rescaled copy.
  s.frame.E.set_col(0, v0);

  const auto record = [&](const CurveState& st) {
    if (a_field) {
      Vec a = (*a_field)(st.x, st.v);
      check_orthogonal(m, st, a);
      out.acceleration.push_back(std::move(a));
    }
    out.states.push_back(st);
  };
  record(s);

  const auto rhs = [&](double, const Vec& y) { return curve_rhs(m, y, a_field); };
  for (std::size_t i = 1; i <= steps; ++i) {
    const double tau = h * static_cast<double>(i);
    Vec y;
    try {
      y = rk4_step(rhs, tau - h, pack(s), h);
    } catch (const SingularMetric& e) {
      throw IntegrationAborted(std::string("curve integration aborted: ") + e.what(), s);
    } catch (const SingularMatrix& e) {
      throw IntegrationAborted(std::string("curve integration aborted: ") + e.what(), s);
    }
    if (!y.all_finite()) {
      throw IntegrationAborted("curve integration produced non-finite values at tau = " +
                                   std::to_string(tau),
                               s);
    }
    CurveState next = unpack(y, m.dim, tau, m.signature);
    double defect = 0.0;
    try {
      defect = frame_defect(m.at(next.x), next.frame);
    } catch (const SingularMetric& e) {
      throw IntegrationAborted(std::string("curve integration aborted: ") + e.what(), s);
    }
    if (defect > kFrameDegeneracy) {
      throw IntegrationAborted("curve integration aborted: transported frame lost "
                               "orthonormality at tau = " + std::to_string(tau),
                               s);
    }
    s = std::move(next);
    record(s);
  }
  return out;
}

}  // namespace

Vec normalize_timelike(const Metric& m, const Point& x, const Vec& v) {
  const double vv = inner(m.at(x), v, v);
  if (!(vv < 0.0)) {
    throw InvalidArgument("normalize_timelike: vector is not timelike (g(v,v) = " +
                          std::to_string(vv) + ")");
  }
  return (1.0 / std::sqrt(-vv)) * v;
}

double norm_drift(const Metric& m, const CurveState& s) {
  return std::abs(inner(m.at(s.x), s.v, s.v) + 1.0);
}

double frame_drift(const Metric& m, const CurveState& s) {
  return frame_defect(m.at(s.x), s.frame);
}

CurveSampling integrate_geodesic(const Metric& m, const Point& x0, const Vec& v0, double h,
                                 std::size_t steps) {
  return integrate_curve(m, x0, v0, h, steps, nullptr);
}

CurveSampling integrate_accelerated_curve(const Metric& m, const Point& x0, const Vec& v0,
                                          const AccelerationField& a_field, double h,
                                          std::size_t steps) {
  if (!a_field) throw InvalidArgument("integrate_accelerated_curve: empty acceleration field");
  return integrate_curve(m, x0, v0, h, steps, &a_field);
}

CurveState fermi_walker_curve_step(const Metric& m, const CurveState& s,
                                   const AccelerationField& a_field, double h) {
  const auto rhs = [&](double, const Vec& y) { return curve_rhs(m, y, &a_field); };
  return unpack(rk4_step(rhs, s.tau, pack(s), h), m.dim, s.tau + h, s.frame.eta);
}

Vielbein fermi_walker_step(const Metric& m, const CurveState& s, const AccelerationField& a_field,
                           double h) {
  CurveState next = fermi_walker_curve_step(m, s, a_field, h);
  if (!next.frame.E.all_finite() || frame_defect(m.at(next.x), next.frame) > kFrameDegeneracy) {
    throw DegenerateFrame("Fermi-Walker step produced a degenerate frame");
  }
  return std::move(next.frame);
}

// ---------------------------------------------------------------- curvature

Mat FrameCurvature::at(double tau) const {
  if (samples.empty()) throw InvalidArgument("FrameCurvature: no samples");
  if (samples.size() == 1) return samples.front();
  const double u = (tau - tau0) / step;
  const double last = static_cast<double>(samples.size() - 1);
  const double slack = 1e-9;
  if (u < -slack || u > last + slack) {
    throw InvalidArgument("FrameCurvature: tau = " + std::to_string(tau) + " outside [" +
                          std::to_string(tau0) + ", " + std::to_string(tau_end()) + "]");
  }
  const double uc = std::clamp(u, 0.0, last);
  std::size_t i = static_cast<std::size_t>(std::floor(uc));
  if (i >= samples.size() - 1) i = samples.size() - 2;
  const double w = uc - static_cast<double>(i);
  if (w == 0.0) return samples[i];
  return (1.0 - w) * samples[i] + w * samples[i + 1];
}

FrameCurvature FrameCurvature::constant(const Mat& k, double tau0, double step, std::size_t count) {
  FrameCurvature fc;
  fc.tau0 = tau0;
  fc.step = step;
  fc.samples.assign(count, k);
  fc.asymmetry.assign(count, 0.0);
  fc.spatial_eta.assign(k.rows(), 1);
  return fc;
}

FrameCurvature sample_frame_curvature(const Metric& m, const CurveSampling& curve,
                                      const FiniteDifferenceOptions& opt) {
  if (curve.states.empty()) throw InvalidArgument("sample_frame_curvature: empty curve");
  const std::size_t d = m.dim;
  const std::size_t n = d - 1;
  FrameCurvature fc;
  fc.tau0 = curve.states.front().tau;
  fc.step = curve.step;
  fc.spatial_eta.assign(curve.states.front().frame.eta.begin() + 1,
                        curve.states.front().frame.eta.end());
  fc.samples.reserve(curve.size());
  fc.asymmetry.reserve(curve.size());

  for (const CurveState& s : curve.states) {
    const RiemannAtPoint r = riemann(m, s.x, opt);
    const Tensor4 low = lower_first_index(r, m.at(s.x));
    const Mat& e = s.frame.E;
    const Vec u = e.col(0);
    // K_{(0)(A)(0)(C)} = K_{lpot} u^l E_A^p u^o E_C^t
    Mat k(n, n);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t c = 0; c < n; ++c) {
        double acc = 0.0;
        for (std::size_t l = 0; l < d; ++l)
          for (std::size_t pp = 0; pp < d; ++pp) {
            const double w = u[l] * e(pp, a + 1);
            if (w == 0.0) continue;
            for (std::size_t o = 0; o < d; ++o)
              for (std::size_t t = 0; t < d; ++t)
                acc += w * low(l, pp, o, t) * u[o] * e(t, c + 1);
          }
        k(a, c) = acc;
      }
    const Mat kt = k.transpose();
    fc.asymmetry.push_back((k - kt).max_abs());
    fc.samples.push_back(0.5 * (k + kt));
  }
  return fc;
}

// ---------------------------------------------------------------- Jacobi

namespace {

JacobiTrajectory integrate_second_order(const FrameCurvature& fc,
                                        const std::function<Mat(double)>& coefficient,
                                        const Vec& z0, const Vec& zdot0) {
  const std::size_t n = fc.n();
  if (z0.size() != n || zdot0.size() != n) {
    throw DimensionMismatch("Jacobi integration: initial data of length " +
                            std::to_string(z0.size()) + "/" + std::to_string(zdot0.size()) +
                            " for frame curvature of size " + std::to_string(n));
  }
  if (fc.samples.size() < 1 || !(fc.step > 0.0)) {
    throw InvalidArgument("Jacobi integration: frame curvature grid is empty");
  }
  Vec y(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = z0[i];
    y[n + i] = zdot0[i];
  }
  const auto rhs = [&](double tau, const Vec& s) {
    Vec z(n);
    Vec dy(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
      z[i] = s[i];
      dy[i] = s[n + i];
    }
    const Vec acc = -matvec(coefficient(tau), z);
    for (std::size_t i = 0; i < n; ++i) dy[n + i] = acc[i];
    return dy;
  };

  JacobiTrajectory out;
  out.tau0 = fc.tau0;
  out.step = fc.step;
  const auto record = [&](const Vec& s) {
    Vec z(n), zd(n);
    for (std::size_t i = 0; i < n; ++i) {
      z[i] = s[i];
      zd[i] = s[n + i];
    }
    out.position.push_back(std::move(z));
    out.velocity.push_back(std::move(zd));
  };
  record(y);
  for (std::size_t i = 1; i < fc.samples.size(); ++i) {
    const double tau = fc.tau0 + fc.step * static_cast<double>(i - 1);
    y = rk4_step(rhs, tau, y, fc.step);
    if (!y.all_finite()) throw Diverged("Jacobi integration diverged", tau + fc.step);
    record(y);
  }
  return out;
}

}  // namespace

JacobiTrajectory integrate_jacobi_geodesic(const FrameCurvature& fc, const Vec& z0,
                                           const Vec& zdot0) {
  return integrate_second_order(fc, [&](double tau) { return fc.at(tau); }, z0, zdot0);
}

Mat nongeodesic_jacobi_matrix(const FrameCurvature& fc, const CongruenceData& cong, double tau) {
  if (!cong.complete()) throw InvalidArgument("non-geodesic Jacobi: congruence data missing");
  const std::size_t n = fc.n();
  const Vec a = cong.a_of_tau(tau);
  const Mat grad = cong.gradient_a(tau);
  if (a.size() != n || grad.rows() != n || grad.cols() != n) {
    throw DimensionMismatch("non-geodesic Jacobi: congruence data does not match n = " +
                            std::to_string(n));
  }
  Mat w = fc.at(tau) - grad;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t c = 0; c < n; ++c) w(i, c) -= a[i] * a[c] * fc.spatial_eta[c];
  return w;
}

JacobiTrajectory integrate_jacobi_nongeodesic(const FrameCurvature& fc, const CongruenceData& cong,
                                              const Vec& z0, const Vec& zdot0) {
  if (!cong.complete()) throw InvalidArgument("non-geodesic Jacobi: congruence data missing");
  return integrate_second_order(
      fc, [&](double tau) { return nongeodesic_jacobi_matrix(fc, cong, tau); }, z0, zdot0);
}

std::vector<Vec> integrate_deviation_first_order(const CongruenceData& cong, double tau0,
                                                 double step, std::size_t steps, const Vec& z0) {
  if (!cong.M_of_tau) throw InvalidArgument("first-order deviation: congruence gradient missing");
  const auto rhs = [&](double tau, const Vec& z) {
    return matvec(cong.M_of_tau(tau).transpose(), z);
  };
  std::vector<Vec> out;
  out.reserve(steps + 1);
  out.push_back(z0);
  Vec z = z0;
  for (std::size_t i = 0; i < steps; ++i) {
    z = rk4_step(rhs, tau0 + step * static_cast<double>(i), z, step);
    out.push_back(z);
  }
  return out;
}

}  // namespace mmt
