#include "mmt/congruences.hpp"

#include <cmath>
#include <numbers>

#include "mmt/error.hpp"
#include "mmt/metrics.hpp"

namespace mmt::congruences {

Congruence rindler(double g) {
  if (!(g > 0.0)) throw InvalidArgument("rindler: acceleration must be positive");
  Congruence c;
  c.name = "rindler";
  c.metric = metrics::minkowski(4);
  // a = g u with u = (V^x, V^t, 0, 0), the unit boost partner of V in the t-x plane.
  c.acceleration = [g](const Point&, const Vec& v) {
    Vec a(4);
    a[0] = g * v[1];
    a[1] = g * v[0];
    return a;
  };
  c.x0 = Point{0.0, 1.0 / g, 0.0, 0.0};
  c.v0 = Vec{1.0, 0.0, 0.0, 0.0};
  // Rigid congruence: spatial V_{C;A} vanishes, a_A = (g, 0, 0), and the only
  // non-zero acceleration gradient is V̇_{1;1} = -g².
  c.data.M_of_tau = [](double) { return Mat(3, 3); };
  c.data.a_of_tau = [g](double) { return Vec{g, 0.0, 0.0}; };
  c.data.gradient_a = [g](double) {
    Mat m(3, 3);
    m(0, 0) = -g * g;
    return m;
  };
  return c;
}

Congruence schwarzschild_static(double m, double r) {
  if (!(m > 0.0) || !(r > 2.0 * m)) {
    throw InvalidArgument("schwarzschild_static: need m > 0 and r > 2m");
  }
  Congruence c;
  c.name = "schwarzschild-static";
  c.metric = metrics::schwarzschild(m);
  // Holds r, θ, φ fixed: a^r = Γ^r_{tt} (V^t)².
  c.acceleration = [m](const Point& x, const Vec& v) {
    const double rr = x[1];
    const double f = 1.0 - 2.0 * m / rr;
    Vec a(4);
    a[1] = m * f / (rr * rr) * v[0] * v[0];
    return a;
  };
  const double f = 1.0 - 2.0 * m / r;
  c.x0 = Point{0.0, r, std::numbers::pi / 2, 0.0};
  c.v0 = Vec{1.0 / std::sqrt(f), 0.0, 0.0, 0.0};

  const double a_r = m / (r * r * std::sqrt(f));
  const double grad_rr = m * (3.0 * m - 2.0 * r) / (r * r * r * r * f);
  const double grad_tt = m / (r * r * r);
  c.data.M_of_tau = [](double) { return Mat(3, 3); };
  c.data.a_of_tau = [a_r](double) { return Vec{a_r, 0.0, 0.0}; };
  c.data.gradient_a = [grad_rr, grad_tt](double) {
    Mat g(3, 3);
    g(0, 0) = grad_rr;
    g(1, 1) = grad_tt;
    g(2, 2) = grad_tt;
    return g;
  };
  return c;
}

const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> entries = {
      {"rindler", "g", "uniformly accelerated observers in 4D Minkowski space"},
      {"schwarzschild-static", "m, r", "static observers at fixed radius outside a mass m"},
  };
  return entries;
}

}  // namespace mmt::congruences
