#include "mmt/metrics.hpp"

#include <cmath>
#include <memory>

#include "mmt/error.hpp"
#include "mmt/expression.hpp"

namespace mmt::metrics {

std::vector<int> lorentzian(std::size_t dim) {
  std::vector<int> s(dim, 1);
  if (dim > 0) s[0] = -1;
  return s;
}

Metric flat(std::vector<int> signature) {
  Metric m;
  m.dim = signature.size();
  m.label = "flat";
  m.signature = signature;
  const std::size_t d = m.dim;
  m.eval = [signature, d](const Point&) {
    Mat g(d, d);
    for (std::size_t i = 0; i < d; ++i) g(i, i) = signature[i];
    return g;
  };
  m.christoffel = [d](const Point&) { return Tensor3(d); };
  m.frame_field = [d](const Point&) { return Mat::identity(d); };
  return m;
}

Metric minkowski(std::size_t dim) {
  Metric m = flat(lorentzian(dim));
  m.label = "minkowski";
  return m;
}

Metric schwarzschild(double mass) {
  if (!(mass > 0.0)) throw InvalidArgument("schwarzschild: mass must be positive");
  Metric m;
  m.label = "schwarzschild";
  m.dim = 4;
  m.signature = lorentzian(4);
  const auto lapse = [mass](const Point& x) {
    const double r = x[1];
    if (!(r > 2.0 * mass)) {
      throw SingularMetric("schwarzschild: r = " + std::to_string(r) + " is not outside r = 2m");
    }
    return 1.0 - 2.0 * mass / r;
  };
  m.eval = [lapse](const Point& x) {
    const double f = lapse(x);
    const double r = x[1];
    const double s = std::sin(x[2]);
    Mat g(4, 4);
    g(0, 0) = -f;
    g(1, 1) = 1.0 / f;
    g(2, 2) = r * r;
    g(3, 3) = r * r * s * s;
    return g;
  };
  m.christoffel = [mass, lapse](const Point& x) {
    const double f = lapse(x);
    const double r = x[1];
    const double s = std::sin(x[2]);
    const double c = std::cos(x[2]);
    Tensor3 G(4);
    const double a = mass / (r * r * f);  // m / (r (r - 2m))
    G(0, 0, 1) = G(0, 1, 0) = a;
    G(1, 0, 0) = mass * f / (r * r);
    G(1, 1, 1) = -a;
    G(1, 2, 2) = -r * f;
    G(1, 3, 3) = -r * f * s * s;
    G(2, 1, 2) = G(2, 2, 1) = 1.0 / r;
    G(2, 3, 3) = -s * c;
    G(3, 1, 3) = G(3, 3, 1) = 1.0 / r;
    G(3, 2, 3) = G(3, 3, 2) = c / s;
    return G;
  };
  // Static observers' frame.
  m.frame_field = [lapse](const Point& x) {
    const double f = lapse(x);
    const double r = x[1];
    Mat e(4, 4);
    e(0, 0) = 1.0 / std::sqrt(f);
    e(1, 1) = std::sqrt(f);
    e(2, 2) = 1.0 / r;
    e(3, 3) = 1.0 / (r * std::sin(x[2]));
    return e;
  };
  return m;
}

Metric constant_curvature(std::size_t dim, double K, std::vector<int> signature) {
  if (signature.empty()) signature = lorentzian(dim);
  if (signature.size() != dim) {
    throw DimensionMismatch("constant_curvature: signature length " +
                            std::to_string(signature.size()) + " for dimension " +
                            std::to_string(dim));
  }
  Metric m;
  m.label = "constant-curvature";
  m.dim = dim;
  m.signature = signature;

  // omega = 1 - (K/4) η_ab x^a x^b ; G = η / omega²
  const auto omega = [signature, K](const Point& x) {
    double x2 = 0.0;
    for (std::size_t a = 0; a < x.size(); ++a) x2 += signature[a] * x[a] * x[a];
    const double w = 1.0 - 0.25 * K * x2;
    if (std::abs(w) < 1e-12) throw SingularMetric("constant-curvature chart boundary reached");
    return w;
  };
  m.eval = [signature, omega, dim](const Point& x) {
    const double w = omega(x);
    Mat g(dim, dim);
    for (std::size_t a = 0; a < dim; ++a) g(a, a) = signature[a] / (w * w);
    return g;
  };
  // Conformally flat: Γ^a_{bc} = δ^a_b σ_c + δ^a_c σ_b - η_bc η^{ad} σ_d with
  // σ = -ln(omega), σ_c = (K/2) η_cd x^d / omega.
  m.christoffel = [signature, omega, dim, K](const Point& x) {
    const double w = omega(x);
    std::vector<double> sigma(dim);
    for (std::size_t c = 0; c < dim; ++c) sigma[c] = 0.5 * K * signature[c] * x[c] / w;
    Tensor3 G(dim);
    for (std::size_t a = 0; a < dim; ++a)
      for (std::size_t b = 0; b < dim; ++b)
        for (std::size_t c = 0; c < dim; ++c) {
          double v = 0.0;
          if (a == b) v += sigma[c];
          if (a == c) v += sigma[b];
          if (b == c) v -= signature[b] * signature[a] * sigma[a];
          G(a, b, c) = v;
        }
    return G;
  };
  m.frame_field = [omega, dim](const Point& x) { return omega(x) * Mat::identity(dim); };
  return m;
}

Metric sphere(double radius) {
  if (!(radius > 0.0)) throw InvalidArgument("sphere: radius must be positive");
  Metric m;
  m.label = "sphere";
  m.dim = 2;
  m.signature = {1, 1};
  const double a2 = radius * radius;
  m.eval = [a2](const Point& x) {
    const double s = std::sin(x[0]);
    Mat g(2, 2);
    g(0, 0) = a2;
    g(1, 1) = a2 * s * s;
    return g;
  };
  m.christoffel = [](const Point& x) {
    const double s = std::sin(x[0]);
    const double c = std::cos(x[0]);
    Tensor3 G(2);
    G(0, 1, 1) = -s * c;
    G(1, 0, 1) = G(1, 1, 0) = c / s;
    return G;
  };
  m.frame_field = [radius](const Point& x) {
    Mat e(2, 2);
    e(0, 0) = 1.0 / radius;
    e(1, 1) = 1.0 / (radius * std::sin(x[0]));
    return e;
  };
  return m;
}

Metric diagonal(const std::vector<std::string>& components, std::vector<int> signature) {
  const std::size_t dim = components.size();
  if (signature.empty()) signature = lorentzian(dim);
  if (signature.size() != dim) {
    throw DimensionMismatch("diagonal metric: " + std::to_string(dim) + " components but " +
                            std::to_string(signature.size()) + " signature entries");
  }
  std::vector<std::string> vars;
  for (std::size_t i = 0; i < dim; ++i) vars.push_back("x" + std::to_string(i));
  auto exprs = std::make_shared<std::vector<Expression>>();
  for (const auto& c : components) exprs->emplace_back(c, vars);

  Metric m;
  m.label = "diagonal";
  m.dim = dim;
  m.signature = std::move(signature);
  m.eval = [exprs, dim](const Point& x) {
    Mat g(dim, dim);
    for (std::size_t i = 0; i < dim; ++i) g(i, i) = (*exprs)[i](x.data());
    return g;
  };
  return m;
}

Metric numeric_only(Metric m) {
  m.christoffel = nullptr;
  return m;
}

const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> entries = {
      {"minkowski", "dim", "flat metric diag(-1, 1, ..., 1)"},
      {"schwarzschild", "m", "Schwarzschild exterior in (t, r, theta, phi)"},
      {"constant-curvature", "dim, K",
       "maximally symmetric chart with K_{0A0C} = K delta_{AC} along any geodesic"},
      {"sphere", "radius", "round 2-sphere in (theta, phi), Riemannian"},
      {"diagonal", "diag expressions in x0..x{dim-1}", "user-supplied diagonal metric"},
  };
  return entries;
}

}  // namespace mmt::metrics
