#include "mmt/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "mmt/error.hpp"

namespace mmt {

namespace {

double step_for(const Point& x, double relative) {
  return relative * std::max(1.0, x.max_abs());
}

Point shifted(const Point& x, std::size_t k, double delta) {
  Point y = x;
  y[k] += delta;
  return y;
}

// Contracts index `slot` (0..3) of t with the columns of e: out(..A..) =
// sum_l t(..l..) e(l, A).
Tensor4 contract_slot(const Tensor4& t, const Mat& e, int slot) {
  const std::size_t d = t.dim();
  Tensor4 out(d);
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b)
      for (std::size_t c = 0; c < d; ++c)
        for (std::size_t f = 0; f < d; ++f) {
          double s = 0.0;
          for (std::size_t l = 0; l < d; ++l) {
            switch (slot) {
              case 0: s += t(l, b, c, f) * e(l, a); break;
              case 1: s += t(a, l, c, f) * e(l, b); break;
              case 2: s += t(a, b, l, f) * e(l, c); break;
              default: s += t(a, b, c, l) * e(l, f); break;
            }
          }
          out(a, b, c, f) = s;
        }
  return out;
}

}  // namespace

double Tensor3::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

double Tensor4::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

Mat Metric::at(const Point& x) const {
  if (x.size() != dim) {
    throw DimensionMismatch("metric '" + label + "': point has " + std::to_string(x.size()) +
                            " coordinates, expected " + std::to_string(dim));
  }
  Mat g = eval(x);
  if (g.rows() != dim || g.cols() != dim) {
    throw DimensionMismatch("metric '" + label + "' returned " + g.shape());
  }
  if (!g.all_finite()) throw SingularMetric("metric '" + label + "' is not finite at this point");
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = i + 1; j < dim; ++j)
      if (g(i, j) != g(j, i)) throw InvalidArgument("metric '" + label + "' is not symmetric");
  return g;
}

Mat Metric::eta() const {
  Mat e(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) e(i, i) = signature[i];
  return e;
}

Mat Vielbein::eta_matrix() const {
  Mat e(eta.size(), eta.size());
  for (std::size_t i = 0; i < eta.size(); ++i) e(i, i) = eta[i];
  return e;
}

double inner(const Mat& g, const Vec& a, const Vec& b) { return dot(a, matvec(g, b)); }

Tensor3 christoffel_numeric(const Metric& m, const Point& x, const FiniteDifferenceOptions& opt) {
  const std::size_t d = m.dim;
  const Mat g = m.at(x);
  const double h = step_for(x, opt.relative_step);

  std::vector<Mat> dg;
  dg.reserve(d);
  for (std::size_t k = 0; k < d; ++k) {
    dg.push_back((m.at(shifted(x, k, h)) - m.at(shifted(x, k, -h))) * (1.0 / (2.0 * h)));
  }

  // Lowered symbols Γ_{s,pq}, one column per (p, q).
  Mat lowered(d, d * d);
  for (std::size_t s = 0; s < d; ++s)
    for (std::size_t p = 0; p < d; ++p)
      for (std::size_t q = 0; q < d; ++q)
        lowered(s, p * d + q) = 0.5 * (dg[p](s, q) + dg[q](s, p) - dg[s](p, q));

  Mat raised;
  try {
    raised = solve_linear(g, lowered);
  } catch (const SingularMatrix& e) {
    throw SingularMetric("metric '" + m.label + "' is singular: " + e.what());
  }

  Tensor3 gamma(d);
  for (std::size_t l = 0; l < d; ++l)
    for (std::size_t p = 0; p < d; ++p)
      for (std::size_t q = 0; q < d; ++q) gamma(l, p, q) = raised(l, p * d + q);
  return gamma;
}

Tensor3 christoffel(const Metric& m, const Point& x, const FiniteDifferenceOptions& opt) {
  if (m.christoffel) {
    m.at(x);  // validates the point and surfaces SingularMetric
    return m.christoffel(x);
  }
  return christoffel_numeric(m, x, opt);
}

RiemannAtPoint riemann(const Metric& m, const Point& x, const FiniteDifferenceOptions& opt) {
  const std::size_t d = m.dim;
  const Tensor3 gamma = christoffel(m, x, opt);
  const double h =
      step_for(x, m.christoffel ? opt.relative_step : opt.nested_relative_step);

  std::vector<Tensor3> dgamma;
  dgamma.reserve(d);
  for (std::size_t o = 0; o < d; ++o) {
    const Tensor3 plus = christoffel(m, shifted(x, o, h), opt);
    const Tensor3 minus = christoffel(m, shifted(x, o, -h), opt);
    Tensor3 diff(d);
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = 0; b < d; ++b)
        for (std::size_t c = 0; c < d; ++c)
          diff(a, b, c) = (plus(a, b, c) - minus(a, b, c)) / (2.0 * h);
    dgamma.push_back(std::move(diff));
  }

  Tensor4 k(d);
  for (std::size_t l = 0; l < d; ++l)
    for (std::size_t p = 0; p < d; ++p)
      for (std::size_t o = 0; o < d; ++o)
        for (std::size_t t = 0; t < d; ++t) {
          double s1 = 0.0;
          double s2 = 0.0;
          for (std::size_t s = 0; s < d; ++s) {
            s1 += gamma(l, s, o) * gamma(s, p, t);
            s2 += gamma(l, s, t) * gamma(s, p, o);
          }
          // Written as (a - b) + (s1 - s2) so the (o, t) antisymmetry is exact.
          k(l, p, o, t) = (dgamma[o](l, p, t) - dgamma[t](l, p, o)) + (s1 - s2);
        }
  return RiemannAtPoint{std::move(k), x};
}

Tensor4 lower_first_index(const RiemannAtPoint& r, const Mat& g) {
  const std::size_t d = r.components.dim();
  Tensor4 low(d);
  for (std::size_t l = 0; l < d; ++l)
    for (std::size_t p = 0; p < d; ++p)
      for (std::size_t o = 0; o < d; ++o)
        for (std::size_t t = 0; t < d; ++t) {
          double s = 0.0;
          for (std::size_t a = 0; a < d; ++a) s += g(l, a) * r.components(a, p, o, t);
          low(l, p, o, t) = s;
        }
  return low;
}

Vielbein build_vielbein(const Metric& m, const Point& x) {
  const std::size_t d = m.dim;
  const Mat g = m.at(x);
  Vielbein frame{Mat(d, d), m.signature};
  for (std::size_t i = 0; i < d; ++i) {
    Vec w(d);
    w[i] = 1.0;
    for (std::size_t j = 0; j < i; ++j) {
      const Vec ej = frame.E.col(j);
      w -= (m.signature[j] * inner(g, w, ej)) * ej;
    }
    const double n2 = inner(g, w, w);
    if (std::abs(n2) < 1e-12 || (n2 < 0) != (m.signature[i] < 0)) {
      throw DegenerateFrame("Gram-Schmidt breakdown at coordinate vector " + std::to_string(i) +
                            " of metric '" + m.label + "' (norm^2 = " + std::to_string(n2) + ")");
    }
    frame.E.set_col(i, (1.0 / std::sqrt(std::abs(n2))) * w);
  }
  return frame;
}

Vielbein build_vielbein_with_tangent(const Metric& m, const Point& x, const Vec& v) {
  const std::size_t d = m.dim;
  const Mat g = m.at(x);
  if (m.signature.empty() || m.signature[0] >= 0) {
    throw DegenerateFrame("metric '" + m.label + "' has no leading timelike direction");
  }
  const double vv = inner(g, v, v);
  if (!(vv < -1e-12)) {
    throw DegenerateFrame("tangent vector is not timelike (g(v,v) = " + std::to_string(vv) + ")");
  }
  Vielbein frame{Mat(d, d), m.signature};
  frame.E.set_col(0, (1.0 / std::sqrt(-vv)) * v);

  // Candidates are scored by the fraction of their own norm that survives
  // projection; the first well-conditioned one in coordinate order wins.
  std::vector<bool> used(d, false);
  for (std::size_t slot = 1; slot < d; ++slot) {
    std::size_t chosen = d;
    std::size_t best = d;
    double best_quality = 0.0;
    std::vector<Vec> residual(d);
    std::vector<double> norm2(d, 0.0);
    for (std::size_t c = 0; c < d; ++c) {
      if (used[c]) continue;
      Vec w(d);
      w[c] = 1.0;
      for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t j = 0; j < slot; ++j) {
          const Vec ej = frame.E.col(j);
          w -= (m.signature[j] * inner(g, w, ej)) * ej;
        }
      }
      const double n2 = inner(g, w, w);
      if ((n2 < 0) != (m.signature[slot] < 0)) continue;
      const double own = std::abs(g(c, c)) > 0.0 ? std::abs(g(c, c)) : 1.0;
      const double quality = std::abs(n2) / own;
      residual[c] = w;
      norm2[c] = n2;
      if (chosen == d && quality > 0.1) chosen = c;
      if (quality > best_quality) {
        best_quality = quality;
        best = c;
      }
    }
    if (chosen == d) chosen = best;
    if (chosen == d || best_quality < 1e-10 || std::abs(norm2[chosen]) < 1e-12) {
      throw DegenerateFrame("no admissible frame vector for slot " + std::to_string(slot) +
                            " of metric '" + m.label + "'");
    }
    used[chosen] = true;
    frame.E.set_col(slot, (1.0 / std::sqrt(std::abs(norm2[chosen]))) * residual[chosen]);
  }
  return frame;
}

double frame_defect(const Mat& g, const Vielbein& e) {
  return (matmul(e.E.transpose(), matmul(g, e.E)) - e.eta_matrix()).max_abs();
}

Tensor4 project_curvature(const RiemannAtPoint& r, const Metric& m, const Vielbein& e) {
  if (r.components.dim() != m.dim || e.dim() != m.dim) {
    throw DimensionMismatch("project_curvature: dimensions of curvature, metric and frame differ");
  }
  Tensor4 t = lower_first_index(r, m.at(r.point));
  for (int slot = 0; slot < 4; ++slot) t = contract_slot(t, e.E, slot);
  return t;
}

namespace {

// γ_{ABC} = g(e_A, ∇_{e_C} e_B) of the analytic frame field at x.
Tensor3 rotation_coefficients(const Metric& m, const Point& x, const FiniteDifferenceOptions& opt) {
  const std::size_t d = m.dim;
  const Mat e = m.frame_field(x);
  const Mat g = m.at(x);
  const Tensor3 gamma = christoffel(m, x, opt);
  const double h = step_for(x, opt.relative_step);

  std::vector<Mat> de;
  de.reserve(d);
  for (std::size_t i = 0; i < d; ++i) {
    de.push_back((m.frame_field(shifted(x, i, h)) - m.frame_field(shifted(x, i, -h))) *
                 (1.0 / (2.0 * h)));
  }

  // cov[i](k, B) = ∇_i e_B^k
  std::vector<Mat> cov(d, Mat(d, d));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t k = 0; k < d; ++k)
      for (std::size_t b = 0; b < d; ++b) {
        double s = de[i](k, b);
        for (std::size_t l = 0; l < d; ++l) s += gamma(k, i, l) * e(l, b);
        cov[i](k, b) = s;
      }

  const Mat ge = matmul(g, e);  // (G e)_{k A} = e_{A k}
  Tensor3 out(d);
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b)
      for (std::size_t c = 0; c < d; ++c) {
        double s = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
          if (e(i, c) == 0.0) continue;
          double t = 0.0;
          for (std::size_t k = 0; k < d; ++k) t += ge(k, a) * cov[i](k, b);
          s += t * e(i, c);
        }
        out(a, b, c) = s;
      }
  return out;
}

}  // namespace

Tensor4 ricci_rotation_curvature(const Metric& m, const Point& x, const FiniteDifferenceOptions& opt) {
  if (!m.frame_field) {
    throw UnsupportedMetric("metric '" + m.label + "' has no analytic frame field");
  }
  const std::size_t d = m.dim;
  const Mat e = m.frame_field(x);
  const Tensor3 gam = rotation_coefficients(m, x, opt);
  const double h = step_for(x, opt.nested_relative_step);

  std::vector<Tensor3> dgam;
  dgam.reserve(d);
  for (std::size_t j = 0; j < d; ++j) {
    const Tensor3 plus = rotation_coefficients(m, shifted(x, j, h), opt);
    const Tensor3 minus = rotation_coefficients(m, shifted(x, j, -h), opt);
    Tensor3 diff(d);
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = 0; b < d; ++b)
        for (std::size_t c = 0; c < d; ++c)
          diff(a, b, c) = (plus(a, b, c) - minus(a, b, c)) / (2.0 * h);
    dgam.push_back(std::move(diff));
  }
  // Frame derivative γ_{ABC,D} = e_D^j ∂_j γ_{ABC}.
  auto dgamma = [&](std::size_t a, std::size_t b, std::size_t c, std::size_t dd) {
    double s = 0.0;
    for (std::size_t j = 0; j < d; ++j) s += e(j, dd) * dgam[j](a, b, c);
    return s;
  };

  Tensor4 k(d);
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b)
      for (std::size_t c = 0; c < d; ++c)
        for (std::size_t f = 0; f < d; ++f) {
          double s = -dgamma(a, b, c, f) + dgamma(a, b, f, c);
          for (std::size_t mm = 0; mm < d; ++mm) {
            const double eta_mm = m.signature[mm];  // η^{MN} is diagonal with entries ±1
            s += eta_mm * (gam(b, a, mm) * (gam(c, mm, f) - gam(f, mm, c)) +
                           gam(mm, a, c) * gam(b, mm, f) - gam(mm, a, f) * gam(b, mm, c));
          }
          k(a, b, c, f) = s;
        }
  return k;
}

Mat constant_curvature_frame_block(const ConstantCurvatureSpec& spec) {
  Vec diag(spec.n());
  for (std::size_t i = 0; i < spec.n(); ++i) diag[i] = spec.K_values[i];
  return Mat::diagonal(diag);
}

}  // namespace mmt
