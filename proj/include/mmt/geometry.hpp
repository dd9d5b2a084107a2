#pragma once

// Metrics, Christoffel symbols, Riemann curvature in coordinates and in an
// orthonormal frame.
//
// Index conventions: Γ^l_{pq} is stored as (l, p, q). The Riemann tensor is
// K^l_{pot} = ∂_o Γ^l_{pt} - ∂_t Γ^l_{po} + Γ^l_{so} Γ^s_{pt} - Γ^l_{st} Γ^s_{po},
// so that a unit 2-sphere has K_{θφθφ} = sin²θ. With this convention the
// maximally symmetric form K (G_{lt} G_{po} - G_{lo} G_{pt}) gives the frame
// tidal matrix K_{0A0C} = K δ_{AC}.

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "mmt/linalg.hpp"

namespace mmt {

using Point = Vec;

/// Dense rank-3 array with equal extents.
class Tensor3 {
 public:
  Tensor3() = default;
  explicit Tensor3(std::size_t dim) : dim_(dim), data_(dim * dim * dim, 0.0) {}

  std::size_t dim() const noexcept { return dim_; }
  double operator()(std::size_t a, std::size_t b, std::size_t c) const {
    return data_[(a * dim_ + b) * dim_ + c];
  }
  double& operator()(std::size_t a, std::size_t b, std::size_t c) {
    return data_[(a * dim_ + b) * dim_ + c];
  }
  const std::vector<double>& values() const noexcept { return data_; }
  double max_abs() const;

 private:
  std::size_t dim_ = 0;
  std::vector<double> data_;
};

/// Dense rank-4 array with equal extents.
class Tensor4 {
 public:
  Tensor4() = default;
  explicit Tensor4(std::size_t dim) : dim_(dim), data_(dim * dim * dim * dim, 0.0) {}

  std::size_t dim() const noexcept { return dim_; }
  double operator()(std::size_t a, std::size_t b, std::size_t c, std::size_t d) const {
    return data_[((a * dim_ + b) * dim_ + c) * dim_ + d];
  }
  double& operator()(std::size_t a, std::size_t b, std::size_t c, std::size_t d) {
    return data_[((a * dim_ + b) * dim_ + c) * dim_ + d];
  }
  const std::vector<double>& values() const noexcept { return data_; }
  double max_abs() const;

 private:
  std::size_t dim_ = 0;
  std::vector<double> data_;
};

/// A pseudo-Riemannian metric on a single chart.
///
/// `eval` is required. `christoffel` and `frame_field` are optional analytic
/// shortcuts; when `christoffel` is empty it is computed by finite
/// differences, and `frame_field` (columns = orthonormal frame vectors) is only
/// needed for the Ricci-rotation cross-check.
struct Metric {
  std::string label;
  std::size_t dim = 0;
  std::vector<int> signature;
  std::function<Mat(const Point&)> eval;
  std::function<Tensor3(const Point&)> christoffel;
  std::function<Mat(const Point&)> frame_field;

  /// Evaluates and validates G at x: correct shape, finite, exactly symmetric.
  Mat at(const Point& x) const;
  Mat eta() const;
};

/// Frame vectors as columns of E in coordinate components, with E^T G E = eta.
struct Vielbein {
  Mat E;
  std::vector<int> eta;

  std::size_t dim() const noexcept { return E.rows(); }
  Vec vector(std::size_t a) const { return E.col(a); }
  Mat eta_matrix() const;
};

/// Coordinate Riemann tensor K^l_{pot} (first index up) at `point`.
struct RiemannAtPoint {
  Tensor4 components;
  Point point;
};

/// Per-direction curvature constants K_1..K_n of a maximally symmetric target.
struct ConstantCurvatureSpec {
  std::vector<double> K_values;

  static ConstantCurvatureSpec uniform(double K, std::size_t n) {
    return ConstantCurvatureSpec{std::vector<double>(n, K)};
  }
  std::size_t n() const noexcept { return K_values.size(); }
};

struct FiniteDifferenceOptions {
  /// Relative step for derivatives of the metric, and of analytic
  /// Christoffel symbols.
  double relative_step = 1e-5;
  /// Relative step for derivatives of quantities that are themselves finite
  /// differences (Christoffels of a metric without analytic ones, frame
  /// connection coefficients).
  double nested_relative_step = 1e-5;
};

double inner(const Mat& g, const Vec& a, const Vec& b);

/// Γ^l_{pq}; analytic if the metric carries it, else central differences.
Tensor3 christoffel(const Metric& m, const Point& x, const FiniteDifferenceOptions& opt = {});
/// Always uses central differences of the metric.
Tensor3 christoffel_numeric(const Metric& m, const Point& x,
                            const FiniteDifferenceOptions& opt = {});

RiemannAtPoint riemann(const Metric& m, const Point& x, const FiniteDifferenceOptions& opt = {});

/// K_{lpot} = G_{ls} K^s_{pot}.
Tensor4 lower_first_index(const RiemannAtPoint& r, const Mat& g);

/// Gram-Schmidt on the coordinate basis in order, timelike first.
Vielbein build_vielbein(const Metric& m, const Point& x);

/// Orthonormal frame whose column 0 is the unit timelike vector along `v`;
/// the remaining columns come from Gram-Schmidt on the coordinate basis,
/// taking at each slot the first coordinate vector (in order) that keeps at
/// least a tenth of its own norm after projection.
Vielbein build_vielbein_with_tangent(const Metric& m, const Point& x, const Vec& v);

/// ||E^T G E - eta||_inf (largest absolute entry).
double frame_defect(const Mat& g, const Vielbein& e);

/// K_{(A)(B)(C)(D)} = K_{lpot} E^l_A E^p_B E^o_C E^t_D.
Tensor4 project_curvature(const RiemannAtPoint& r, const Metric& m, const Vielbein& e);

/// Frame curvature assembled from Ricci rotation coefficients of the metric's
/// analytic frame field. Throws UnsupportedMetric without a frame field.
Tensor4 ricci_rotation_curvature(const Metric& m, const Point& x,
                                 const FiniteDifferenceOptions& opt = {});

/// diag(K_1, ..., K_n).
Mat constant_curvature_frame_block(const ConstantCurvatureSpec& spec);

}  // namespace mmt
