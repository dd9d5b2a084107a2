#pragma once

// Built-in metric catalog.

#include <string>
#include <vector>

#include "mmt/geometry.hpp"

namespace mmt::metrics {

/// Lorentzian signature (-, +, ..., +) of the given dimension.
std::vector<int> lorentzian(std::size_t dim);

/// Flat metric diag(signature); defaults to Minkowski.
Metric minkowski(std::size_t dim);
Metric flat(std::vector<int> signature);

/// Schwarzschild in (t, r, θ, φ). Evaluating at r <= 2m throws SingularMetric.
Metric schwarzschild(double mass);

/// Maximally symmetric chart G = η / (1 - (K/4) η_ab x^a x^b)² whose
/// curvature is K (G_{lt} G_{po} - G_{lo} G_{pt}). Any dimension, any
/// signature; carries analytic Christoffels and the frame field
/// (1 - (K/4) x²) ∂_a.
Metric constant_curvature(std::size_t dim, double K, std::vector<int> signature = {});

/// Round 2-sphere of the given radius in (θ, φ), Riemannian signature.
Metric sphere(double radius = 1.0);

/// Diagonal metric whose components are expressions in x0..x{dim-1}.
Metric diagonal(const std::vector<std::string>& components, std::vector<int> signature);

/// Copy without analytic Christoffels, forcing the finite-difference path.
Metric numeric_only(Metric m);

struct CatalogEntry {
  std::string name;
  std::string parameters;
  std::string description;
};

const std::vector<CatalogEntry>& catalog();

}  // namespace mmt::metrics
