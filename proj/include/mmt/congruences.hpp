#pragma once

// Built-in analytic congruences. Each supplies the coordinate acceleration
// field of its observers (for integrate_accelerated_curve), a reference
// worldline, and the frame-component derivatives V_{C;A}, V̇_A, V̇_{A;C}
// evaluated in the observer's Fermi-Walker frame, whose spatial legs are
// ordered like the coordinates.

#include <string>
#include <vector>

#include "mmt/geometry.hpp"
#include "mmt/transport.hpp"

namespace mmt::congruences {

struct Congruence {
  std::string name;
  /// Spacetime the observers live in.
  Metric metric;
  AccelerationField acceleration;
  Point x0;
  Vec v0;
  CongruenceData data;
};

/// Uniformly accelerated (Rindler) observers in 4D Minkowski space with proper
/// acceleration g along x; reference worldline starts at x = 1/g at rest.
Congruence rindler(double g);

/// Static observers outside a Schwarzschild mass m, reference worldline at
/// radius r in the equatorial plane.
Congruence schwarzschild_static(double m, double r);

struct CatalogEntry {
  std::string name;
  std::string parameters;
  std::string description;
};

const std::vector<CatalogEntry>& catalog();

}  // namespace mmt::congruences
