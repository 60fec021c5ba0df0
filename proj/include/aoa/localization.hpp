#pragma once

// Least-squares intersection of bearing rays.

#include "aoa/types.hpp"

#include <span>
#include <vector>

namespace aoa {

/// A ray from a known anchor toward the agent being localized.
struct BearingObservation {
  Vec2 anchor = Vec2::Zero();
  double bearing_rad = 0.0;  // direction of the ray, wrapped to [-pi, pi)
  double variance = 0.0;     // profile variance of the estimate that produced it
};

struct LocalizationResult {
  Vec2 position = Vec2::Zero();
  double residual = 0.0;  // sum of squared point-to-line distances
  std::size_t used = 0;
  bool behind_anchor = false;  // solution lies behind at least one ray origin
};

/// Observations with variance <= tau, in input order.
std::vector<BearingObservation> filter_outliers(std::span<const BearingObservation> observations, double tau);

/// Perpendicular distance from p to the line a + s n.
double ray_distance(const Vec2& p, const BearingObservation& obs);

/// argmin_p sum_j D_j(p)^2 over the observations that survive filter_outliers.
/// Throws insufficient-observations when fewer than 2 survive and
/// degenerate-geometry when the normal matrix condition number exceeds 1e12.
LocalizationResult localize(std::span<const BearingObservation> observations, double tau = 0.9);

/// Bearing of `target` as seen from `anchor`.
double bearing_between(const Vec2& anchor, const Vec2& target);

}  // namespace aoa
