#include "aoa/localization.hpp"

#include "aoa/error.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <string>

namespace aoa {
namespace {

constexpr double kMaxCondition = 1e12;

template <int Dim>
using VecD = Eigen::Matrix<double, Dim, 1>;
template <int Dim>
using MatD = Eigen::Matrix<double, Dim, Dim>;

template <int Dim>
struct Line {
  VecD<Dim> origin;
  VecD<Dim> direction;  // unit
};

// Solves sum_j (I - n_j n_j^T) p = sum_j (I - n_j n_j^T) a_j. Written for
// any dimension; the public API only exposes the planar case.
template <int Dim>
VecD<Dim> nearest_point_to_lines(std::span<const Line<Dim>> lines) {
  MatD<Dim> normal = MatD<Dim>::Zero();
  VecD<Dim> rhs = VecD<Dim>::Zero();
  for (const auto& l : lines) {
    const MatD<Dim> proj = MatD<Dim>::Identity() - l.direction * l.direction.transpose();
    normal += proj;
    rhs += proj * l.origin;
  }
  Eigen::SelfAdjointEigenSolver<MatD<Dim>> eig(normal);
  const auto values = eig.eigenvalues();
  const double largest = values.maxCoeff();
  const double smallest = values.minCoeff();
  if (!(smallest > 0.0) || largest / smallest > kMaxCondition) {
    raise(ErrorKind::degenerate_geometry, "bearing rays are (nearly) parallel; normal matrix condition number " +
                                              (smallest > 0.0 ? std::to_string(largest / smallest) : std::string("inf")));
  }
  return normal.ldlt().solve(rhs);
}

Vec2 unit_from_bearing(double bearing) { return Vec2(std::cos(bearing), std::sin(bearing)); }

}  // namespace

std::vector<BearingObservation> filter_outliers(std::span<const BearingObservation> observations, double tau) {
  std::vector<BearingObservation> kept;
  for (const auto& o : observations) {
    if (o.variance <= tau) kept.push_back(o);
  }
  return kept;
}

double ray_distance(const Vec2& p, const BearingObservation& obs) {
  const Vec2 n = unit_from_bearing(obs.bearing_rad);
  const Vec2 v = p - obs.anchor;
  return (v - v.dot(n) * n).norm();
}

LocalizationResult localize(std::span<const BearingObservation> observations, double tau) {
  const auto kept = filter_outliers(observations, tau);
  if (kept.size() < 2) {
    raise(ErrorKind::insufficient_observations, std::to_string(kept.size()) +
                                                    " observation(s) left after variance filtering; need at least 2");
  }
  std::vector<Line<2>> lines;
  lines.reserve(kept.size());
  for (const auto& o : kept) {
    if (!o.anchor.allFinite() || !std::isfinite(o.bearing_rad)) {
      raise(ErrorKind::invalid_argument, "observation is not finite");
    }
    lines.push_back({o.anchor, unit_from_bearing(o.bearing_rad)});
  }

  LocalizationResult result;
  result.position = nearest_point_to_lines<2>(lines);
  result.used = kept.size();
  for (const auto& o : kept) {
    const double d = ray_distance(result.position, o);
    result.residual += d * d;
    if ((result.position - o.anchor).dot(unit_from_bearing(o.bearing_rad)) < 0.0) result.behind_anchor = true;
  }
  return result;
}

double bearing_between(const Vec2& anchor, const Vec2& target) {
  const Vec2 v = target - anchor;
  if (!(v.norm() > 0.0)) raise(ErrorKind::singular_geometry, "anchor and target coincide");
  return wrap_azimuth(std::atan2(v.y(), v.x()));
}

}  // namespace aoa
