#include "aoa/types.hpp"

#include "aoa/error.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <string>

namespace aoa {

double wrap_azimuth(double angle_rad) {
  if (!std::isfinite(angle_rad)) raise(ErrorKind::invalid_argument, "azimuth is not finite");
  double wrapped = std::fmod(angle_rad + kPi, kTwoPi);
  if (wrapped < 0.0) wrapped += kTwoPi;
  wrapped -= kPi;
  // fmod rounding can land exactly on +pi
  if (wrapped >= kPi) wrapped -= kTwoPi;
  return wrapped;
}

double azimuth_difference(double a_rad, double b_rad) {
  double d = std::remainder(a_rad - b_rad, kTwoPi);
  return d;
}

Direction Direction::from_angles(double azimuth_rad, double elevation_rad) {
  if (!std::isfinite(elevation_rad) || elevation_rad < 0.0 || elevation_rad > kPi) {
    raise(ErrorKind::invalid_argument, "elevation must lie in [0, pi], got " + std::to_string(elevation_rad));
  }
  return Direction{wrap_azimuth(azimuth_rad), elevation_rad};
}

Vec3 direction_unit_vector(const Direction& d) {
  const double st = std::sin(d.elevation_rad);
  return Vec3(std::cos(d.azimuth_rad) * st, std::sin(d.azimuth_rad) * st, std::cos(d.elevation_rad));
}

Direction direction_of(const Vec3& v) {
  const double r = v.norm();
  if (!(r > 0.0)) raise(ErrorKind::singular_geometry, "direction of a zero vector is undefined");
  const double elevation = std::acos(std::clamp(v.z() / r, -1.0, 1.0));
  return Direction{wrap_azimuth(std::atan2(v.y(), v.x())), elevation};
}

void GridConfig::validate() const {
  if (azimuth_bins < 4) raise(ErrorKind::invalid_argument, "azimuth_bins must be >= 4");
  if (elevation_bins < 2) raise(ErrorKind::invalid_argument, "elevation_bins must be >= 2");
  if (!(wavelength_m > 0.0) || !std::isfinite(wavelength_m)) {
    raise(ErrorKind::invalid_argument, "wavelength must be positive");
  }
}

Trajectory::Trajectory(std::vector<TrajectorySample> samples) : samples_(std::move(samples)) {
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    const auto& s = samples_[i];
    if (!std::isfinite(s.t) || !s.position.allFinite()) {
      raise(ErrorKind::invalid_argument, "trajectory sample " + std::to_string(i) + " is not finite");
    }
    if (i > 0 && !(s.t > samples_[i - 1].t)) {
      raise(ErrorKind::invalid_argument,
            "trajectory timestamps must strictly increase (sample " + std::to_string(i) + ")");
    }
  }
  if (!samples_.empty() && samples_.front().position.norm() > 1e-12) {
    raise(ErrorKind::invalid_argument, "trajectory must start at the origin; use Trajectory::from_global");
  }
}

Trajectory Trajectory::from_global(std::span<const TrajectorySample> samples, double heading_rad) {
  std::vector<TrajectorySample> local;
  local.reserve(samples.size());
  if (samples.empty()) return Trajectory{};
  const Vec3 origin = samples.front().position;
  const Eigen::Matrix3d to_local =
      Eigen::AngleAxisd(-heading_rad, Vec3::UnitZ()).toRotationMatrix();
  for (const auto& s : samples) local.push_back({s.t, to_local * (s.position - origin)});
  local.front().position.setZero();
  return Trajectory(std::move(local));
}

double Trajectory::start_time() const {
  if (samples_.empty()) raise(ErrorKind::invalid_argument, "empty trajectory");
  return samples_.front().t;
}

double Trajectory::end_time() const {
  if (samples_.empty()) raise(ErrorKind::invalid_argument, "empty trajectory");
  return samples_.back().t;
}

bool Trajectory::covers(double t) const {
  return !samples_.empty() && t >= samples_.front().t && t <= samples_.back().t;
}

Vec3 Trajectory::position_at(double t) const {
  if (!covers(t)) raise(ErrorKind::invalid_argument, "time " + std::to_string(t) + " outside trajectory span");
  auto hi = std::lower_bound(samples_.begin(), samples_.end(), t,
                             [](const TrajectorySample& s, double v) { return s.t < v; });
  if (hi->t == t) return hi->position;
  auto lo = hi - 1;
  const double w = (t - lo->t) / (hi->t - lo->t);
  return lo->position + w * (hi->position - lo->position);
}

double Trajectory::extent() const {
  double best = 0.0;
  for (const auto& s : samples_) best = std::max(best, s.position.norm());
  return best;
}

}  // namespace aoa
