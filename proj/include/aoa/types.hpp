#pragma once

// Shared domain types and angle conventions.
//
// Spherical convention used everywhere in the library:
//   azimuth   phi   in [-pi, pi), counter-clockwise from +x
//   elevation theta in [0, pi],   polar angle measured from +z
// so the horizontal x-y plane is theta = pi/2 and
//   u(phi, theta) = (cos phi sin theta, sin phi sin theta, cos theta).

#include <Eigen/Core>

#include <compare>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <vector>

namespace aoa {

using Complex = std::complex<double>;
using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// 5 GHz WiFi carrier, ~6 cm.
inline constexpr double kDefaultWavelength = 0.06;

inline constexpr double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline constexpr double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

struct AgentId {
  std::uint32_t value = 0;

  friend constexpr auto operator<=>(AgentId, AgentId) = default;
};

/// Maps any finite angle onto [-pi, pi). Throws invalid-argument on NaN/inf.
double wrap_azimuth(double angle_rad);

/// Signed angular difference a - b folded onto [-pi, pi].
double azimuth_difference(double a_rad, double b_rad);

struct Direction {
  double azimuth_rad = 0.0;
  double elevation_rad = kPi / 2.0;

  /// Wraps the azimuth and validates the elevation range.
  static Direction from_angles(double azimuth_rad, double elevation_rad);
};

Vec3 direction_unit_vector(const Direction& d);

/// Direction of a non-zero vector. Throws singular-geometry on a zero vector.
Direction direction_of(const Vec3& v);

/// kappa in the steering phase kappa * (2 pi / lambda) * (u . d).
enum class PhaseFactor { single_trip = 1, round_trip = 2 };

inline constexpr double phase_multiplier(PhaseFactor f) {
  return f == PhaseFactor::round_trip ? 2.0 : 1.0;
}

struct GridConfig {
  int azimuth_bins = 360;
  int elevation_bins = 180;
  double wavelength_m = kDefaultWavelength;
  PhaseFactor phase_factor = PhaseFactor::round_trip;

  void validate() const;
  std::size_t cell_count() const {
    return static_cast<std::size_t>(azimuth_bins) * static_cast<std::size_t>(elevation_bins);
  }
};

/// One channel observation reported by the radio of `receiver` for a packet
/// broadcast by `sender`.
struct CsiPacket {
  AgentId sender;
  AgentId receiver;
  std::uint64_t counter = 0;
  double timestamp = 0.0;
  Complex channel{0.0, 0.0};

  bool valid() const { return std::abs(channel) > 0.0; }
};

struct TrajectorySample {
  double t = 0.0;
  Vec3 position = Vec3::Zero();
};

/// Receiver displacement over the measurement window, expressed in the
/// receiver's frame at the first sample. Timestamps strictly increase and
/// the first position is the origin.
class Trajectory {
 public:
  Trajectory() = default;
  explicit Trajectory(std::vector<TrajectorySample> samples);

  /// Rebase samples from any global frame: subtract the first position and
  /// rotate by -heading_rad about +z so the start pose becomes the origin.
  static Trajectory from_global(std::span<const TrajectorySample> samples, double heading_rad = 0.0);

  std::span<const TrajectorySample> samples() const { return samples_; }
  std::size_t size() const { return samples_.size(); }
  bool empty() const { return samples_.empty(); }
  double start_time() const;
  double end_time() const;
  bool covers(double t) const;

  /// Linear interpolation between the bracketing samples.
  /// Throws invalid-argument if t lies outside [start_time, end_time].
  Vec3 position_at(double t) const;

  /// Largest distance from the start position over the whole window.
  double extent() const;

  /// SAR needs at least two wavelengths of motion; this is reported, not enforced.
  bool aperture_sufficient(double wavelength_m) const { return extent() >= 2.0 * wavelength_m; }

 private:
  std::vector<TrajectorySample> samples_;
};

}  // namespace aoa
