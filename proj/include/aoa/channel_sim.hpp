#pragma once

// Synthetic multipath channel generator used as ground truth in tests and
// by the `simulate` CLI command.
//
// Each path k is a point source (the transmitter, or a virtual image source
// for a reflection) with amplitude gain g_k. For a receiver at p(t):
//   h(t) = sum_k (g_k / r_k(t)) exp(-j 2pi r_k(t) / lambda) + n(t),
//   r_k(t) = |source_k - p(t)|.
// The transmitter path has gain 1. With CFO enabled each round draws
// e ~ U(-pi, pi); the forward packet carries exp(+je), the reverse exp(-je).

#include "aoa/pairing.hpp"
#include "aoa/types.hpp"

#include <cstdint>
#include <vector>

namespace aoa {

struct Reflector {
  Vec3 virtual_source = Vec3::Zero();
  double gain = 0.5;
};

struct Scene {
  Vec3 tx_position = Vec3(5.0, 0.0, 0.0);
  std::vector<Reflector> reflectors;
  /// Standard deviation of circular complex Gaussian noise, relative to the
  /// amplitude of a unit-gain path at 1 m.
  double noise_std = 0.0;
  bool cfo_enabled = false;
  double loss_rate = 0.0;
  std::uint64_t rng_seed = 0;
  double wavelength_m = kDefaultWavelength;
  AgentId initiator{0};
  AgentId responder{1};

  void validate() const;
};

/// Packet times k / rate from the trajectory start while they stay inside it.
std::vector<double> packet_times(const Trajectory& traj, double packet_rate_hz);

/// One exchange between scene.initiator and scene.responder driven by
/// round_robin_schedule. Both packets of a round share the round time and
/// counter. Throws singular-geometry if a source coincides with a
/// receiver position.
ExchangeLog simulate_channel(const Scene& scene, const Trajectory& traj, double packet_rate_hz = 200.0);

/// Noise-free channel of the scene at position p, single trip.
Complex geometric_channel(const Scene& scene, const Vec3& p);

/// Direction of the transmitter from the trajectory origin.
Direction ground_truth_bearing(const Scene& scene, const Trajectory& traj);

/// Unicycle motion from the origin at constant speeds.
struct ArcMotion {
  double linear_velocity = 0.2;   // m/s
  double angular_velocity = 0.4;  // rad/s
  double duration_s = 4.395;
  double sample_rate_hz = 100.0;
  double heading_rad = 0.0;
};

Trajectory arc_trajectory(const ArcMotion& motion);

}  // namespace aoa
