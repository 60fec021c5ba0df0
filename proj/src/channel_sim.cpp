#include "aoa/channel_sim.hpp"

#include "aoa/error.hpp"

#include <cmath>
#include <random>
#include <string>

namespace aoa {
namespace {

struct PathSource {
  Vec3 position;
  double gain;
};

std::vector<PathSource> path_sources(const Scene& scene) {
  std::vector<PathSource> paths{{scene.tx_position, 1.0}};
  for (const auto& r : scene.reflectors) paths.push_back({r.virtual_source, r.gain});
  return paths;
}

constexpr double kSingularDistance = 1e-9;

}  // namespace

void Scene::validate() const {
  if (!tx_position.allFinite()) raise(ErrorKind::invalid_argument, "tx position is not finite");
  for (std::size_t k = 0; k < reflectors.size(); ++k) {
    const auto& r = reflectors[k];
    if (!r.virtual_source.allFinite() || !(r.gain >= 0.0 && r.gain <= 1.0)) {
      raise(ErrorKind::invalid_argument, "reflector " + std::to_string(k) + " needs a finite source and gain in [0, 1]");
    }
  }
  if (!(noise_std >= 0.0)) raise(ErrorKind::invalid_argument, "noise_std must be >= 0");
  if (!(loss_rate >= 0.0 && loss_rate <= 1.0)) raise(ErrorKind::invalid_argument, "loss_rate must lie in [0, 1]");
  if (!(wavelength_m > 0.0)) raise(ErrorKind::invalid_argument, "wavelength must be positive");
  if (initiator == responder) raise(ErrorKind::invalid_argument, "initiator and responder must differ");
}

std::vector<double> packet_times(const Trajectory& traj, double packet_rate_hz) {
  if (!(packet_rate_hz > 0.0)) raise(ErrorKind::invalid_argument, "packet rate must be positive");
  if (traj.empty()) raise(ErrorKind::invalid_argument, "empty trajectory");
  const double t0 = traj.start_time();
  const double span = traj.end_time() - t0;
  if (!(span > 0.0)) raise(ErrorKind::invalid_argument, "trajectory span must be positive");
  const auto n = static_cast<std::size_t>(std::floor(span * packet_rate_hz + 1e-9)) + 1;
  std::vector<double> times;
  times.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = t0 + static_cast<double>(k) / packet_rate_hz;
    if (t > traj.end_time()) break;
    times.push_back(t);
  }
  return times;
}

Complex geometric_channel(const Scene& scene, const Vec3& p) {
  const double k = kTwoPi / scene.wavelength_m;
  Complex h{0.0, 0.0};
  for (const auto& path : path_sources(scene)) {
    const double r = (path.position - p).norm();
    if (r < kSingularDistance) {
      raise(ErrorKind::singular_geometry, "a path source coincides with the receiver position");
    }
    h += std::polar(path.gain / r, -k * r);
  }
  return h;
}

ExchangeLog simulate_channel(const Scene& scene, const Trajectory& traj, double packet_rate_hz) {
  scene.validate();
  const auto times = packet_times(traj, packet_rate_hz);
  const AgentId responders[] = {scene.responder};
  const auto schedule = round_robin_schedule(scene.initiator, responders, static_cast<int>(times.size()));
  const std::size_t slots_per_round = schedule.size() / times.size();

  std::mt19937_64 rng(scene.rng_seed);
  std::uniform_real_distribution<double> cfo_dist(-kPi, kPi);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double noise_scale = scene.noise_std / std::sqrt(2.0);

  ExchangeLog log;
  log.forward.reserve(times.size());
  log.reverse.reserve(times.size());
  for (std::size_t round = 0; round < times.size(); ++round) {
    const double t = times[round];
    const Complex clean = geometric_channel(scene, traj.position_at(t));

    // Fixed draw order per round so toggling one effect leaves the others'
    // random streams untouched.
    const double cfo = cfo_dist(rng);
    const Complex noise_fwd(gauss(rng), gauss(rng));
    const Complex noise_rev(gauss(rng), gauss(rng));
    const bool lost_fwd = unit(rng) < scene.loss_rate;
    const bool lost_rev = unit(rng) < scene.loss_rate;
    const double offset = scene.cfo_enabled ? cfo : 0.0;

    for (std::size_t s = 0; s < slots_per_round; ++s) {
      const AgentId sender = schedule[round * slots_per_round + s];
      CsiPacket pkt;
      pkt.counter = round + 1;
      pkt.timestamp = t;
      if (sender == scene.initiator) {
        if (lost_rev) continue;
        pkt.sender = scene.initiator;
        pkt.receiver = scene.responder;
        pkt.channel = clean * std::polar(1.0, -offset) + noise_scale * noise_rev;
        log.reverse.push_back(pkt);
      } else {
        if (lost_fwd) continue;
        pkt.sender = scene.responder;
        pkt.receiver = scene.initiator;
        pkt.channel = clean * std::polar(1.0, offset) + noise_scale * noise_fwd;
        log.forward.push_back(pkt);
      }
    }
  }
  return log;
}

Direction ground_truth_bearing(const Scene& scene, const Trajectory& traj) {
  const Vec3 origin = traj.empty() ? Vec3::Zero() : traj.samples().front().position;
  const Vec3 v = scene.tx_position - origin;
  if (v.norm() < kSingularDistance) raise(ErrorKind::singular_geometry, "transmitter sits at the trajectory origin");
  return direction_of(v);
}

Trajectory arc_trajectory(const ArcMotion& m) {
  if (!(m.duration_s > 0.0) || !(m.sample_rate_hz > 0.0)) {
    raise(ErrorKind::invalid_argument, "arc needs positive duration and sample rate");
  }
  auto pose = [&](double t) -> Vec3 {
    const double h0 = m.heading_rad;
    if (std::abs(m.angular_velocity) < 1e-12) {
      return Vec3(m.linear_velocity * t * std::cos(h0), m.linear_velocity * t * std::sin(h0), 0.0);
    }
    const double radius = m.linear_velocity / m.angular_velocity;
    const double h = h0 + m.angular_velocity * t;
    return Vec3(radius * (std::sin(h) - std::sin(h0)), radius * (std::cos(h0) - std::cos(h)), 0.0);
  };
  std::vector<TrajectorySample> samples;
  const auto n = static_cast<std::size_t>(std::floor(m.duration_s * m.sample_rate_hz + 1e-9));
  for (std::size_t k = 0; k <= n; ++k) {
    const double t = static_cast<double>(k) / m.sample_rate_hz;
    if (t >= m.duration_s) break;
    samples.push_back({t, pose(t)});
  }
  samples.push_back({m.duration_s, pose(m.duration_s)});
  samples.front().position.setZero();
  return Trajectory(std::move(samples));
}

}  // namespace aoa
