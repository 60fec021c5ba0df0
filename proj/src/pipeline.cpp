#include "aoa/pipeline.hpp"

#include "aoa/error.hpp"

#include <charconv>
#include <chrono>

namespace aoa {

PipelineResult run_pipeline(const ExchangeLog& log, const Trajectory& traj, double wavelength_m,
                            const PipelineOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  GridConfig cfg;
  cfg.azimuth_bins = opts.azimuth_bins;
  cfg.elevation_bins = opts.elevation_bins;
  cfg.wavelength_m = wavelength_m;
  cfg.phase_factor = opts.pairing.phase_factor;

  auto grid = build_grid(cfg);
  PairedChannel channel = build_paired_channel(log, traj, opts.pairing);
  if (opts.subsample > 1) channel = channel.subsampled(opts.subsample);
  const auto positions = channel.positions();
  const auto table = precompute_steering(grid, positions, SteeringOptions{opts.memory_budget_bytes, opts.threads});
  AoaProfile profile = compute_profile(channel, table, ProfileOptions{opts.threads});
  BearingEstimate estimate = analyze_profile(profile, opts.estimate);
  const double runtime = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  estimate.compute_time_s = runtime;
  return PipelineResult{std::move(channel), std::move(profile), std::move(estimate), runtime};
}

PipelineResult run_pipeline(const DatasetRecord& record, const PipelineOptions& opts) {
  return run_pipeline(record.packets, record.trajectory(opts.trajectory), record.meta.wavelength_m, opts);
}

std::pair<int, int> parse_resolution(std::string_view text) {
  const auto x = text.find('x');
  auto parse = [&](std::string_view part) {
    int v = 0;
    const auto res = std::from_chars(part.data(), part.data() + part.size(), v);
    if (part.empty() || res.ec != std::errc{} || res.ptr != part.data() + part.size()) {
      raise(ErrorKind::invalid_argument, "resolution must look like 360x180, got '" + std::string(text) + "'");
    }
    return v;
  };
  if (x == std::string_view::npos) parse({});
  return {parse(text.substr(0, x)), parse(text.substr(x + 1))};
}

DatasetRecord simulated_record(const Scene& scene, const Trajectory& traj, double packet_rate_hz) {
  DatasetRecord rec;
  rec.packets = simulate_channel(scene, traj, packet_rate_hz);
  rec.trajectories.emplace(TrajectorySource::groundtruth, traj);
  rec.meta.initiator = scene.initiator;
  rec.meta.responder = scene.responder;
  rec.meta.tx_positions[scene.responder.value] = scene.tx_position;
  rec.meta.environment = scene.reflectors.empty() ? Environment::los : Environment::nlos;
  rec.meta.rx_grid_label = "sim";
  rec.meta.wavelength_m = scene.wavelength_m;
  return rec;
}

Scene standard_scene() {
  Scene s;
  s.tx_position = 40.0 * direction_unit_vector(Direction{deg_to_rad(35.0), kPi / 2.0});
  s.cfo_enabled = true;
  s.rng_seed = 7;
  return s;
}

Trajectory standard_trajectory() { return arc_trajectory(ArcMotion{}); }

DatasetRecord standard_fixture() { return simulated_record(standard_scene(), standard_trajectory()); }

const std::vector<RuntimeConfig>& runtime_configs() {
  static const std::vector<RuntimeConfig> configs = {
      {"default", 360, 180, 1},
      {"lowres", 180, 90, 1},
      {"subsample", 360, 180, 2},
      {"lowsub", 180, 90, 2},
  };
  return configs;
}

const RuntimeConfig& runtime_config(std::string_view name) {
  for (const auto& c : runtime_configs()) {
    if (c.name == name) return c;
  }
  raise(ErrorKind::invalid_argument, "unknown runtime config '" + std::string(name) +
                                         "' (default, lowres, subsample, lowsub)");
}

}  // namespace aoa
