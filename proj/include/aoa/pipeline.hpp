#pragma once

// End-to-end bearing estimation on a record, plus the standard simulated
// fixture and the runtime configurations used by `aoa bench`.

#include "aoa/dataset_io.hpp"
#include "aoa/profile.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace aoa {

struct PipelineOptions {
  int azimuth_bins = 360;
  int elevation_bins = 180;
  std::size_t subsample = 1;
  unsigned threads = 1;
  PairingOptions pairing;
  EstimateOptions estimate;
  TrajectorySource trajectory = TrajectorySource::groundtruth;
  std::size_t memory_budget_bytes = std::size_t{1} << 30;
};

struct PipelineResult {
  PairedChannel channel;
  AoaProfile profile;
  BearingEstimate estimate;
  double runtime_s = 0.0;  // pairing through peak extraction
};

/// pair -> cancel CFO -> align -> sub-sample -> steering table -> profile ->
/// variance and peaks.
PipelineResult run_pipeline(const ExchangeLog& log, const Trajectory& traj, double wavelength_m,
                            const PipelineOptions& opts);
PipelineResult run_pipeline(const DatasetRecord& record, const PipelineOptions& opts);

/// "360x180" -> {360, 180}.
std::pair<int, int> parse_resolution(std::string_view text);

/// Record from the simulator: one transmitter at `tx_position`, CFO on,
/// 200 packets/s along a 0.2 m/s, 0.4 rad/s arc (880 packets).
DatasetRecord simulated_record(const Scene& scene, const Trajectory& traj, double packet_rate_hz = 200.0);
Scene standard_scene();
Trajectory standard_trajectory();
DatasetRecord standard_fixture();

struct RuntimeConfig {
  std::string name;
  int azimuth_bins;
  int elevation_bins;
  std::size_t subsample;
};

/// default, lowres, subsample, lowsub.
const std::vector<RuntimeConfig>& runtime_configs();
const RuntimeConfig& runtime_config(std::string_view name);

}  // namespace aoa
