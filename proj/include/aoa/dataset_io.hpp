#pragma once

// File formats: dataset records, scene and trajectory configs, bearing
// observation files and profile exports. Angles are degrees on disk and
// radians in memory. See docs/formats.md for the schemas.

#include "aoa/channel_sim.hpp"
#include "aoa/localization.hpp"
#include "aoa/pairing.hpp"
#include "aoa/profile.hpp"

#include "json.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace aoa {

inline constexpr int kRecordSchemaVersion = 1;

enum class Environment { los, nlos };

enum class TrajectorySource { groundtruth, tracking_camera, wheel_odometry };

const char* to_string(TrajectorySource source);
/// Accepts the schema keys plus the CLI short names "camera" and "odometry".
TrajectorySource parse_trajectory_source(std::string_view name);

struct RecordMeta {
  AgentId initiator{0};
  AgentId responder{1};
  std::map<std::uint32_t, Vec3> tx_positions;
  std::string rx_grid_label;
  Environment environment = Environment::los;
  double wavelength_m = kDefaultWavelength;
};

struct DatasetRecord {
  ExchangeLog packets;
  std::map<TrajectorySource, Trajectory> trajectories;
  RecordMeta meta;
  /// Top-level fields the loader does not know, written back on save.
  nlohmann::json extras = nlohmann::json::object();

  const Trajectory& trajectory(TrajectorySource source) const;
};

/// Converts a source document into a DatasetRecord. The canonical adapter
/// reads the schema written by save_record; adapters for other dataset
/// layouts plug in here.
class RecordAdapter {
 public:
  virtual ~RecordAdapter() = default;
  virtual DatasetRecord convert(const nlohmann::json& document, std::string_view raw_text) const = 0;
};

class CanonicalRecordAdapter final : public RecordAdapter {
 public:
  DatasetRecord convert(const nlohmann::json& document, std::string_view raw_text) const override;
};

/// Throws parse-error (syntax, wrong field types; message names the field
/// path and line) or validation-error (missing streams or trajectories,
/// inconsistent agent ids, non-monotone counters).
DatasetRecord parse_record(std::string_view text, const RecordAdapter& adapter = CanonicalRecordAdapter{});
DatasetRecord load_record(const std::filesystem::path& path,
                          const RecordAdapter& adapter = CanonicalRecordAdapter{});
nlohmann::json record_to_json(const DatasetRecord& record);
void save_record(const DatasetRecord& record, const std::filesystem::path& path);

Scene parse_scene(std::string_view text);
Scene load_scene(const std::filesystem::path& path);
nlohmann::json scene_to_json(const Scene& scene);

/// Either explicit samples or an arc generator, see docs/formats.md.
Trajectory parse_trajectory(std::string_view text);
Trajectory load_trajectory(const std::filesystem::path& path);

std::vector<BearingObservation> parse_observations(std::string_view text);
std::vector<BearingObservation> load_observations(const std::filesystem::path& path);

/// Writes <dir>/profile.csv (header: azimuth bin centers in degrees, one row
/// per elevation bin) and <dir>/metrics.json.
void export_profile(const AoaProfile& profile, const BearingEstimate& estimate, const std::filesystem::path& dir);
std::string profile_to_csv(const AoaProfile& profile);
nlohmann::json metrics_to_json(const AoaProfile& profile, const BearingEstimate& estimate);

/// Reads a profile CSV back; the grid is rebuilt from the header/row counts.
AoaProfile import_profile(const std::filesystem::path& csv_path, const GridConfig& base = {});
AoaProfile parse_profile_csv(std::string_view text, const GridConfig& base = {});

/// Shortest round-trip decimal form, independent of the global locale.
std::string format_double(double value);
/// Fixed-point with `decimals` digits, independent of the global locale.
std::string format_fixed(double value, int decimals);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace aoa
