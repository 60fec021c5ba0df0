#include "aoa/dataset_io.hpp"
#include "aoa/error.hpp"
#include "aoa/localization.hpp"
#include "aoa/pipeline.hpp"

#include "CLI11.hpp"

#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace aoa;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitRejected = 2;

unsigned default_threads() {
  const char* env = std::getenv("AOA_THREADS");
  if (env == nullptr || *env == '\0') return 1;
  try {
    const long v = std::stol(env);
    if (v >= 1) return static_cast<unsigned>(v);
  } catch (const std::exception&) {
  }
  raise(ErrorKind::invalid_argument, std::string("AOA_THREADS must be a positive integer, got '") + env + "'");
}

std::string deg(double rad) { return format_fixed(rad_to_deg(rad), 2); }

std::vector<std::string> split_list(const std::vector<std::string>& items) {
  std::vector<std::string> out;
  for (const auto& item : items) {
    std::stringstream ss(item);
    std::string part;
    while (std::getline(ss, part, ',')) {
      if (!part.empty()) out.push_back(part);
    }
  }
  return out;
}

struct EstimateArgs {
  std::string record;
  std::string resolution = "360x180";
  std::size_t subsample = 1;
  unsigned threads = 0;
  double tau = 0.9;
  double k_percent = 40.0;
  double alpha_deg = 10.0;
  int top_n = 4;
  std::string traj = "groundtruth";
  std::string mode = "round-trip";
  std::string variance = "normalized";
  std::uint32_t max_skew = 0;
  std::string out;
};

int run_estimate(const EstimateArgs& a) {
  PipelineOptions opts;
  std::tie(opts.azimuth_bins, opts.elevation_bins) = parse_resolution(a.resolution);
  if (a.subsample < 1) raise(ErrorKind::invalid_argument, "--subsample must be >= 1");
  opts.subsample = a.subsample;
  opts.threads = a.threads == 0 ? default_threads() : a.threads;
  opts.trajectory = parse_trajectory_source(a.traj);
  opts.pairing.max_counter_skew = a.max_skew;
  opts.pairing.phase_factor = a.mode == "single-trip" ? PhaseFactor::single_trip : PhaseFactor::round_trip;
  opts.estimate.tau = a.tau;
  opts.estimate.peaks = PeakOptions{a.top_n, a.k_percent, a.alpha_deg};
  opts.estimate.variance_form = a.variance == "literal" ? VarianceForm::literal : VarianceForm::normalized;
  opts.estimate.threads = opts.threads;

  const DatasetRecord record = load_record(a.record);
  const PipelineResult result = run_pipeline(record, opts);
  const BearingEstimate& est = result.estimate;
  if (!a.out.empty()) export_profile(result.profile, est, a.out);

  std::string peaks;
  for (const auto& p : est.top_n) {
    if (!peaks.empty()) peaks += ';';
    peaks += deg(p.direction.azimuth_rad);
  }
  std::cout << "aoa_deg=" << deg(est.aoa_max.direction.azimuth_rad)
            << " elevation_deg=" << deg(est.aoa_max.direction.elevation_rad)
            << " variance=" << format_fixed(est.variance, 4) << " accepted=" << (est.accepted ? "true" : "false")
            << " peaks=" << est.top_n.size() << " peak_aoa_deg=" << (peaks.empty() ? "-" : peaks)
            << " n_packets=" << est.n_packets_used << " runtime_s=" << format_fixed(result.runtime_s, 3) << '\n';
  return est.accepted ? kExitOk : kExitRejected;
}

struct SimulateArgs {
  std::string scene;
  std::string traj;
  std::string out;
  std::optional<std::uint64_t> seed;
  double rate = 200.0;
};

int run_simulate(const SimulateArgs& a) {
  Scene scene = load_scene(a.scene);
  if (a.seed) scene.rng_seed = *a.seed;
  const Trajectory traj = load_trajectory(a.traj);
  const DatasetRecord record = simulated_record(scene, traj, a.rate);
  save_record(record, a.out);
  const Direction truth = ground_truth_bearing(scene, traj);
  std::cout << "forward=" << record.packets.forward.size() << " reverse=" << record.packets.reverse.size()
            << " truth_aoa_deg=" << deg(truth.azimuth_rad) << " truth_elevation_deg=" << deg(truth.elevation_rad)
            << " seed=" << scene.rng_seed << " out=" << a.out << '\n';
  return kExitOk;
}

struct LocalizeArgs {
  std::string bearings;
  double tau = 0.9;
  std::string out;
};

int run_localize(const LocalizeArgs& a) {
  const auto observations = load_observations(a.bearings);
  const LocalizationResult r = localize(observations, a.tau);
  if (!a.out.empty()) {
    nlohmann::ordered_json j;
    j["position"] = {r.position.x(), r.position.y()};
    j["residual"] = r.residual;
    j["used"] = r.used;
    j["total"] = observations.size();
    j["behind_anchor"] = r.behind_anchor;
    write_text_file(a.out, j.dump(2) + "\n");
  }
  std::cout << "x=" << format_fixed(r.position.x(), 4) << " y=" << format_fixed(r.position.y(), 4)
            << " residual=" << format_fixed(r.residual, 6) << " used=" << r.used << " total=" << observations.size()
            << " behind_anchor=" << (r.behind_anchor ? "true" : "false") << '\n';
  return kExitOk;
}

struct BenchArgs {
  std::vector<std::string> configs;
  std::vector<std::string> threads;
  int repeat = 1;
  bool csv = false;
};

int run_bench(const BenchArgs& a) {
  auto names = split_list(a.configs);
  if (names.empty()) {
    for (const auto& c : runtime_configs()) names.push_back(c.name);
  }
  std::vector<unsigned> thread_counts;
  for (const auto& t : split_list(a.threads)) {
    int v = 0;
    try {
      v = std::stoi(t);
    } catch (const std::exception&) {
    }
    if (v < 1) raise(ErrorKind::invalid_argument, "--threads entries must be positive integers, got '" + t + "'");
    thread_counts.push_back(static_cast<unsigned>(v));
  }
  if (thread_counts.empty()) thread_counts.push_back(default_threads());
  if (a.repeat < 1) raise(ErrorKind::invalid_argument, "--repeat must be >= 1");

  const DatasetRecord fixture = standard_fixture();
  if (a.csv) {
    std::cout << "config,resolution,subsample,threads,packets,runtime_s,aoa_deg\n";
  } else {
    std::cout << "config     resolution  subsample  threads  packets  runtime_s  aoa_deg\n";
  }
  for (const auto& name : names) {
    const RuntimeConfig& cfg = runtime_config(name);
    for (unsigned threads : thread_counts) {
      PipelineOptions opts;
      opts.azimuth_bins = cfg.azimuth_bins;
      opts.elevation_bins = cfg.elevation_bins;
      opts.subsample = cfg.subsample;
      opts.threads = threads;
      double best = 0.0;
      PipelineResult last = run_pipeline(fixture, opts);
      best = last.runtime_s;
      for (int i = 1; i < a.repeat; ++i) {
        last = run_pipeline(fixture, opts);
        best = std::min(best, last.runtime_s);
      }
      const std::string res = std::to_string(cfg.azimuth_bins) + "x" + std::to_string(cfg.elevation_bins);
      const auto& est = last.estimate;
      if (a.csv) {
        std::cout << cfg.name << ',' << res << ',' << cfg.subsample << ',' << threads << ',' << est.n_packets_used << ','
                  << format_fixed(best, 4) << ',' << deg(est.aoa_max.direction.azimuth_rad) << '\n';
      } else {
        std::string line(80, ' ');
        auto put = [&](std::size_t col, const std::string& s) { line.replace(col, s.size(), s); };
        put(0, cfg.name);
        put(11, res);
        put(23, std::to_string(cfg.subsample));
        put(34, std::to_string(threads));
        put(43, std::to_string(est.n_packets_used));
        put(52, format_fixed(best, 4));
        put(63, deg(est.aoa_max.direction.azimuth_rad));
        line.erase(line.find_last_not_of(' ') + 1);
        std::cout << line << '\n';
      }
    }
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bearing estimation from robot motion and Wi-Fi channel measurements"};
  app.require_subcommand(1);
  int status = kExitOk;

  EstimateArgs est;
  auto* estimate = app.add_subcommand("estimate", "Estimate the bearing of the transmitter in a record");
  estimate->add_option("record", est.record, "Dataset record (JSON)")->required();
  estimate->add_option("--resolution", est.resolution, "Grid as AZIMUTHxELEVATION bins")->capture_default_str();
  estimate->add_option("--subsample", est.subsample, "Keep every Nth paired packet")->capture_default_str();
  estimate->add_option("--threads", est.threads, "Profile threads (default: $AOA_THREADS or 1)");
  estimate->add_option("--tau", est.tau, "Variance rejection threshold")->capture_default_str();
  estimate->add_option("--k", est.k_percent, "Peak floor, percent of the maximum")->capture_default_str();
  estimate->add_option("--alpha", est.alpha_deg, "Peak exclusion window, degrees")->capture_default_str();
  estimate->add_option("--topn", est.top_n, "Number of peaks to report")->capture_default_str();
  estimate->add_option("--traj", est.traj, "Trajectory source")
      ->check(CLI::IsMember({"groundtruth", "camera", "odometry", "tracking_camera", "wheel_odometry"}))
      ->capture_default_str();
  estimate->add_option("--mode", est.mode, "Phase model")
      ->check(CLI::IsMember({"round-trip", "single-trip"}))
      ->capture_default_str();
  estimate->add_option("--variance", est.variance, "Variance normalization")
      ->check(CLI::IsMember({"normalized", "literal"}))
      ->capture_default_str();
  estimate->add_option("--max-skew", est.max_skew, "Counter tolerance when pairing")->capture_default_str();
  estimate->add_option("--out", est.out, "Directory for profile.csv and metrics.json");
  estimate->callback([&] { status = run_estimate(est); });

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Generate a record from a scene and a trajectory");
  simulate->add_option("scene", sim.scene, "Scene config (JSON)")->required();
  simulate->add_option("trajectory", sim.traj, "Trajectory config (JSON)")->required();
  simulate->add_option("--seed", sim.seed, "Override the scene seed");
  simulate->add_option("--rate", sim.rate, "Packet rate, Hz")->capture_default_str();
  simulate->add_option("--out", sim.out, "Output record path")->required();
  simulate->callback([&] { status = run_simulate(sim); });

  LocalizeArgs loc;
  auto* localize_cmd = app.add_subcommand("localize", "Least-squares position from bearing observations");
  localize_cmd->add_option("bearings", loc.bearings, "Observation file (JSON)")->required();
  localize_cmd->add_option("--tau", loc.tau, "Variance rejection threshold")->capture_default_str();
  localize_cmd->add_option("--out", loc.out, "Write the result as JSON");
  localize_cmd->callback([&] { status = run_localize(loc); });

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Time the runtime configurations on the standard fixture");
  bench_cmd->add_option("--config", bench.configs, "default, lowres, subsample, lowsub (comma separated)");
  bench_cmd->add_option("--threads", bench.threads, "Thread counts (comma separated)");
  bench_cmd->add_option("--repeat", bench.repeat, "Runs per cell; the fastest is reported")->capture_default_str();
  bench_cmd->add_flag("--csv", bench.csv, "CSV output");
  bench_cmd->callback([&] { status = run_bench(bench); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  } catch (const aoa::Error& e) {
    std::cerr << "aoa: " << e.what() << '\n';
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "aoa: " << e.what() << '\n';
    return kExitError;
  }
  return status;
}
