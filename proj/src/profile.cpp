#include "aoa/profile.hpp"

#include "aoa/error.hpp"
#include "parallel.hpp"
#include "trig_kernel.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <string>

namespace aoa {
namespace {

struct Workspace {
  std::vector<double> phase;
  std::vector<double> cos;
  std::vector<double> sin;
  explicit Workspace(std::size_t n) : phase(n), cos(n), sin(n) {}
};

// Sequential per-cell reduction over packets; the summation order is fixed
// so the result is independent of how cells are distributed over threads.
double bartlett_cell(std::span<const double> phases, std::span<const Complex> h, Workspace& ws) {
  detail::cos_sin(phases.data(), ws.cos.data(), ws.sin.data(), phases.size());
  double re = 0.0;
  double im = 0.0;
  for (std::size_t m = 0; m < phases.size(); ++m) {
    const double c = ws.cos[m];
    const double s = ws.sin[m];
    re += h[m].real() * c + h[m].imag() * s;
    im += h[m].imag() * c - h[m].real() * s;
  }
  return re * re + im * im;
}

void check_channel(const PairedChannel& channel) {
  if (channel.size() < 2) raise(ErrorKind::invalid_argument, "profile needs at least 2 channel samples");
  for (const auto& e : channel.entries) {
    if (!std::isfinite(e.h.real()) || !std::isfinite(e.h.imag())) {
      raise(ErrorKind::invalid_argument, "channel sample is not finite");
    }
  }
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

bool is_local_max(const AoaProfile& p, std::size_t cell) {
  const auto& g = p.grid();
  const int na = g.azimuth_bins();
  const int ne = g.elevation_bins();
  const int e0 = g.elevation_index(cell);
  const int a0 = g.azimuth_index(cell);
  const double v = p[cell];
  for (int de = -1; de <= 1; ++de) {
    const int e = e0 + de;
    if (e < 0 || e >= ne) continue;
    for (int da = -1; da <= 1; ++da) {
      if (de == 0 && da == 0) continue;
      const int a = (a0 + da + na) % na;
      const std::size_t other = g.index(e, a);
      if (other == cell) continue;
      const double w = p[other];
      if (w > v || (w == v && other < cell)) return false;
    }
  }
  return true;
}

Peak make_peak(const AoaProfile& p, std::size_t cell, int rank) {
  return Peak{p.grid().directions()[cell], p[cell], rank, cell};
}

}  // namespace

AoaProfile::AoaProfile(std::shared_ptr<const DirectionGrid> grid, std::vector<double> magnitudes,
                       std::size_t n_packets_used, double compute_time_s)
    : grid_(std::move(grid)),
      magnitudes_(std::move(magnitudes)),
      n_packets_used_(n_packets_used),
      compute_time_s_(compute_time_s) {
  if (!grid_) raise(ErrorKind::invalid_argument, "profile needs a grid");
  if (magnitudes_.size() != grid_->size()) {
    raise(ErrorKind::invalid_argument, "profile has " + std::to_string(magnitudes_.size()) +
                                           " cells, grid has " + std::to_string(grid_->size()));
  }
  for (double v : magnitudes_) {
    if (!(v >= 0.0) || !std::isfinite(v)) raise(ErrorKind::invalid_argument, "profile cells must be finite and >= 0");
  }
}

std::size_t AoaProfile::argmax() const {
  return static_cast<std::size_t>(std::max_element(magnitudes_.begin(), magnitudes_.end()) - magnitudes_.begin());
}

double AoaProfile::total() const { return std::accumulate(magnitudes_.begin(), magnitudes_.end(), 0.0); }

AoaProfile compute_profile(const PairedChannel& channel, const SteeringTable& table, const ProfileOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  check_channel(channel);
  if (channel.size() != table.sample_count()) {
    raise(ErrorKind::invalid_argument, "channel has " + std::to_string(channel.size()) +
                                           " samples, steering table has " + std::to_string(table.sample_count()));
  }
  std::vector<double> out(table.cell_count());
  const auto h = channel.channel();
  detail::parallel_for(out.size(), opts.threads, [&](std::size_t begin, std::size_t end) {
    Workspace ws(h.size());
    for (std::size_t c = begin; c < end; ++c) out[c] = bartlett_cell(table.row(c), h, ws);
  });
  return AoaProfile(table.grid(), std::move(out), channel.size(), seconds_since(start));
}

AoaProfile compute_profile_fused(const PairedChannel& channel, std::shared_ptr<const DirectionGrid> grid,
                                 const ProfileOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  if (!grid) raise(ErrorKind::invalid_argument, "null grid");
  check_channel(channel);
  const double k = steering_wavenumber(grid->config());
  const auto units = grid->unit_vectors();
  const auto h = channel.channel();
  const auto positions = channel.positions();
  std::vector<double> out(grid->size());
  detail::parallel_for(out.size(), opts.threads, [&](std::size_t begin, std::size_t end) {
    Workspace ws(h.size());
    for (std::size_t c = begin; c < end; ++c) {
      for (std::size_t m = 0; m < positions.size(); ++m) ws.phase[m] = steering_phase(units[c], positions[m], k);
      out[c] = bartlett_cell(ws.phase, h, ws);
    }
  });
  return AoaProfile(std::move(grid), std::move(out), channel.size(), seconds_since(start));
}

double profile_variance(const AoaProfile& profile, VarianceForm form) {
  const double total = profile.total();
  if (!(total > 0.0)) raise(ErrorKind::degenerate_profile, "all profile cells are zero");
  const auto& g = profile.grid();
  const auto dirs = g.directions();
  const Direction peak = dirs[profile.argmax()];

  double weighted = 0.0;
  double psi_sum = 0.0;
  for (std::size_t c = 0; c < profile.size(); ++c) {
    const double dphi = azimuth_difference(dirs[c].azimuth_rad, peak.azimuth_rad);
    const double dtheta = dirs[c].elevation_rad - peak.elevation_rad;
    const double psi = dphi * dphi + dtheta * dtheta;
    weighted += psi * profile[c];
    psi_sum += psi;
  }
  if (!(psi_sum > 0.0)) raise(ErrorKind::degenerate_profile, "grid has a single direction");
  const double mean = total / static_cast<double>(profile.size());
  const double sigma = weighted / (mean * psi_sum);
  return form == VarianceForm::normalized ? sigma : sigma / total;
}

std::vector<Peak> find_peaks(const AoaProfile& profile, const PeakOptions& opts) {
  if (opts.n < 1) raise(ErrorKind::invalid_argument, "peak count n must be >= 1");
  if (opts.k_percent < 0.0 || opts.k_percent > 100.0) {
    raise(ErrorKind::invalid_argument, "k_percent must lie in [0, 100]");
  }
  std::vector<Peak> peaks;
  const double max_value = profile[profile.argmax()];
  if (!(max_value > 0.0)) return peaks;
  const double floor_value = opts.k_percent / 100.0 * max_value;
  const double alpha = deg_to_rad(opts.alpha_deg);

  std::vector<std::size_t> candidates;
  for (std::size_t c = 0; c < profile.size(); ++c) {
    if (profile[c] > 0.0 && profile[c] >= floor_value && is_local_max(profile, c)) candidates.push_back(c);
  }
  std::sort(candidates.begin(), candidates.end(), [&](std::size_t a, std::size_t b) {
    return profile[a] > profile[b] || (profile[a] == profile[b] && a < b);
  });

  const auto dirs = profile.grid().directions();
  for (std::size_t c : candidates) {
    if (static_cast<int>(peaks.size()) >= opts.n) break;
    const bool crowded = std::any_of(peaks.begin(), peaks.end(), [&](const Peak& p) {
      const double dphi = std::abs(azimuth_difference(dirs[c].azimuth_rad, p.direction.azimuth_rad));
      const double dtheta = std::abs(dirs[c].elevation_rad - p.direction.elevation_rad);
      return dphi < alpha && dtheta < alpha;
    });
    if (crowded) continue;
    peaks.push_back(make_peak(profile, c, static_cast<int>(peaks.size()) + 1));
  }
  return peaks;
}

BearingEstimate analyze_profile(const AoaProfile& profile, const EstimateOptions& opts) {
  BearingEstimate est;
  est.variance = profile_variance(profile, opts.variance_form);
  est.aoa_max = make_peak(profile, profile.argmax(), 1);
  est.top_n = find_peaks(profile, opts.peaks);
  est.accepted = est.variance <= opts.tau;
  est.n_packets_used = profile.n_packets_used();
  est.compute_time_s = profile.compute_time_s();
  return est;
}

BearingEstimate estimate_bearing(const PairedChannel& channel, const SteeringTable& table,
                                 const EstimateOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  const auto profile = compute_profile(channel, table, ProfileOptions{opts.threads});
  auto est = analyze_profile(profile, opts);
  est.compute_time_s = seconds_since(start);
  return est;
}

}  // namespace aoa
