#pragma once

// Bartlett AOA profile over the virtual array, the profile variance metric,
// and the strongest-path / Top-N peak extraction.

#include "aoa/pairing.hpp"
#include "aoa/steering.hpp"

#include <memory>
#include <span>
#include <vector>

namespace aoa {

/// |sum_m h_m exp(-j phase(c, m))|^2 for every grid cell c, stored
/// [elevation x azimuth] row-major like the grid.
class AoaProfile {
 public:
  AoaProfile(std::shared_ptr<const DirectionGrid> grid, std::vector<double> magnitudes,
             std::size_t n_packets_used = 0, double compute_time_s = 0.0);

  const DirectionGrid& grid() const { return *grid_; }
  const std::shared_ptr<const DirectionGrid>& grid_ptr() const { return grid_; }
  std::span<const double> magnitudes() const { return magnitudes_; }
  double at(int e, int a) const { return magnitudes_[grid_->index(e, a)]; }
  double operator[](std::size_t cell) const { return magnitudes_[cell]; }
  std::size_t size() const { return magnitudes_.size(); }

  std::size_t n_packets_used() const { return n_packets_used_; }
  double compute_time_s() const { return compute_time_s_; }

  /// Flat index of the maximum; ties go to the lowest index.
  std::size_t argmax() const;
  double total() const;

 private:
  std::shared_ptr<const DirectionGrid> grid_;
  std::vector<double> magnitudes_;
  std::size_t n_packets_used_;
  double compute_time_s_;
};

struct ProfileOptions {
  unsigned threads = 1;
};

/// Throws invalid-argument unless channel.size() == table.sample_count() >= 2.
/// Output bits do not depend on opts.threads.
AoaProfile compute_profile(const PairedChannel& channel, const SteeringTable& table,
                           const ProfileOptions& opts = {});

/// Same result as precompute_steering + compute_profile, evaluating the
/// steering phase inline instead of from a stored table.
AoaProfile compute_profile_fused(const PairedChannel& channel, std::shared_ptr<const DirectionGrid> grid,
                                 const ProfileOptions& opts = {});

enum class VarianceForm {
  /// Psi-weighted spread divided by the uniform-profile baseline; a uniform
  /// profile scores exactly 1.
  normalized,
  /// The printed ratio with an extra 1/F factor (equals normalized / total).
  literal,
};

/// Spread of the profile mass around the global maximum, where
///   Psi_c = wrap(phi_c - phi_max)^2 + (theta_c - theta_max)^2
///   sigma = sum(Psi_c f_c) / ((F / A) sum(Psi_c)),  F = sum f_c, A = cells.
/// Throws degenerate-profile for an all-zero profile.
double profile_variance(const AoaProfile& profile, VarianceForm form = VarianceForm::normalized);

struct Peak {
  Direction direction;
  double magnitude = 0.0;
  int rank = 0;
  std::size_t cell = 0;
};

struct PeakOptions {
  int n = 4;
  double k_percent = 40.0;
  double alpha_deg = 10.0;
};

/// Greedy Top-N among local maxima (8-neighbourhood, azimuth wraps,
/// elevation clamps; equal neighbours resolve to the lower flat index).
/// Candidates below k_percent of the global maximum, or inside the
/// rectangular window |dphi| < alpha and |dtheta| < alpha of an accepted
/// peak, are skipped; zero cells never qualify. Returns at most n peaks,
/// rank 1 first.
std::vector<Peak> find_peaks(const AoaProfile& profile, const PeakOptions& opts = {});

struct EstimateOptions {
  PeakOptions peaks;
  double tau = 0.9;
  VarianceForm variance_form = VarianceForm::normalized;
  unsigned threads = 1;
};

struct BearingEstimate {
  Peak aoa_max;
  std::vector<Peak> top_n;
  double variance = 0.0;
  bool accepted = false;
  std::size_t n_packets_used = 0;
  double compute_time_s = 0.0;
};

/// AOA_max, Top-N and variance of an existing profile.
BearingEstimate analyze_profile(const AoaProfile& profile, const EstimateOptions& opts = {});

BearingEstimate estimate_bearing(const PairedChannel& channel, const SteeringTable& table,
                                 const EstimateOptions& opts = {});

}  // namespace aoa
