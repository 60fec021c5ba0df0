#pragma once

// Direction grid and the steering phase table of the virtual array formed by
// the receiver trajectory.

#include "aoa/types.hpp"

#include <cstddef>
#include <memory>
#include <span>
#include <type_traits>
#include <utility>
#include <vector>

namespace aoa {

/// Candidate directions at bin centers. Cells are stored elevation-major:
/// index = e * azimuth_bins + a, with
///   azimuth(a)   = -pi + (a + 0.5) * 2pi / azimuth_bins
///   elevation(e) =       (e + 0.5) *  pi / elevation_bins
class DirectionGrid {
 public:
  explicit DirectionGrid(const GridConfig& config);

  const GridConfig& config() const { return config_; }
  std::size_t size() const { return directions_.size(); }
  int azimuth_bins() const { return config_.azimuth_bins; }
  int elevation_bins() const { return config_.elevation_bins; }

  std::span<const Direction> directions() const { return directions_; }
  std::span<const Vec3> unit_vectors() const { return unit_vectors_; }

  double azimuth_step() const { return kTwoPi / config_.azimuth_bins; }
  double elevation_step() const { return kPi / config_.elevation_bins; }
  double azimuth_center(int a) const;
  double elevation_center(int e) const;

  std::size_t index(int e, int a) const {
    return static_cast<std::size_t>(e) * static_cast<std::size_t>(config_.azimuth_bins) +
           static_cast<std::size_t>(a);
  }
  int azimuth_index(std::size_t cell) const { return static_cast<int>(cell % config_.azimuth_bins); }
  int elevation_index(std::size_t cell) const { return static_cast<int>(cell / config_.azimuth_bins); }

  /// Cell whose center is nearest to d.
  std::size_t nearest_cell(const Direction& d) const;

 private:
  GridConfig config_;
  std::vector<Direction> directions_;
  std::vector<Vec3> unit_vectors_;
};

std::shared_ptr<const DirectionGrid> build_grid(const GridConfig& config);

/// kappa * 2pi / lambda.
inline double steering_wavenumber(const GridConfig& config) {
  return phase_multiplier(config.phase_factor) * kTwoPi / config.wavelength_m;
}

/// Steering phase of one cell for one displacement. Shared by the table
/// builder and the fused profile path so both produce identical bits.
inline double steering_phase(const Vec3& u, const Vec3& d, double wavenumber) {
  return wavenumber * (u.x() * d.x() + u.y() * d.y() + u.z() * d.z());
}

struct SteeringOptions {
  std::size_t memory_budget_bytes = std::size_t{1} << 30;
  unsigned threads = 1;
};

/// Phase table [cell x sample], row-major by cell.
namespace detail {
void* allocate_large(std::size_t bytes);
void free_large(void* p) noexcept;
}  // namespace detail

/// Allocator for the steering table: large blocks are backed by transparent
/// huge pages where available, and elements are default-initialized rather
/// than zeroed since every entry is written during precomputation.
template <class T>
struct LargeBufferAllocator {
  using value_type = T;

  LargeBufferAllocator() = default;
  template <class U>
  LargeBufferAllocator(const LargeBufferAllocator<U>&) noexcept {}

  T* allocate(std::size_t n) { return static_cast<T*>(detail::allocate_large(n * sizeof(T))); }
  void deallocate(T* p, std::size_t) noexcept { detail::free_large(p); }

  template <class U>
  void construct(U* p) noexcept(std::is_nothrow_default_constructible_v<U>) {
    ::new (static_cast<void*>(p)) U;
  }
  template <class U, class... Args>
  void construct(U* p, Args&&... args) {
    ::new (static_cast<void*>(p)) U(std::forward<Args>(args)...);
  }

  friend bool operator==(const LargeBufferAllocator&, const LargeBufferAllocator&) { return true; }
};

using PhaseBuffer = std::vector<double, LargeBufferAllocator<double>>;

class SteeringTable {
 public:
  SteeringTable(std::shared_ptr<const DirectionGrid> grid, std::size_t samples, PhaseBuffer phases);

  const std::shared_ptr<const DirectionGrid>& grid() const { return grid_; }
  std::size_t cell_count() const { return grid_->size(); }
  std::size_t sample_count() const { return samples_; }

  double phase(std::size_t cell, std::size_t sample) const { return phases_[cell * samples_ + sample]; }
  std::span<const double> row(std::size_t cell) const {
    return std::span<const double>(phases_).subspan(cell * samples_, samples_);
  }

 private:
  std::shared_ptr<const DirectionGrid> grid_;
  std::size_t samples_;
  PhaseBuffer phases_;
};

std::size_t steering_table_bytes(std::size_t cells, std::size_t samples);

/// Wavelength and phase factor come from the grid configuration. Throws
/// resource-limit when the table would exceed opts.memory_budget_bytes.
SteeringTable precompute_steering(std::shared_ptr<const DirectionGrid> grid,
                                  std::span<const Vec3> positions, const SteeringOptions& opts = {});

}  // namespace aoa
