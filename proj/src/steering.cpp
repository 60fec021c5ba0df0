#include "aoa/steering.hpp"

#include "aoa/error.hpp"
#include "parallel.hpp"

#include <sys/mman.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <new>
#include <string>

namespace aoa {

namespace detail {

namespace {
constexpr std::size_t kHugePage = std::size_t{2} << 20;
}

void* allocate_large(std::size_t bytes) {
  if (bytes == 0) bytes = 1;
  void* p = nullptr;
  if (bytes >= kHugePage) {
    const std::size_t rounded = (bytes + kHugePage - 1) / kHugePage * kHugePage;
    p = std::aligned_alloc(kHugePage, rounded);
    if (p != nullptr) ::madvise(p, rounded, MADV_HUGEPAGE);
  } else {
    p = std::malloc(bytes);
  }
  if (p == nullptr) throw std::bad_alloc();
  return p;
}

void free_large(void* p) noexcept { std::free(p); }

}  // namespace detail

DirectionGrid::DirectionGrid(const GridConfig& config) : config_(config) {
  config_.validate();
  directions_.reserve(config_.cell_count());
  unit_vectors_.reserve(config_.cell_count());
  for (int e = 0; e < config_.elevation_bins; ++e) {
    for (int a = 0; a < config_.azimuth_bins; ++a) {
      const Direction d{azimuth_center(a), elevation_center(e)};
      directions_.push_back(d);
      unit_vectors_.push_back(direction_unit_vector(d));
    }
  }
}

double DirectionGrid::azimuth_center(int a) const { return -kPi + (a + 0.5) * azimuth_step(); }

double DirectionGrid::elevation_center(int e) const { return (e + 0.5) * elevation_step(); }

std::size_t DirectionGrid::nearest_cell(const Direction& d) const {
  const double az = wrap_azimuth(d.azimuth_rad);
  int a = static_cast<int>(std::floor((az + kPi) / azimuth_step()));
  int e = static_cast<int>(std::floor(d.elevation_rad / elevation_step()));
  a = std::clamp(a, 0, config_.azimuth_bins - 1);
  e = std::clamp(e, 0, config_.elevation_bins - 1);
  return index(e, a);
}

std::shared_ptr<const DirectionGrid> build_grid(const GridConfig& config) {
  return std::make_shared<const DirectionGrid>(config);
}

SteeringTable::SteeringTable(std::shared_ptr<const DirectionGrid> grid, std::size_t samples,
                             PhaseBuffer phases)
    : grid_(std::move(grid)), samples_(samples), phases_(std::move(phases)) {
  if (!grid_) raise(ErrorKind::invalid_argument, "steering table needs a grid");
  if (phases_.size() != grid_->size() * samples_) {
    raise(ErrorKind::invalid_argument, "steering table size does not match grid x samples");
  }
}

std::size_t steering_table_bytes(std::size_t cells, std::size_t samples) {
  return cells * samples * sizeof(double);
}

SteeringTable precompute_steering(std::shared_ptr<const DirectionGrid> grid,
                                  std::span<const Vec3> positions, const SteeringOptions& opts) {
  if (!grid) raise(ErrorKind::invalid_argument, "null grid");
  for (std::size_t m = 0; m < positions.size(); ++m) {
    if (!positions[m].allFinite()) {
      raise(ErrorKind::invalid_argument, "displacement " + std::to_string(m) + " is not finite");
    }
  }
  const std::size_t cells = grid->size();
  const std::size_t samples = positions.size();
  const std::size_t bytes = steering_table_bytes(cells, samples);
  if (bytes > opts.memory_budget_bytes) {
    raise(ErrorKind::resource_limit,
          "steering table needs " + std::to_string(bytes >> 20) + " MiB (budget " +
              std::to_string(opts.memory_budget_bytes >> 20) +
              " MiB); lower the grid resolution or sub-sample the packets");
  }

  const double k = steering_wavenumber(grid->config());
  PhaseBuffer phases(cells * samples);
  const auto units = grid->unit_vectors();
  detail::parallel_for(cells, opts.threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t c = begin; c < end; ++c) {
      double* row = phases.data() + c * samples;
      for (std::size_t m = 0; m < samples; ++m) row[m] = steering_phase(units[c], positions[m], k);
    }
  });
  return SteeringTable(std::move(grid), samples, std::move(phases));
}

}  // namespace aoa
