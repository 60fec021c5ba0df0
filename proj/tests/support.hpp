#pragma once

// Independent reference implementations and seeded generators shared by the
// unit tests and the acceptance runner. Nothing here calls into the library
// code it is used to check.

#include "aoa/error.hpp"
#include "aoa/types.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace aoa::testing {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

inline int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

/// Kind of the aoa::Error thrown by f, or nullopt if it returns normally.
template <class F>
std::optional<ErrorKind> error_kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return std::nullopt;
}

template <class F>
std::string error_message_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

inline double median(std::vector<double> v) {
  if (v.empty()) return std::nan("");
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

/// Grid directions computed from first principles: bin centers, elevation-major.
struct RefCell {
  double azimuth;
  double elevation;
};

inline std::vector<RefCell> reference_grid(int na, int ne) {
  std::vector<RefCell> cells;
  const double pi = std::acos(-1.0);
  for (int e = 0; e < ne; ++e) {
    for (int a = 0; a < na; ++a) {
      cells.push_back({-pi + (2.0 * a + 1.0) * pi / na, (2.0 * e + 1.0) * pi / (2.0 * ne)});
    }
  }
  return cells;
}

/// |sum_m h_m exp(-j kappa 2pi/lambda u.d_m)|^2 written as two plain loops
/// with std::polar.
inline std::vector<double> naive_profile(const std::vector<RefCell>& cells, const std::vector<std::complex<double>>& h,
                                         const std::vector<Vec3>& d, double wavelength, double kappa) {
  const double pi = std::acos(-1.0);
  std::vector<double> out;
  for (const auto& c : cells) {
    const double ux = std::cos(c.azimuth) * std::sin(c.elevation);
    const double uy = std::sin(c.azimuth) * std::sin(c.elevation);
    const double uz = std::cos(c.elevation);
    std::complex<double> acc = 0.0;
    for (std::size_t m = 0; m < h.size(); ++m) {
      const double phase = kappa * 2.0 * pi / wavelength * (ux * d[m].x() + uy * d[m].y() + uz * d[m].z());
      acc += h[m] * std::polar(1.0, -phase);
    }
    out.push_back(std::norm(acc));
  }
  return out;
}

/// Variance by direct summation, literally sum(Psi f) / ((F/A) sum Psi),
/// with the peak at the first maximal cell and the azimuth difference folded
/// by adding/subtracting 2pi.
inline double naive_variance(const std::vector<RefCell>& cells, const std::vector<double>& f) {
  const double pi = std::acos(-1.0);
  std::size_t peak = 0;
  for (std::size_t c = 1; c < f.size(); ++c) {
    if (f[c] > f[peak]) peak = c;
  }
  double num = 0.0;
  double psi_sum = 0.0;
  double total = 0.0;
  for (std::size_t c = 0; c < f.size(); ++c) {
    double dphi = cells[c].azimuth - cells[peak].azimuth;
    while (dphi > pi) dphi -= 2.0 * pi;
    while (dphi < -pi) dphi += 2.0 * pi;
    const double dtheta = cells[c].elevation - cells[peak].elevation;
    const double psi = dphi * dphi + dtheta * dtheta;
    num += psi * f[c];
    psi_sum += psi;
    total += f[c];
  }
  return num / (total / static_cast<double>(f.size()) * psi_sum);
}

/// Size of a maximum in-order matching between two sorted counter lists
/// with |a - b| <= skew, by dynamic programming.
inline std::size_t max_in_order_matching(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b,
                                         std::uint64_t skew) {
  std::vector<std::vector<std::size_t>> dp(a.size() + 1, std::vector<std::size_t>(b.size() + 1, 0));
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      dp[i][j] = std::max(dp[i - 1][j], dp[i][j - 1]);
      const std::uint64_t x = a[i - 1];
      const std::uint64_t y = b[j - 1];
      const std::uint64_t gap = x > y ? x - y : y - x;
      if (gap <= skew) dp[i][j] = std::max(dp[i][j], dp[i - 1][j - 1] + 1);
    }
  }
  return dp[a.size()][b.size()];
}

/// Ray-intersection position from exact bearings through Cramer's rule on
/// two lines; used to cross-check the least-squares solver.
inline Vec2 two_line_intersection(const Vec2& a1, double b1, const Vec2& a2, double b2) {
  const double c1 = std::cos(b1), s1 = std::sin(b1);
  const double c2 = std::cos(b2), s2 = std::sin(b2);
  const double det = c1 * (-s2) - (-c2) * s1;
  const Vec2 r = a2 - a1;
  const double t = (r.x() * (-s2) - (-c2) * r.y()) / det;
  return a1 + t * Vec2(c1, s1);
}

}  // namespace aoa::testing
