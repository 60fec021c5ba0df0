#include "aoa/channel_sim.hpp"
#include "aoa/profile.hpp"

#include "doctest.h"
#include "support.hpp"

#include <cmath>
#include <cstring>

using namespace aoa;
using aoa::testing::error_kind_of;

namespace {

std::shared_ptr<const DirectionGrid> grid_of(int na, int ne, PhaseFactor f = PhaseFactor::single_trip) {
  GridConfig c;
  c.azimuth_bins = na;
  c.elevation_bins = ne;
  c.phase_factor = f;
  return build_grid(c);
}

PairedChannel channel_of(const std::vector<Complex>& h, const std::vector<Vec3>& d) {
  PairedChannel pc;
  for (std::size_t m = 0; m < h.size(); ++m) pc.entries.push_back({0.01 * static_cast<double>(m), d[m], h[m]});
  return pc;
}

PairedChannel random_channel(aoa::testing::Rng& rng, std::size_t n) {
  std::vector<Complex> h;
  std::vector<Vec3> d;
  for (std::size_t m = 0; m < n; ++m) {
    h.push_back(std::polar(aoa::testing::uniform(rng, 0.1, 2.0), aoa::testing::uniform(rng, -kPi, kPi)));
    d.emplace_back(aoa::testing::uniform(rng, -0.5, 0.5), aoa::testing::uniform(rng, -0.5, 0.5),
                   aoa::testing::uniform(rng, -0.2, 0.2));
  }
  return channel_of(h, d);
}

AoaProfile profile_from(std::shared_ptr<const DirectionGrid> g, std::vector<double> f) {
  return AoaProfile(std::move(g), std::move(f));
}

// Single-trip clean channel of one far source, sampled along the trajectory.
PairedChannel single_path_channel(const Direction& truth, const Trajectory& traj, double range = 100.0) {
  Scene scene;
  scene.tx_position = range * direction_unit_vector(truth);
  return build_paired_channel(simulate_channel(scene, traj), traj, {0, PhaseFactor::single_trip});
}

bool bytes_equal(const AoaProfile& a, const AoaProfile& b) {
  return a.size() == b.size() &&
         std::memcmp(a.magnitudes().data(), b.magnitudes().data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST_CASE("compute_profile equals the naive double loop") {
  aoa::testing::Rng rng(41);
  for (int seed = 0; seed < 20; ++seed) {
    const int na = aoa::testing::uniform_int(rng, 4, 8);
    const int ne = aoa::testing::uniform_int(rng, 2, 4);
    const std::size_t n = static_cast<std::size_t>(aoa::testing::uniform_int(rng, 2, 16));
    const auto f = seed % 2 == 0 ? PhaseFactor::single_trip : PhaseFactor::round_trip;
    const auto g = grid_of(na, ne, f);
    const PairedChannel pc = random_channel(rng, n);
    const auto table = precompute_steering(g, pc.positions());
    const AoaProfile p = compute_profile(pc, table);
    const auto ref = aoa::testing::naive_profile(aoa::testing::reference_grid(na, ne), pc.channel(), pc.positions(),
                                                 kDefaultWavelength, phase_multiplier(f));
    for (std::size_t c = 0; c < ref.size(); ++c) {
      REQUIRE(std::abs(p[c] - ref[c]) <= 1e-9 * std::max(ref[c], 1e-300));
    }
  }
}

TEST_CASE("constant channel without motion gives a uniform M^2 profile") {
  const std::size_t m = 25;
  const auto g = grid_of(12, 6);
  const PairedChannel pc = channel_of(std::vector<Complex>(m, 1.0), std::vector<Vec3>(m, Vec3::Zero()));
  const AoaProfile p = compute_profile(pc, precompute_steering(g, pc.positions()));
  for (std::size_t c = 0; c < p.size(); ++c) REQUIRE(p[c] == static_cast<double>(m * m));
}

TEST_CASE("power scaling scales cells by c^2 and keeps the argmax") {
  aoa::testing::Rng rng(42);
  const auto g = grid_of(36, 18);
  for (int trial = 0; trial < 10; ++trial) {
    PairedChannel pc = random_channel(rng, 30);
    const auto table = precompute_steering(g, pc.positions());
    const AoaProfile a = compute_profile(pc, table);
    const double c = aoa::testing::uniform(rng, 0.01, 100.0);
    for (auto& e : pc.entries) e.h *= c;
    const AoaProfile b = compute_profile(pc, table);
    REQUIRE(b.argmax() == a.argmax());
    for (std::size_t k = 0; k < a.size(); ++k) REQUIRE(b[k] == doctest::Approx(c * c * a[k]).epsilon(1e-10));
  }
}

TEST_CASE("profile bytes do not depend on the thread count or the fused path") {
  aoa::testing::Rng rng(43);
  const auto g = grid_of(90, 45, PhaseFactor::round_trip);
  const PairedChannel pc = random_channel(rng, 120);
  const auto table = precompute_steering(g, pc.positions());
  const AoaProfile one = compute_profile(pc, table, {1});
  for (unsigned t : {2u, 3u, 4u, 7u, 16u}) {
    REQUIRE(bytes_equal(one, compute_profile(pc, table, {t})));
    REQUIRE(bytes_equal(one, compute_profile_fused(pc, g, {t})));
  }
}

TEST_CASE("compute_profile input checks") {
  aoa::testing::Rng rng(44);
  const auto g = grid_of(8, 4);
  const PairedChannel pc = random_channel(rng, 10);
  const auto table = precompute_steering(g, pc.positions());
  PairedChannel shorter = pc;
  shorter.entries.pop_back();
  CHECK(error_kind_of([&] { compute_profile(shorter, table); }) == ErrorKind::invalid_argument);
  PairedChannel single = pc;
  single.entries.resize(1);
  CHECK(error_kind_of([&] { compute_profile(single, precompute_steering(g, single.positions())); }) ==
        ErrorKind::invalid_argument);
}

TEST_CASE("single simulated path peaks within one azimuth bin of the truth") {
  const Trajectory traj = arc_trajectory(ArcMotion{});
  const auto g = grid_of(360, 180);
  const Direction truth{deg_to_rad(-47.3), kPi / 2.0};
  const PairedChannel pc = single_path_channel(truth, traj);
  REQUIRE(pc.size() == 880);
  const BearingEstimate est = estimate_bearing(pc, precompute_steering(g, pc.positions()));
  CHECK(est.accepted);
  CHECK(rad_to_deg(std::abs(azimuth_difference(est.aoa_max.direction.azimuth_rad, truth.azimuth_rad))) <= 1.0);
  CHECK(est.n_packets_used == 880);
  CHECK(est.compute_time_s > 0.0);
}

TEST_CASE("sub-sampling moves AOA_max by at most two bins") {
  const Trajectory traj = arc_trajectory(ArcMotion{});
  const auto g = grid_of(360, 180);
  aoa::testing::Rng rng(45);
  for (int trial = 0; trial < 3; ++trial) {
    const Direction truth{aoa::testing::uniform(rng, -kPi, kPi), kPi / 2.0};
    const PairedChannel full = single_path_channel(truth, traj);
    const PairedChannel half = full.subsampled(2);
    const auto a = compute_profile_fused(full, g).argmax();
    const auto b = compute_profile_fused(half, g).argmax();
    const int da = std::abs(g->azimuth_index(a) - g->azimuth_index(b));
    CHECK(std::min(da, 360 - da) <= 2);
  }
}

TEST_CASE("variance anchors") {
  const auto g = grid_of(36, 18);
  SUBCASE("uniform profile scores one") {
    const AoaProfile p = profile_from(g, std::vector<double>(g->size(), 3.5));
    CHECK(std::abs(profile_variance(p) - 1.0) <= 1e-9);
    CHECK(profile_variance(p, VarianceForm::literal) == doctest::Approx(1.0 / p.total()).epsilon(1e-9));
  }
  SUBCASE("delta profile scores zero") {
    std::vector<double> f(g->size(), 0.0);
    f[g->index(7, 20)] = 2.0;
    CHECK(profile_variance(profile_from(g, f)) == 0.0);
  }
  SUBCASE("two antipodal deltas exceed one and match direct summation") {
    std::vector<double> f(g->size(), 0.0);
    f[g->index(9, 3)] = 1.0;
    f[g->index(9, 21)] = 1.0;
    const double sigma = profile_variance(profile_from(g, f));
    CHECK(sigma > 1.0);
    CHECK(sigma == doctest::Approx(aoa::testing::naive_variance(aoa::testing::reference_grid(36, 18), f)).epsilon(1e-12));
  }
  SUBCASE("all-zero profile is degenerate") {
    CHECK(error_kind_of([&] { profile_variance(profile_from(g, std::vector<double>(g->size(), 0.0))); }) ==
          ErrorKind::degenerate_profile);
  }
}

TEST_CASE("variance of random profiles: bounds, direct summation, zero iff one nonzero cell") {
  aoa::testing::Rng rng(46);
  for (int trial = 0; trial < 200; ++trial) {
    const int na = aoa::testing::uniform_int(rng, 4, 24);
    const int ne = aoa::testing::uniform_int(rng, 2, 12);
    const auto g = grid_of(na, ne);
    std::vector<double> f(g->size(), 0.0);
    const int nonzero = aoa::testing::uniform_int(rng, 1, 4);
    for (int k = 0; k < nonzero; ++k) {
      f[static_cast<std::size_t>(aoa::testing::uniform_int(rng, 0, static_cast<int>(g->size()) - 1))] =
          aoa::testing::uniform(rng, 0.5, 2.0);
    }
    if (trial % 3 == 0) {
      for (auto& v : f) v += aoa::testing::uniform(rng, 0.0, 0.1);
    }
    const std::size_t count = static_cast<std::size_t>(std::count_if(f.begin(), f.end(), [](double v) { return v > 0.0; }));
    const double sigma = profile_variance(profile_from(g, f));
    REQUIRE(sigma >= 0.0);
    REQUIRE((sigma == 0.0) == (count == 1));
    REQUIRE(sigma == doctest::Approx(aoa::testing::naive_variance(aoa::testing::reference_grid(na, ne), f)).epsilon(1e-9));
  }
}

TEST_CASE("find_peaks on a delta profile") {
  const auto g = grid_of(36, 18);
  std::vector<double> f(g->size(), 0.0);
  f[g->index(4, 4)] = 1.0;
  const auto peaks = find_peaks(profile_from(g, f), {3, 40.0, 10.0});
  REQUIRE(peaks.size() == 1);
  CHECK(peaks[0].cell == g->index(4, 4));
  CHECK(peaks[0].rank == 1);
}

TEST_CASE("find_peaks on a uniform profile returns the lowest-index cell only") {
  const auto g = grid_of(36, 18);
  const auto peaks = find_peaks(profile_from(g, std::vector<double>(g->size(), 1.0)), {4, 40.0, 10.0});
  REQUIRE(peaks.size() == 1);
  CHECK(peaks[0].cell == 0);
}

TEST_CASE("find_peaks wraps azimuth and clamps elevation") {
  const auto g = grid_of(36, 18);
  std::vector<double> f(g->size(), 0.0);
  f[g->index(0, 0)] = 5.0;
  f[g->index(0, 35)] = 4.0;   // neighbour across the seam, not a local maximum
  f[g->index(17, 18)] = 3.0;  // last elevation row
  const auto peaks = find_peaks(profile_from(g, f), {4, 0.0, 10.0});
  REQUIRE(peaks.size() == 2);
  CHECK(peaks[0].cell == g->index(0, 0));
  CHECK(peaks[1].cell == g->index(17, 18));
}

TEST_CASE("find_peaks applies the K floor and the rectangular alpha window") {
  const auto g = grid_of(360, 180);
  std::vector<double> f(g->size(), 0.0);
  const auto put = [&](double az, double el, double v) {
    f[g->nearest_cell(Direction{deg_to_rad(az), deg_to_rad(el)})] = v;
  };
  put(10.2, 90.2, 10.0);
  put(15.2, 95.2, 9.0);   // inside the window in both axes
  put(15.2, 110.2, 8.0);  // same azimuth window, elevation outside
  put(60.2, 90.2, 3.0);   // below a 40% floor
  put(-100.2, 90.2, 5.0);
  const AoaProfile p = profile_from(g, f);
  auto peaks = find_peaks(p, {4, 40.0, 10.0});
  REQUIRE(peaks.size() == 3);
  CHECK(peaks[0].magnitude == 10.0);
  CHECK(peaks[1].magnitude == 8.0);
  CHECK(peaks[2].magnitude == 5.0);
  peaks = find_peaks(p, {2, 40.0, 10.0});
  CHECK(peaks.size() == 2);
  peaks = find_peaks(p, {10, 0.0, 10.0});
  CHECK(peaks.size() == 4);
  CHECK(error_kind_of([&] { find_peaks(p, {0, 40.0, 10.0}); }) == ErrorKind::invalid_argument);
}

TEST_CASE("find_peaks invariants on random profiles") {
  aoa::testing::Rng rng(47);
  for (int trial = 0; trial < 100; ++trial) {
    const auto g = grid_of(72, 36);
    std::vector<double> f(g->size());
    for (auto& v : f) v = aoa::testing::uniform(rng, 0.0, 1.0);
    const AoaProfile p = profile_from(g, f);
    const PeakOptions opts{aoa::testing::uniform_int(rng, 1, 8), aoa::testing::uniform(rng, 0.0, 90.0),
                           aoa::testing::uniform(rng, 1.0, 30.0)};
    const auto peaks = find_peaks(p, opts);
    REQUIRE(!peaks.empty());
    REQUIRE(static_cast<int>(peaks.size()) <= opts.n);
    REQUIRE(peaks[0].cell == p.argmax());
    const double alpha = deg_to_rad(opts.alpha_deg);
    for (std::size_t i = 0; i < peaks.size(); ++i) {
      REQUIRE(peaks[i].rank == static_cast<int>(i) + 1);
      REQUIRE(peaks[i].magnitude >= opts.k_percent / 100.0 * peaks[0].magnitude);
      if (i > 0) REQUIRE(peaks[i].magnitude <= peaks[i - 1].magnitude);
      for (std::size_t j = 0; j < i; ++j) {
        const double dphi = std::abs(azimuth_difference(peaks[i].direction.azimuth_rad, peaks[j].direction.azimuth_rad));
        const double dtheta = std::abs(peaks[i].direction.elevation_rad - peaks[j].direction.elevation_rad);
        REQUIRE_FALSE((dphi < alpha && dtheta < alpha));
      }
    }
  }
}

namespace {

// A 3D figure-eight style path: 880 samples spanning about a metre in each
// axis, so both azimuth and elevation of every path are resolved.
Trajectory lissajous_trajectory() {
  std::vector<TrajectorySample> v;
  const double a = 0.5;
  for (int i = 0; i <= 440; ++i) {
    const double t = 0.01 * i;
    const double w = kTwoPi * t / 4.4;
    v.push_back({t, Vec3(a * std::sin(w), a * std::sin(2.0 * w + 0.3) - a * std::sin(0.3), a * std::sin(3.0 * w))});
  }
  return Trajectory(std::move(v));
}

}  // namespace

TEST_CASE("three-path channel yields three peaks near the true paths") {
  const double range = 40.0;
  const auto at = [&](double az, double el) { return range * direction_unit_vector({deg_to_rad(az), deg_to_rad(el)}); };
  Scene scene;
  scene.tx_position = at(35, 80);
  scene.reflectors = {{at(120, 95), 0.8}, {at(-100, 70), 0.6}};
  const Trajectory traj = lissajous_trajectory();
  const PairedChannel pc = build_paired_channel(simulate_channel(scene, traj), traj, {0, PhaseFactor::single_trip});
  const auto g = grid_of(360, 180);
  const AoaProfile p = compute_profile(pc, precompute_steering(g, pc.positions()));

  // Profile values are powers: the 0.6 path sits near 0.36 of the maximum.
  const auto peaks = find_peaks(p, {4, 30.0, 10.0});
  REQUIRE(peaks.size() == 3);
  const double truth[3][2] = {{35, 80}, {120, 95}, {-100, 70}};
  for (int k = 0; k < 3; ++k) {
    const double daz = rad_to_deg(std::abs(azimuth_difference(peaks[k].direction.azimuth_rad, deg_to_rad(truth[k][0]))));
    const double del = rad_to_deg(std::abs(peaks[k].direction.elevation_rad - deg_to_rad(truth[k][1])));
    CHECK(daz <= 2.0);
    CHECK(del <= 2.0);
  }
  CHECK(peaks[1].magnitude / peaks[0].magnitude == doctest::Approx(0.64).epsilon(0.1));
  CHECK(peaks[2].magnitude / peaks[0].magnitude == doctest::Approx(0.36).epsilon(0.1));
  CHECK(find_peaks(p, {4, 40.0, 10.0}).size() == 2);
}

namespace {

struct NoiseOnly {
  double median_sigma;
  int rejected;
};

NoiseOnly noise_only_trials(const Trajectory& traj) {
  const auto g = grid_of(90, 45, PhaseFactor::round_trip);
  aoa::testing::Rng rng(48);
  std::normal_distribution<double> gauss(0.0, 1.0);
  PairedChannel pc;
  for (const auto& s : traj.samples()) pc.entries.push_back({s.t, s.position, {}});
  const auto table = precompute_steering(g, pc.positions());
  int rejected = 0;
  std::vector<double> sigmas;
  for (int trial = 0; trial < 100; ++trial) {
    for (auto& e : pc.entries) e.h = Complex(gauss(rng), gauss(rng));
    const BearingEstimate est = estimate_bearing(pc, table);
    sigmas.push_back(est.variance);
    if (!est.accepted) ++rejected;
  }
  return {aoa::testing::median(sigmas), rejected};
}

}  // namespace

TEST_CASE("noise-only channels are rejected") {
  const NoiseOnly volume = noise_only_trials(lissajous_trajectory());
  CHECK(volume.median_sigma == doctest::Approx(1.0).epsilon(0.1));
  CHECK(volume.rejected >= 95);

  // A flat arc resolves elevation poorly, so its noise lobes are wide and
  // sigma scatters further below 1.
  const NoiseOnly arc = noise_only_trials(arc_trajectory(ArcMotion{}));
  MESSAGE("planar arc: median sigma " << arc.median_sigma << ", rejected " << arc.rejected << "/100");
  CHECK(arc.median_sigma == doctest::Approx(1.0).epsilon(0.1));
  CHECK(arc.rejected >= 80);
}

TEST_CASE("AoaProfile checks its cells") {
  const auto g = grid_of(4, 2);
  CHECK(error_kind_of([&] { profile_from(g, std::vector<double>(7, 1.0)); }) == ErrorKind::invalid_argument);
  CHECK(error_kind_of([&] { profile_from(g, std::vector<double>(8, -1.0)); }) == ErrorKind::invalid_argument);
  CHECK(error_kind_of([&] { profile_from(g, std::vector<double>(8, std::nan(""))); }) == ErrorKind::invalid_argument);
  const AoaProfile p = profile_from(g, {1, 3, 3, 0, 0, 0, 0, 0});
  CHECK(p.argmax() == 1);
  CHECK(p.at(0, 2) == 3.0);
  CHECK(p.total() == 7.0);
}
