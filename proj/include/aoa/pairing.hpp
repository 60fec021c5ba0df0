#pragma once

// Packet pairing, CFO cancellation and alignment of channel samples with
// the receiver trajectory.

#include "aoa/types.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace aoa {

/// Both directions of one exchange between initiator i and responder j.
/// forward: j -> i, measured by i.  reverse: i -> j, measured by j.
/// Each stream is sorted by counter; gaps (losses) are allowed.
struct ExchangeLog {
  std::vector<CsiPacket> forward;
  std::vector<CsiPacket> reverse;
};

struct PacketPair {
  CsiPacket forward;
  CsiPacket reverse;
};

/// Counters for one pairing run.
///   received    forward packets (measured at the initiator)
///   sent        reverse packets (initiator broadcasts seen by the responder)
///   paired      entries that made it into the PairedChannel
///   dropped     min(sent, received) - paired; unmatched and out-of-span
///   out_of_span pairs discarded because the trajectory does not cover them
struct PairingStats {
  std::size_t sent = 0;
  std::size_t received = 0;
  std::size_t paired = 0;
  std::size_t dropped = 0;
  std::size_t out_of_span = 0;
};

struct ChannelSample {
  double t = 0.0;
  Vec3 position = Vec3::Zero();
  Complex h{0.0, 0.0};
};

/// CFO-free channel sequence sampled on the trajectory, sorted by time.
struct PairedChannel {
  std::vector<ChannelSample> entries;
  PairingStats stats;

  std::size_t size() const { return entries.size(); }
  std::vector<Vec3> positions() const;
  std::vector<Complex> channel() const;

  /// Keeps every `step`-th entry starting with the first.
  PairedChannel subsampled(std::size_t step) const;
};

/// Greedy in-order two-pointer matching by counter. Throws malformed-log on
/// duplicate or decreasing counters within a stream.
std::vector<PacketPair> pair_packets(const ExchangeLog& log, std::uint64_t max_counter_skew = 0);

/// forward * reverse per pair. A phase +e on forward and -e on reverse
/// cancels; geometric phase doubles (use PhaseFactor::round_trip downstream).
std::vector<Complex> cancel_cfo(std::span<const PacketPair> pairs);

/// Attaches interpolated positions. Samples outside the trajectory span are
/// dropped and counted in stats.out_of_span.
PairedChannel align_to_trajectory(std::span<const Complex> h, std::span<const double> timestamps,
                                  const Trajectory& traj);

struct PairingOptions {
  std::uint64_t max_counter_skew = 0;
  /// round_trip: pair and multiply (CFO cancelled).
  /// single_trip: forward stream only, for CFO-free data.
  PhaseFactor phase_factor = PhaseFactor::round_trip;
};

/// pair_packets -> cancel_cfo -> align_to_trajectory, with full stats.
PairedChannel build_paired_channel(const ExchangeLog& log, const Trajectory& traj,
                                   const PairingOptions& opts = {});

/// Transmission order of one TDMA-like exchange: the initiator broadcasts,
/// then each responder replies in the given order; repeated n_rounds times.
std::vector<AgentId> round_robin_schedule(AgentId initiator, std::span<const AgentId> responders,
                                          int n_rounds);

}  // namespace aoa
