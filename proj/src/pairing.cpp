#include "aoa/pairing.hpp"

#include "aoa/error.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <string>

namespace aoa {
namespace {

void check_stream(std::span<const CsiPacket> stream, const char* name) {
  for (std::size_t k = 1; k < stream.size(); ++k) {
    if (stream[k].counter == stream[k - 1].counter) {
      raise(ErrorKind::malformed_log, std::string(name) + " stream has duplicate counter " +
                                          std::to_string(stream[k].counter));
    }
    if (stream[k].counter < stream[k - 1].counter) {
      raise(ErrorKind::malformed_log, std::string(name) + " stream counters are not sorted at index " +
                                          std::to_string(k));
    }
  }
}

}  // namespace

std::vector<Vec3> PairedChannel::positions() const {
  std::vector<Vec3> out;
  out.reserve(entries.size());
  for (const auto& e : entries) out.push_back(e.position);
  return out;
}

std::vector<Complex> PairedChannel::channel() const {
  std::vector<Complex> out;
  out.reserve(entries.size());
  for (const auto& e : entries) out.push_back(e.h);
  return out;
}

PairedChannel PairedChannel::subsampled(std::size_t step) const {
  if (step == 0) raise(ErrorKind::invalid_argument, "sub-sample step must be >= 1");
  PairedChannel out;
  out.stats = stats;
  for (std::size_t k = 0; k < entries.size(); k += step) out.entries.push_back(entries[k]);
  return out;
}

std::vector<PacketPair> pair_packets(const ExchangeLog& log, std::uint64_t max_counter_skew) {
  check_stream(log.forward, "forward");
  check_stream(log.reverse, "reverse");

  std::vector<PacketPair> pairs;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < log.forward.size() && j < log.reverse.size()) {
    const auto fc = log.forward[i].counter;
    const auto rc = log.reverse[j].counter;
    if (fc + max_counter_skew < rc) {
      ++i;
    } else if (rc + max_counter_skew < fc) {
      ++j;
    } else {
      pairs.push_back({log.forward[i], log.reverse[j]});
      ++i;
      ++j;
    }
  }
  return pairs;
}

std::vector<Complex> cancel_cfo(std::span<const PacketPair> pairs) {
  if (pairs.empty()) raise(ErrorKind::invalid_argument, "cancel_cfo needs at least one pair");
  std::vector<std::uint64_t> bad;
  std::vector<Complex> out;
  out.reserve(pairs.size());
  for (const auto& p : pairs) {
    if (!p.forward.valid() || !p.reverse.valid()) bad.push_back(p.forward.counter);
    out.push_back(p.forward.channel * p.reverse.channel);
  }
  if (!bad.empty()) {
    std::string list;
    for (std::size_t k = 0; k < bad.size(); ++k) list += (k ? "," : "") + std::to_string(bad[k]);
    raise(ErrorKind::degenerate_channel, "zero-magnitude channel at counters " + list);
  }
  return out;
}

PairedChannel align_to_trajectory(std::span<const Complex> h, std::span<const double> timestamps,
                                  const Trajectory& traj) {
  if (traj.empty()) raise(ErrorKind::invalid_argument, "empty trajectory");
  if (h.size() != timestamps.size()) {
    raise(ErrorKind::invalid_argument, "channel and timestamp counts differ");
  }
  PairedChannel out;
  out.stats.sent = out.stats.received = h.size();
  for (std::size_t k = 0; k < h.size(); ++k) {
    if (!traj.covers(timestamps[k])) {
      ++out.stats.out_of_span;
      continue;
    }
    out.entries.push_back({timestamps[k], traj.position_at(timestamps[k]), h[k]});
  }
  std::stable_sort(out.entries.begin(), out.entries.end(),
                   [](const ChannelSample& a, const ChannelSample& b) { return a.t < b.t; });
  out.stats.paired = out.entries.size();
  out.stats.dropped = h.size() - out.stats.paired;
  return out;
}

PairedChannel build_paired_channel(const ExchangeLog& log, const Trajectory& traj,
                                   const PairingOptions& opts) {
  std::vector<Complex> h;
  std::vector<double> times;
  std::size_t sent = 0;
  std::size_t received = 0;
  if (opts.phase_factor == PhaseFactor::round_trip) {
    const auto pairs = pair_packets(log, opts.max_counter_skew);
    sent = log.reverse.size();
    received = log.forward.size();
    if (!pairs.empty()) h = cancel_cfo(pairs);
    times.reserve(pairs.size());
    for (const auto& p : pairs) times.push_back(p.forward.timestamp);
  } else {
    check_stream(log.forward, "forward");
    sent = received = log.forward.size();
    for (const auto& p : log.forward) {
      if (!p.valid()) {
        raise(ErrorKind::degenerate_channel, "zero-magnitude channel at counter " + std::to_string(p.counter));
      }
      h.push_back(p.channel);
      times.push_back(p.timestamp);
    }
  }
  PairedChannel out = align_to_trajectory(h, times, traj);
  out.stats.sent = sent;
  out.stats.received = received;
  out.stats.dropped = std::min(sent, received) - out.stats.paired;
  return out;
}

std::vector<AgentId> round_robin_schedule(AgentId initiator, std::span<const AgentId> responders,
                                          int n_rounds) {
  if (responders.empty()) raise(ErrorKind::invalid_argument, "round robin needs at least one responder");
  if (n_rounds < 1) raise(ErrorKind::invalid_argument, "n_rounds must be >= 1");
  std::set<AgentId> seen;
  for (auto r : responders) {
    if (r == initiator) raise(ErrorKind::invalid_argument, "initiator cannot be its own responder");
    if (!seen.insert(r).second) {
      raise(ErrorKind::invalid_argument, "duplicate responder id " + std::to_string(r.value));
    }
  }
  std::vector<AgentId> schedule;
  schedule.reserve(static_cast<std::size_t>(n_rounds) * (responders.size() + 1));
  for (int round = 0; round < n_rounds; ++round) {
    schedule.push_back(initiator);
    schedule.insert(schedule.end(), responders.begin(), responders.end());
  }
  return schedule;
}

}  // namespace aoa
