#pragma once

#include <cstdint>
#include <vector>

#include "rdv/core.hpp"

namespace rdv {

/// Primary-user traffic: X transmitters occupy X distinct channels for a
/// whole run; each occupied channel alternates busy runs of exactly
/// `busy_slots` and idle runs of ceil(Exp(idle_mean_slots)) slots (min 1).
/// Channels without a transmitter are always available.
struct PuTrafficConfig {
  std::uint32_t transmitters = 0;   // X
  std::uint32_t busy_slots = 5;     // b
  double idle_mean_slots = 15.0;    // l, mean of the exponential before discretization

  void validate() const;

  /// b / (b + l), the continuous-time intensity.
  double analytic_intensity() const;
  /// Long-run busy fraction of the slotted process: b / (b + E[ceil(Exp(l))]),
  /// with E[ceil(Exp(l))] = 1 / (1 - exp(-1/l)).
  double discretized_intensity() const;
  double discretized_idle_mean() const;

  /// Inverse of discretized_intensity in l (closed form): the idle mean that
  /// makes the slotted busy fraction hit `target` exactly.
  static double idle_mean_for_intensity(std::uint32_t busy_slots, double target);
};

/// Availability bit-vector for one channel (1 = idle/available). The
/// renewal process starts in its stationary phase so long-run fractions are
/// unbiased from slot 0. Reproducible from (seed, channel). With zero
/// transmitters every channel is a free channel and the trace is all ones.
std::vector<std::uint8_t> pu_trace(const PuTrafficConfig& cfg, std::uint64_t seed,
                                   ChannelId channel, SlotIndex horizon);

/// Per-run availability view: picks the X occupied channels and extends the
/// per-channel traces lazily as slots are queried. Not safe to share across
/// threads; create one per worker.
class PuEnvironment {
 public:
  PuEnvironment(const PuTrafficConfig& cfg, ChannelSet channels, std::uint64_t seed);

  bool available(ChannelId channel, SlotIndex t) const;
  const std::vector<ChannelId>& occupied() const { return occupied_; }

 private:
  struct Stream {
    std::vector<std::uint8_t> bits;
    bool idle = true;
    std::uint64_t remaining = 0;  // slots left in the current run
    std::uint64_t draws = 0;
    std::uint64_t seed = 0;
  };
  PuTrafficConfig cfg_;
  std::vector<ChannelId> occupied_;
  std::vector<std::int32_t> index_of_;  // channel -> stream index, -1 if free
  mutable std::vector<Stream> streams_;
};

}  // namespace rdv
