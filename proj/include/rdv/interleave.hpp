#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "rdv/core.hpp"
#include "rdv/protocols.hpp"
#include "rdv/wakeup.hpp"

namespace rdv {

// Interleaving framework: a wake-up schedule decides, slot by slot, whether
// a node follows its sequence-based CH protocol (awake) or hops onto a
// random channel (asleep). The padding scheme first grows the channel count
// until the base period tau and the awake count A are coprime; that is the
// precondition that makes the consumed base indices sweep all residues
// mod tau and yields the tau*T rendezvous bound.

/// Channel universe after padding. Labels in (n_original, n_padded] are
/// aliases: whenever the base sequence emits one, the hybrid resolves it to
/// a fresh uniform channel in [1, n_original] at emission time.
struct PaddedChannelSet {
  std::uint32_t n_original;
  std::uint32_t n_padded;
  std::uint64_t base_period;  // detected period of the base protocol over n_padded
};

struct InfeasiblePaddingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Smallest n' >= n with gcd(period(proto over n'), awake_count(x)) == 1.
/// The period is the detected period of the construction, not a closed
/// form. Throws InfeasiblePaddingError when no n' <= n + 64 works (e.g. the
/// jump-stay period 3P is always divisible by 3, so awake counts divisible
/// by 3 can never be made coprime).
PaddedChannelSet pad_channels(ChannelSet channels, ProtocolKind proto,
                              const WakeUpSchedule& x);

/// Everything a node needs to run the interleaved protocol.
struct HybridProtocol {
  ProtocolKind base;
  NodeId node;
  WakeUpSchedule schedule;
  PaddedChannelSet padded;
  std::uint64_t seed = 0;
  /// Carried as metadata for metric scans; the realized sequence always
  /// draws uniformly (an adversarial draw is only meaningful against a
  /// concrete peer).
  RandomPolicy random_policy = RandomPolicy::uniform;
};

/// Runs the padding scheme and bundles the result.
HybridProtocol make_hybrid(ProtocolKind base, NodeId node, ChannelSet channels,
                           WakeUpSchedule schedule, std::uint64_t seed,
                           RandomPolicy policy = RandomPolicy::uniform);

/// The interleaved CH sequence. At slot t: if the schedule bit (t mod T) is
/// 1, emit the next unconsumed base slot (the consumption counter advances
/// only on awake slots); otherwise a random channel in [1, n_original].
/// Alias channels from the base resolve randomly at emission.
class HybridSequence final : public ChSequence {
 public:
  HybridSequence(SequencePtr base, WakeUpSchedule schedule, PaddedChannelSet padded,
                 std::uint64_t seed);

  ChannelId channel_at(SlotIndex t) const override;
  std::optional<ChannelId> fixed_channel_at(SlotIndex t) const override;
  bool deterministic() const override;
  std::optional<std::uint64_t> period() const override;

  bool awake_at(SlotIndex t) const;
  /// Base index consumed at slot t when awake; equivalently the number of
  /// awake slots in [0, t).
  std::uint64_t base_index_at(SlotIndex t) const;
  /// Period of the deterministic skeleton (tau * T): the window within
  /// which rendezvous is guaranteed, and the natural drift domain.
  std::uint64_t skeleton_period() const;

  const WakeUpSchedule& schedule() const { return schedule_; }
  const PaddedChannelSet& padded() const { return padded_; }
  const ChSequence& base() const { return *base_; }

 private:
  SequencePtr base_;
  WakeUpSchedule schedule_;
  PaddedChannelSet padded_;
  std::uint64_t seed_;
};

/// Builds the base sequence over the padded channel set and interleaves it.
std::shared_ptr<const HybridSequence> hybrid_sequence(const HybridProtocol& h);

/// For rotation k of the schedule against itself: take the first common
/// awake slot t0 and list the slots t0 + a*T for a in [0, tau) together
/// with the base index consumed at each. With gcd(tau, A) = 1 those indices
/// sweep every residue mod tau, which is the permutation argument behind
/// the tau*T bound. Throws InfeasibleScheduleError when rotation k has no
/// common awake slot.
std::vector<std::pair<SlotIndex, std::uint64_t>> awake_subsequence_offsets(
    const HybridSequence& h, ClockDrift k);

}  // namespace rdv
