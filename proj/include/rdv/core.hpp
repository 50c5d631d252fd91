#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <set>
#include <vector>

namespace rdv {

// Slot/channel domain model. Channel labels are 1-based everywhere; figure
// examples that use 0-based labels are relabeled on ingestion. Slots are
// aligned integers (slot duration 2*t0 guarantees enough overlap for link
// establishment even under boundary misalignment, so alignment is assumed).

using ChannelId = std::uint32_t;  // label in [1, N]
using SlotIndex = std::uint64_t;  // local slot number, starting at 0
using ClockDrift = std::int64_t;  // sigma: >0 means node a's clock is behind b's

/// The sensible channel set C = {1, ..., N}.
struct ChannelSet {
  std::uint32_t n;
  explicit ChannelSet(std::uint32_t count);
};

/// A channel hopping sequence: a total map slot -> channel. Randomized
/// sequences are defined by (seed, slot counter), so any slot's channel is
/// reproducible without storing history. Instances are immutable and safe
/// to share across threads.
class ChSequence {
 public:
  virtual ~ChSequence() = default;

  /// Channel hopped onto at slot t. For randomized sequences this is the
  /// realization under the carried seed.
  virtual ChannelId channel_at(SlotIndex t) const = 0;

  /// Channel at slot t when the slot is deterministic; absent when the slot
  /// is resolved randomly at emission (pure random CH, asleep slots of a
  /// hybrid, alias channels). Worst-case scans key off this.
  virtual std::optional<ChannelId> fixed_channel_at(SlotIndex t) const {
    return channel_at(t);
  }

  virtual bool deterministic() const = 0;

  /// A period of the sequence when one is known from construction
  /// (not necessarily minimal); absent for pure random CH.
  virtual std::optional<std::uint64_t> period() const = 0;

  std::uint32_t channel_count() const { return n_; }

 protected:
  explicit ChSequence(ChannelSet channels) : n_(channels.n) {}
  std::uint32_t n_;
};

using SequencePtr = std::shared_ptr<const ChSequence>;

/// Sequence that cycles through a fixed channel table (period = table size).
SequencePtr table_sequence(ChannelSet channels, std::vector<ChannelId> table);
SequencePtr constant_sequence(ChannelSet channels, ChannelId channel);

/// How randomized slots behave in rendezvous scans.
///  - uniform: use the realized channels (channel_at).
///  - adversarial: randomized slots never coincide with the peer; only
///    slots that are deterministic on both sides can rendezvous. This turns
///    worst-case guarantees into deterministic checks. (With a single
///    channel every slot coincides regardless.)
enum class RandomPolicy { uniform, adversarial };

struct RendezvousSlotSet {
  std::vector<SlotIndex> slots;    // indexed by the clock left behind
  std::set<ChannelId> channels;    // distinct rendezvous channels
};

/// All rendezvous slots in [0, horizon). Rendezvous at node a's slot t iff
/// theta_a(t) == theta_b(t + sigma); slots are indexed by the clock left
/// behind (a's when sigma > 0, b's otherwise).
RendezvousSlotSet rendezvous_slots(const ChSequence& a, const ChSequence& b,
                                   ClockDrift drift, SlotIndex horizon,
                                   RandomPolicy policy = RandomPolicy::uniform);

/// Smallest rendezvous slot within the horizon, absent if none.
std::optional<SlotIndex> first_rendezvous(const ChSequence& a, const ChSequence& b,
                                          ClockDrift drift, SlotIndex horizon,
                                          RandomPolicy policy = RandomPolicy::uniform);

// Sequence dump interop format: header "# period=<tau|none> n=<N>" followed
// by one "t<TAB>channel" line per slot.
void dump_sequence(std::ostream& out, const ChSequence& seq, SlotIndex slots);

struct SequenceDump {
  std::optional<std::uint64_t> period;
  std::uint32_t n = 0;
  std::vector<ChannelId> channels;  // channels[t] for t = 0..slots-1
};
SequenceDump parse_sequence_dump(std::istream& in);

}  // namespace rdv
