#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "rdv/core.hpp"

namespace rdv {

/// Node identifier from the ID universe. The constructions only use the id
/// modulo a prime, so any value works mechanically; the CLI enforces the
/// id >= 1 convention.
using NodeId = std::uint64_t;

enum class ProtocolKind { random_ch, crseq, jumpstay, modular_baseline };

/// CLI-facing names: "random", "crseq", "jumpstay", "modular".
std::string_view protocol_name(ProtocolKind kind);
std::optional<ProtocolKind> protocol_from_name(std::string_view name);

/// Each node hops onto an i.i.d. uniform channel in [1, N] every slot.
/// Best average TTR but unbounded maximum TTR.
SequencePtr random_ch(ChannelSet channels, std::uint64_t seed);

// Deterministic protocols below round N up to the smallest prime P >= N and
// remap emitted channels c > N to ((c-1) mod N) + 1, so non-prime channel
// counts are handled uniformly (the extra labels act as aliases of real
// channels). The sequence a node generates depends only on (id, N).

/// Jump-stay: rounds of 3P slots; 2P jump slots stepping by a rate r derived
/// from the id, then P stay slots on channel r. Period 3N for prime N.
SequencePtr jumpstay(ChannelSet channels, NodeId id);

/// CRSEQ: P subsequences of (3P-1) slots; subsequence j walks 2P-1 channels
/// starting from the triangle number T_j = j(j+1)/2, then stays P slots on
/// channel (j mod P) + 1. Period N(3N-1) for prime N. The construction does
/// not depend on the id.
SequencePtr crseq(ChannelSet channels, NodeId id);

/// Self-contained periodic baseline: slot t visits channel
/// ((floor(t/P) * t + id) mod P) + 1, period P^2. Note that two ids that
/// differ mod P produce sequences offset by a constant, which never meet at
/// drift 0; pair it with congruent ids when a guaranteed-rendezvous base is
/// needed.
SequencePtr modular_baseline(ChannelSet channels, NodeId id);

/// Smallest tau <= max_period with channel_at(t + tau) == channel_at(t) for
/// every t in [0, 3 * max_period), or absent. Requires a deterministic
/// sequence.
std::optional<std::uint64_t> detect_period(const ChSequence& seq, std::uint64_t max_period);

/// A protocol applied to a fixed channel count; resolves period facts.
struct ProtocolDescriptor {
  ProtocolKind kind;
  std::uint32_t n;

  bool periodic() const { return kind != ProtocolKind::random_ch; }

  /// Detected period of the construction over n channels. Detected on the
  /// canonical node id 1 so every node derives the same value (the padding
  /// scheme must be computable independently by all nodes); absent for
  /// random CH.
  std::optional<std::uint64_t> period() const;

  /// Structural period bound from the construction (3P, P(3P-1), P^2).
  std::uint64_t period_bound() const;

  /// Sequence for a node; `seed` is consumed by random CH only.
  SequencePtr sequence(NodeId id, std::uint64_t seed = 0) const;
};

bool is_prime(std::uint64_t v);
std::uint64_t smallest_prime_geq(std::uint64_t v);

}  // namespace rdv
