#include "rdv/interleave.hpp"

#include <numeric>
#include <string>

#include "rdv/rng.hpp"

namespace rdv {

PaddedChannelSet pad_channels(ChannelSet channels, ProtocolKind proto,
                              const WakeUpSchedule& x) {
  if (proto == ProtocolKind::random_ch)
    throw std::invalid_argument("pad_channels: the base protocol must be periodic");
  std::uint32_t awake = x.awake_count();
  if (awake == 0)
    throw std::invalid_argument("pad_channels: schedule has no awake slots");
  constexpr std::uint32_t kSearchCap = 64;
  for (std::uint32_t n = channels.n; n <= channels.n + kSearchCap; ++n) {
    ProtocolDescriptor desc{proto, n};
    std::uint64_t tau = *desc.period();
    if (std::gcd(tau, static_cast<std::uint64_t>(awake)) == 1)
      return PaddedChannelSet{channels.n, n, tau};
  }
  throw InfeasiblePaddingError(
      "pad_channels: no channel count in [N, N+64] makes the period of " +
      std::string(protocol_name(proto)) + " coprime with awake count " +
      std::to_string(awake) + " (pathological period function)");
}

HybridProtocol make_hybrid(ProtocolKind base, NodeId node, ChannelSet channels,
                           WakeUpSchedule schedule, std::uint64_t seed,
                           RandomPolicy policy) {
  PaddedChannelSet padded = pad_channels(channels, base, schedule);
  return HybridProtocol{base, node, std::move(schedule), padded, seed, policy};
}

HybridSequence::HybridSequence(SequencePtr base, WakeUpSchedule schedule,
                               PaddedChannelSet padded, std::uint64_t seed)
    : ChSequence(ChannelSet(padded.n_original)),
      base_(std::move(base)),
      schedule_(std::move(schedule)),
      padded_(padded),
      seed_(seed) {
  if (base_->channel_count() != padded_.n_padded)
    throw std::invalid_argument("hybrid: base sequence does not match the padded set");
  // An all-zero schedule is permitted here (every slot takes the random
  // branch, i.e. pure random CH); schedule generation never emits one.
}

bool HybridSequence::awake_at(SlotIndex t) const {
  return schedule_.bit(t % schedule_.length());
}

std::uint64_t HybridSequence::base_index_at(SlotIndex t) const {
  return schedule_.awake_prefix(t);
}

std::uint64_t HybridSequence::skeleton_period() const {
  return padded_.base_period * schedule_.length();
}

ChannelId HybridSequence::channel_at(SlotIndex t) const {
  if (awake_at(t)) {
    ChannelId c = base_->channel_at(base_index_at(t));
    if (c <= padded_.n_original) return c;
    // alias channel: resolve to a fresh uniform real channel at emission
  }
  return uniform_channel(stream_at(seed_, t), padded_.n_original);
}

std::optional<ChannelId> HybridSequence::fixed_channel_at(SlotIndex t) const {
  if (!awake_at(t)) return std::nullopt;
  ChannelId c = base_->channel_at(base_index_at(t));
  if (c > padded_.n_original) return std::nullopt;
  return c;
}

bool HybridSequence::deterministic() const {
  return schedule_.awake_count() == schedule_.length() &&
         padded_.n_padded == padded_.n_original;
}

std::optional<std::uint64_t> HybridSequence::period() const {
  if (deterministic()) return padded_.base_period;
  return std::nullopt;
}

std::shared_ptr<const HybridSequence> hybrid_sequence(const HybridProtocol& h) {
  ProtocolDescriptor desc{h.base, h.padded.n_padded};
  return std::make_shared<HybridSequence>(desc.sequence(h.node), h.schedule, h.padded,
                                          h.seed);
}

std::vector<std::pair<SlotIndex, std::uint64_t>> awake_subsequence_offsets(
    const HybridSequence& h, ClockDrift k) {
  const WakeUpSchedule& x = h.schedule();
  std::int64_t t_len = static_cast<std::int64_t>(x.length());
  std::size_t shift = static_cast<std::size_t>(((k % t_len) + t_len) % t_len);
  std::optional<std::size_t> witness;
  for (std::size_t t = 0; t < x.length(); ++t) {
    if (x.bit(t) && x.bit((t + shift) % x.length())) {
      witness = t;
      break;
    }
  }
  if (!witness)
    throw InfeasibleScheduleError(
        "awake_subsequence_offsets: rotation " + std::to_string(k) +
        " has no common awake slot (discovery property does not hold)");
  std::uint64_t tau = h.padded().base_period;
  std::uint64_t c1 = h.base_index_at(*witness);
  std::vector<std::pair<SlotIndex, std::uint64_t>> out;
  out.reserve(tau);
  for (std::uint64_t a = 0; a < tau; ++a)
    out.emplace_back(*witness + a * x.length(), c1 + a * x.awake_count());
  return out;
}

}  // namespace rdv
