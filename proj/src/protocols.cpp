#include "rdv/protocols.hpp"

#include <stdexcept>
#include <vector>

#include "rdv/rng.hpp"

namespace rdv {

bool is_prime(std::uint64_t v) {
  if (v < 2) return false;
  if (v < 4) return true;
  if (v % 2 == 0 || v % 3 == 0) return false;
  for (std::uint64_t i = 5; i * i <= v; i += 6)
    if (v % i == 0 || v % (i + 2) == 0) return false;
  return true;
}

std::uint64_t smallest_prime_geq(std::uint64_t v) {
  std::uint64_t p = v < 2 ? 2 : v;
  while (!is_prime(p)) ++p;
  return p;
}

namespace {

constexpr ChannelId remap(std::uint64_t c, std::uint32_t n) {
  return static_cast<ChannelId>((c - 1) % n + 1);
}

class RandomChSequence final : public ChSequence {
 public:
  RandomChSequence(ChannelSet channels, std::uint64_t seed)
      : ChSequence(channels), seed_(seed) {}
  ChannelId channel_at(SlotIndex t) const override {
    return uniform_channel(stream_at(seed_, t), n_);
  }
  std::optional<ChannelId> fixed_channel_at(SlotIndex) const override {
    return std::nullopt;
  }
  bool deterministic() const override { return false; }
  std::optional<std::uint64_t> period() const override { return std::nullopt; }

 private:
  std::uint64_t seed_;
};

class JumpStaySequence final : public ChSequence {
 public:
  JumpStaySequence(ChannelSet channels, NodeId id) : ChSequence(channels) {
    p_ = smallest_prime_geq(n_);
    rate_ = (id + p_ - 1) % p_ + 1;        // r in [1, P]
    start_ = (id % p_) * 31 % p_ + 1;      // i0 in [1, P]
  }
  ChannelId channel_at(SlotIndex t) const override {
    std::uint64_t u = t % (3 * p_);
    std::uint64_t c = u < 2 * p_ ? (start_ - 1 + u * rate_) % p_ + 1 : rate_;
    return remap(c, n_);
  }
  bool deterministic() const override { return true; }
  std::optional<std::uint64_t> period() const override { return 3 * p_; }

 private:
  std::uint64_t p_, rate_, start_;
};

class CrseqSequence final : public ChSequence {
 public:
  CrseqSequence(ChannelSet channels, NodeId) : ChSequence(channels) {
    p_ = smallest_prime_geq(n_);
  }
  ChannelId channel_at(SlotIndex t) const override {
    std::uint64_t sub_len = 3 * p_ - 1;
    std::uint64_t pos = t % (p_ * sub_len);
    std::uint64_t j = pos / sub_len;
    std::uint64_t u = pos % sub_len;
    std::uint64_t c = u < 2 * p_ - 1 ? (j * (j + 1) / 2 + u) % p_ + 1 : j % p_ + 1;
    return remap(c, n_);
  }
  bool deterministic() const override { return true; }
  std::optional<std::uint64_t> period() const override { return p_ * (3 * p_ - 1); }

 private:
  std::uint64_t p_;
};

class ModularSequence final : public ChSequence {
 public:
  ModularSequence(ChannelSet channels, NodeId id) : ChSequence(channels) {
    p_ = smallest_prime_geq(n_);
    id_ = id % p_;
  }
  ChannelId channel_at(SlotIndex t) const override {
    std::uint64_t tt = t % (p_ * p_);  // reduce first; the formula is P^2-periodic
    std::uint64_t c = ((tt / p_) % p_ * (tt % p_) % p_ + id_) % p_ + 1;
    return remap(c, n_);
  }
  bool deterministic() const override { return true; }
  std::optional<std::uint64_t> period() const override { return p_ * p_; }

 private:
  std::uint64_t p_, id_;
};

}  // namespace

std::string_view protocol_name(ProtocolKind kind) {
  switch (kind) {
    case ProtocolKind::random_ch: return "random";
    case ProtocolKind::crseq: return "crseq";
    case ProtocolKind::jumpstay: return "jumpstay";
    case ProtocolKind::modular_baseline: return "modular";
  }
  return "?";
}

std::optional<ProtocolKind> protocol_from_name(std::string_view name) {
  if (name == "random") return ProtocolKind::random_ch;
  if (name == "crseq") return ProtocolKind::crseq;
  if (name == "jumpstay") return ProtocolKind::jumpstay;
  if (name == "modular") return ProtocolKind::modular_baseline;
  return std::nullopt;
}

SequencePtr random_ch(ChannelSet channels, std::uint64_t seed) {
  return std::make_shared<RandomChSequence>(channels, seed);
}

SequencePtr jumpstay(ChannelSet channels, NodeId id) {
  return std::make_shared<JumpStaySequence>(channels, id);
}

SequencePtr crseq(ChannelSet channels, NodeId id) {
  return std::make_shared<CrseqSequence>(channels, id);
}

SequencePtr modular_baseline(ChannelSet channels, NodeId id) {
  return std::make_shared<ModularSequence>(channels, id);
}

std::optional<std::uint64_t> detect_period(const ChSequence& seq,
                                           std::uint64_t max_period) {
  if (!seq.deterministic())
    throw std::invalid_argument("detect_period: sequence must be deterministic");
  if (max_period == 0)
    throw std::invalid_argument("detect_period: max_period must be positive");
  std::uint64_t window = 3 * max_period;
  std::vector<ChannelId> buf(window + max_period);
  for (std::uint64_t t = 0; t < buf.size(); ++t) buf[t] = seq.channel_at(t);
  for (std::uint64_t tau = 1; tau <= max_period; ++tau) {
    bool ok = true;
    for (std::uint64_t t = 0; t < window; ++t) {
      if (buf[t] != buf[t + tau]) {
        ok = false;
        break;
      }
    }
    if (ok) return tau;
  }
  return std::nullopt;
}

std::optional<std::uint64_t> ProtocolDescriptor::period() const {
  if (!periodic()) return std::nullopt;
  auto detected = detect_period(*sequence(1), period_bound());
  if (!detected)
    throw std::logic_error("protocol period not found within its structural bound");
  return detected;
}

std::uint64_t ProtocolDescriptor::period_bound() const {
  std::uint64_t p = smallest_prime_geq(n);
  switch (kind) {
    case ProtocolKind::jumpstay: return 3 * p;
    case ProtocolKind::crseq: return p * (3 * p - 1);
    case ProtocolKind::modular_baseline: return p * p;
    case ProtocolKind::random_ch: break;
  }
  throw std::invalid_argument("random CH has no period");
}

SequencePtr ProtocolDescriptor::sequence(NodeId id, std::uint64_t seed) const {
  ChannelSet channels(n);
  switch (kind) {
    case ProtocolKind::random_ch: return random_ch(channels, seed);
    case ProtocolKind::crseq: return crseq(channels, id);
    case ProtocolKind::jumpstay: return jumpstay(channels, id);
    case ProtocolKind::modular_baseline: return modular_baseline(channels, id);
  }
  throw std::invalid_argument("unknown protocol");
}

}  // namespace rdv
