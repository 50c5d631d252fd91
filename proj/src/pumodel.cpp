#include "rdv/pumodel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rdv/rng.hpp"

namespace rdv {

void PuTrafficConfig::validate() const {
  if (transmitters == 0) return;
  if (busy_slots == 0)
    throw std::invalid_argument("pu traffic: busy period must be >= 1 slot");
  if (!(idle_mean_slots > 0.0))
    throw std::invalid_argument("pu traffic: idle mean must be positive");
}

double PuTrafficConfig::analytic_intensity() const {
  return static_cast<double>(busy_slots) /
         (static_cast<double>(busy_slots) + idle_mean_slots);
}

double PuTrafficConfig::discretized_idle_mean() const {
  // ceil(Exp(l)) is geometric with p = 1 - exp(-1/l); mean 1/p.
  return 1.0 / (1.0 - std::exp(-1.0 / idle_mean_slots));
}

double PuTrafficConfig::discretized_intensity() const {
  double b = static_cast<double>(busy_slots);
  return b / (b + discretized_idle_mean());
}

double PuTrafficConfig::idle_mean_for_intensity(std::uint32_t busy_slots, double target) {
  if (!(target > 0.0) || !(target < 1.0))
    throw std::invalid_argument("pu traffic: intensity must be in (0, 1)");
  double idle_mean = static_cast<double>(busy_slots) * (1.0 - target) / target;
  if (idle_mean <= 1.0)
    throw std::invalid_argument("pu traffic: intensity too high for this busy length");
  // E[ceil(Exp(l))] = 1/(1 - exp(-1/l)) = idle_mean  =>  l = -1/log(1 - 1/idle_mean)
  return -1.0 / std::log(1.0 - 1.0 / idle_mean);
}

namespace {

// Renewal cursor shared by pu_trace and PuEnvironment so both produce the
// same bits for the same (seed, channel). State: current phase, slots left
// in it, and how many random words were consumed so far.
struct Cursor {
  bool idle = true;
  std::uint64_t remaining = 0;
  std::uint64_t draws = 0;  // 0 means not yet initialized
};

std::uint64_t idle_run(const PuTrafficConfig& cfg, std::uint64_t seed, Cursor& c) {
  double u = uniform01(stream_at(seed, c.draws++));
  if (u <= 0.0) u = 0x1.0p-53;
  double len = std::ceil(-cfg.idle_mean_slots * std::log(u));
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(len));
}

// Start in the stationary phase of the busy/idle cycle so long-run fractions
// hold from slot 0 (no synchronization artifacts across channels). The
// discretized idle run is geometric, hence memoryless: its stationary
// residual is the same geometric draw.
void init_cursor(const PuTrafficConfig& cfg, std::uint64_t seed, Cursor& c) {
  double u = uniform01(stream_at(seed, c.draws++));
  if (u < cfg.discretized_intensity()) {
    c.idle = false;
    c.remaining = 1 + uniform_below(stream_at(seed, c.draws++), cfg.busy_slots);
  } else {
    c.idle = true;
    c.remaining = idle_run(cfg, seed, c);
  }
}

// Availability of the current slot; advances the cursor by one slot.
bool step_cursor(const PuTrafficConfig& cfg, std::uint64_t seed, Cursor& c) {
  if (c.draws == 0) init_cursor(cfg, seed, c);
  bool available = c.idle;
  if (--c.remaining == 0) {
    c.idle = !c.idle;
    c.remaining = c.idle ? idle_run(cfg, seed, c) : cfg.busy_slots;
  }
  return available;
}

std::uint64_t channel_stream_seed(std::uint64_t seed, ChannelId channel) {
  return derive_seed(seed, channel, 0x9a);
}

}  // namespace

std::vector<std::uint8_t> pu_trace(const PuTrafficConfig& cfg, std::uint64_t seed,
                                   ChannelId channel, SlotIndex horizon) {
  cfg.validate();
  if (cfg.transmitters == 0) return std::vector<std::uint8_t>(horizon, 1);
  std::uint64_t stream = channel_stream_seed(seed, channel);
  Cursor cursor;
  std::vector<std::uint8_t> bits(horizon);
  for (SlotIndex t = 0; t < horizon; ++t)
    bits[t] = step_cursor(cfg, stream, cursor) ? 1 : 0;
  return bits;
}

PuEnvironment::PuEnvironment(const PuTrafficConfig& cfg, ChannelSet channels,
                             std::uint64_t seed)
    : cfg_(cfg), index_of_(channels.n + 1, -1) {
  cfg_.validate();
  if (cfg_.transmitters > channels.n)
    throw std::invalid_argument("pu traffic: more transmitters than channels");
  // X distinct channels, fixed for the run (partial Fisher-Yates).
  std::vector<ChannelId> all(channels.n);
  for (std::uint32_t i = 0; i < channels.n; ++i) all[i] = i + 1;
  std::uint64_t pick_seed = derive_seed(seed, 0xC4A);
  for (std::uint32_t i = 0; i < cfg_.transmitters; ++i) {
    std::uint64_t j = i + uniform_below(stream_at(pick_seed, i), channels.n - i);
    std::swap(all[i], all[j]);
    occupied_.push_back(all[i]);
  }
  std::sort(occupied_.begin(), occupied_.end());
  streams_.resize(occupied_.size());
  for (std::size_t i = 0; i < occupied_.size(); ++i) {
    index_of_[occupied_[i]] = static_cast<std::int32_t>(i);
    streams_[i].seed = channel_stream_seed(seed, occupied_[i]);
  }
}

bool PuEnvironment::available(ChannelId channel, SlotIndex t) const {
  std::int32_t idx = index_of_.at(channel);
  if (idx < 0) return true;
  Stream& s = streams_[static_cast<std::size_t>(idx)];
  while (s.bits.size() <= t) {
    Cursor cursor{s.idle, s.remaining, s.draws};
    s.bits.push_back(step_cursor(cfg_, s.seed, cursor) ? 1 : 0);
    s.idle = cursor.idle;
    s.remaining = cursor.remaining;
    s.draws = cursor.draws;
  }
  return s.bits[t] != 0;
}

}  // namespace rdv
