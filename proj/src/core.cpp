#include "rdv/core.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

namespace rdv {

ChannelSet::ChannelSet(std::uint32_t count) : n(count) {
  if (n == 0) throw std::invalid_argument("channel set: need at least one channel");
}

namespace {

class TableSequence final : public ChSequence {
 public:
  TableSequence(ChannelSet channels, std::vector<ChannelId> table)
      : ChSequence(channels), table_(std::move(table)) {
    if (table_.empty()) throw std::invalid_argument("table sequence: empty table");
    for (ChannelId c : table_)
      if (c < 1 || c > n_)
        throw std::invalid_argument("table sequence: channel out of [1, N]");
  }
  ChannelId channel_at(SlotIndex t) const override { return table_[t % table_.size()]; }
  bool deterministic() const override { return true; }
  std::optional<std::uint64_t> period() const override { return table_.size(); }

 private:
  std::vector<ChannelId> table_;
};

bool slots_match(const ChSequence& behind, const ChSequence& ahead, SlotIndex tb,
                 SlotIndex ta, RandomPolicy policy) {
  if (policy == RandomPolicy::uniform)
    return behind.channel_at(tb) == ahead.channel_at(ta);
  if (behind.channel_count() == 1) return true;  // nowhere else to go
  auto cb = behind.fixed_channel_at(tb);
  if (!cb) return false;
  auto ca = ahead.fixed_channel_at(ta);
  return ca && *ca == *cb;
}

}  // namespace

SequencePtr table_sequence(ChannelSet channels, std::vector<ChannelId> table) {
  return std::make_shared<TableSequence>(channels, std::move(table));
}

SequencePtr constant_sequence(ChannelSet channels, ChannelId channel) {
  return table_sequence(channels, {channel});
}

RendezvousSlotSet rendezvous_slots(const ChSequence& a, const ChSequence& b,
                                   ClockDrift drift, SlotIndex horizon,
                                   RandomPolicy policy) {
  if (a.channel_count() != b.channel_count())
    throw std::invalid_argument("rendezvous: sequences use different channel sets");
  // Rendezvous slots are indexed by the clock left behind: a's when
  // drift > 0, b's otherwise.
  const ChSequence* behind = &a;
  const ChSequence* ahead = &b;
  std::uint64_t offset = static_cast<std::uint64_t>(drift);
  if (drift < 0) {
    behind = &b;
    ahead = &a;
    offset = static_cast<std::uint64_t>(-drift);
  }
  RendezvousSlotSet result;
  for (SlotIndex t = 0; t < horizon; ++t) {
    if (slots_match(*behind, *ahead, t, t + offset, policy)) {
      result.slots.push_back(t);
      // Channel seen by the behind node; with the uniform policy both sides
      // agree by construction of the match.
      if (policy == RandomPolicy::uniform) {
        result.channels.insert(behind->channel_at(t));
      } else {
        auto c = behind->fixed_channel_at(t);
        result.channels.insert(c ? *c : behind->channel_at(t));
      }
    }
  }
  return result;
}

std::optional<SlotIndex> first_rendezvous(const ChSequence& a, const ChSequence& b,
                                          ClockDrift drift, SlotIndex horizon,
                                          RandomPolicy policy) {
  if (a.channel_count() != b.channel_count())
    throw std::invalid_argument("rendezvous: sequences use different channel sets");
  const ChSequence* behind = &a;
  const ChSequence* ahead = &b;
  std::uint64_t offset = static_cast<std::uint64_t>(drift);
  if (drift < 0) {
    behind = &b;
    ahead = &a;
    offset = static_cast<std::uint64_t>(-drift);
  }
  for (SlotIndex t = 0; t < horizon; ++t)
    if (slots_match(*behind, *ahead, t, t + offset, policy)) return t;
  return std::nullopt;
}

void dump_sequence(std::ostream& out, const ChSequence& seq, SlotIndex slots) {
  out << "# period=";
  if (auto p = seq.period())
    out << *p;
  else
    out << "none";
  out << " n=" << seq.channel_count() << "\n";
  for (SlotIndex t = 0; t < slots; ++t) out << t << "\t" << seq.channel_at(t) << "\n";
}

SequenceDump parse_sequence_dump(std::istream& in) {
  SequenceDump dump;
  std::string line;
  if (!std::getline(in, line))
    throw std::invalid_argument("sequence dump: missing header");
  {
    std::istringstream header(line);
    std::string hash, period_kv, n_kv;
    header >> hash >> period_kv >> n_kv;
    if (hash != "#" || period_kv.rfind("period=", 0) != 0 || n_kv.rfind("n=", 0) != 0)
      throw std::invalid_argument("sequence dump: bad header '" + line + "'");
    std::string period_str = period_kv.substr(7);
    if (period_str != "none") dump.period = std::stoull(period_str);
    dump.n = static_cast<std::uint32_t>(std::stoul(n_kv.substr(2)));
    if (dump.n == 0) throw std::invalid_argument("sequence dump: n must be positive");
  }
  SlotIndex expected_t = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    SlotIndex t = 0;
    ChannelId c = 0;
    if (!(row >> t >> c))
      throw std::invalid_argument("sequence dump: bad row '" + line + "'");
    if (t != expected_t)
      throw std::invalid_argument("sequence dump: non-contiguous slot index");
    if (c < 1 || c > dump.n)
      throw std::invalid_argument("sequence dump: channel out of [1, N]");
    dump.channels.push_back(c);
    ++expected_t;
  }
  return dump;
}

}  // namespace rdv
