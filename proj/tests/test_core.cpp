#include <doctest.h>

#include <sstream>

#include "rdv/core.hpp"
#include "rdv/protocols.hpp"
#include "test_oracles.hpp"

using namespace rdv;

TEST_CASE("channel set validation") {
  CHECK_THROWS_AS(ChannelSet(0), std::invalid_argument);
  CHECK(ChannelSet(1).n == 1);
}

TEST_CASE("table sequence validation") {
  CHECK_THROWS_AS(table_sequence(ChannelSet(3), {}), std::invalid_argument);
  CHECK_THROWS_AS(table_sequence(ChannelSet(3), {1, 4}), std::invalid_argument);
  CHECK_THROWS_AS(table_sequence(ChannelSet(3), {0}), std::invalid_argument);
  auto s = table_sequence(ChannelSet(3), {1, 2, 3});
  CHECK(s->period() == 3);
  CHECK(s->channel_at(7) == 2);
}

// The two nodes of the slot-alignment figure, relabeled 1-based:
// {0,1,0,2} -> {1,2,1,3} and {1,2,0,1} -> {2,3,1,2}. They rendezvous in the
// third slot (index 2) on (relabeled) channel 1.
TEST_CASE("figure pair rendezvous") {
  auto a = table_sequence(ChannelSet(3), {1, 2, 1, 3});
  auto b = table_sequence(ChannelSet(3), {2, 3, 1, 2});
  auto rv = rendezvous_slots(*a, *b, 0, 4);
  CHECK(rv.slots == std::vector<SlotIndex>{2});
  CHECK(rv.channels == std::set<ChannelId>{1});
  CHECK(first_rendezvous(*a, *b, 0, 4) == 2);
}

TEST_CASE("identical sequences coincide everywhere") {
  auto a = jumpstay(ChannelSet(5), 3);
  auto rv = rendezvous_slots(*a, *a, 0, 10);
  REQUIRE(rv.slots.size() == 10);
  for (SlotIndex t = 0; t < 10; ++t) CHECK(rv.slots[t] == t);
  CHECK(first_rendezvous(*a, *a, 0, 10) == 0);
}

TEST_CASE("disjoint constants never meet") {
  auto a = constant_sequence(ChannelSet(2), 1);
  auto b = constant_sequence(ChannelSet(2), 2);
  for (ClockDrift d : {-3, 0, 5})
    CHECK(rendezvous_slots(*a, *b, d, 50).slots.empty());
}

TEST_CASE("mismatched channel sets rejected") {
  auto a = constant_sequence(ChannelSet(2), 1);
  auto b = constant_sequence(ChannelSet(3), 1);
  CHECK_THROWS_AS(rendezvous_slots(*a, *b, 0, 5), std::invalid_argument);
}

TEST_CASE("scan agrees with the naive oracle across drifts") {
  auto a = jumpstay(ChannelSet(5), 1);
  auto b = jumpstay(ChannelSet(5), 2);
  auto c = crseq(ChannelSet(5), 1);
  auto d = crseq(ChannelSet(5), 4);
  for (ClockDrift sigma = -20; sigma <= 20; ++sigma) {
    CHECK(first_rendezvous(*a, *b, sigma, 45) ==
          oracle::naive_first_rendezvous(*a, *b, sigma, 45));
    CHECK(first_rendezvous(*c, *d, sigma, 90) ==
          oracle::naive_first_rendezvous(*c, *d, sigma, 90));
  }
}

TEST_CASE("occurrence symmetry: (a,b,s) vs (b,a,-s)") {
  auto a = jumpstay(ChannelSet(5), 1);
  auto b = crseq(ChannelSet(5), 2);
  for (ClockDrift sigma = -17; sigma <= 17; ++sigma) {
    auto fwd = first_rendezvous(*a, *b, sigma, 80);
    auto rev = first_rendezvous(*b, *a, -sigma, 80);
    CHECK(fwd == rev);
  }
}

TEST_CASE("zero drift reduces to pointwise equality") {
  auto a = jumpstay(ChannelSet(7), 1);
  auto b = jumpstay(ChannelSet(7), 5);
  auto rv = rendezvous_slots(*a, *b, 0, 60);
  std::vector<SlotIndex> expect;
  for (SlotIndex t = 0; t < 60; ++t)
    if (a->channel_at(t) == b->channel_at(t)) expect.push_back(t);
  CHECK(rv.slots == expect);
}

TEST_CASE("drift reduces modulo the joint period") {
  auto a = table_sequence(ChannelSet(4), {1, 2, 3});        // period 3
  auto b = table_sequence(ChannelSet(4), {2, 1, 4, 3});     // period 4
  const std::uint64_t joint = 12;
  for (ClockDrift sigma = 0; sigma < 36; ++sigma) {
    auto full = rendezvous_slots(*a, *b, sigma, 24);
    auto reduced = rendezvous_slots(*a, *b, sigma % joint, 24);
    CHECK(full.slots == reduced.slots);
    CHECK(full.channels == reduced.channels);
  }
}

TEST_CASE("adversarial policy: randomized slots never rendezvous") {
  auto a = random_ch(ChannelSet(5), 11);
  auto b = random_ch(ChannelSet(5), 11);  // same realization
  CHECK(first_rendezvous(*a, *b, 0, 100) == 0);  // uniform policy sees equality
  CHECK(!first_rendezvous(*a, *b, 0, 100, RandomPolicy::adversarial));
}

TEST_CASE("adversarial policy: single channel always coincides") {
  auto a = random_ch(ChannelSet(1), 1);
  auto b = random_ch(ChannelSet(1), 2);
  CHECK(first_rendezvous(*a, *b, 0, 5, RandomPolicy::adversarial) == 0);
}

TEST_CASE("sequence dump round-trip") {
  auto s = jumpstay(ChannelSet(5), 1);
  std::ostringstream out;
  dump_sequence(out, *s, 30);
  std::string text = out.str();
  CHECK(text.substr(0, text.find('\n')) == "# period=15 n=5");

  std::istringstream in(text);
  SequenceDump dump = parse_sequence_dump(in);
  CHECK(dump.period == 15);
  CHECK(dump.n == 5);
  REQUIRE(dump.channels.size() == 30);
  for (SlotIndex t = 0; t < 30; ++t) CHECK(dump.channels[t] == s->channel_at(t));
}

TEST_CASE("dump header for unperiodic sequences") {
  auto s = random_ch(ChannelSet(4), 9);
  std::ostringstream out;
  dump_sequence(out, *s, 3);
  CHECK(out.str().substr(0, out.str().find('\n')) == "# period=none n=4");
  std::istringstream in(out.str());
  CHECK(!parse_sequence_dump(in).period);
}

TEST_CASE("dump parser rejects malformed input") {
  std::istringstream bad_header("period 15\n0\t1\n");
  CHECK_THROWS_AS(parse_sequence_dump(bad_header), std::invalid_argument);
  std::istringstream bad_channel("# period=none n=2\n0\t3\n");
  CHECK_THROWS_AS(parse_sequence_dump(bad_channel), std::invalid_argument);
  std::istringstream gap("# period=none n=2\n0\t1\n2\t1\n");
  CHECK_THROWS_AS(parse_sequence_dump(gap), std::invalid_argument);
}
