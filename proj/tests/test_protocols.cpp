#include <doctest.h>

#include <array>
#include <cmath>

#include "rdv/protocols.hpp"
#include "rdv/rng.hpp"
#include "test_oracles.hpp"

using namespace rdv;

TEST_CASE("prime helpers") {
  CHECK(!is_prime(0));
  CHECK(!is_prime(1));
  CHECK(is_prime(2));
  CHECK(is_prime(3));
  CHECK(!is_prime(9));
  CHECK(is_prime(97));
  CHECK(smallest_prime_geq(1) == 2);
  CHECK(smallest_prime_geq(2) == 2);
  CHECK(smallest_prime_geq(4) == 5);
  CHECK(smallest_prime_geq(8) == 11);
  CHECK(smallest_prime_geq(14) == 17);
}

TEST_CASE("protocol names round-trip") {
  for (auto kind : {ProtocolKind::random_ch, ProtocolKind::crseq,
                    ProtocolKind::jumpstay, ProtocolKind::modular_baseline})
    CHECK(protocol_from_name(protocol_name(kind)) == kind);
  CHECK(!protocol_from_name("ETCH"));
}

TEST_CASE("random CH basics") {
  auto one = random_ch(ChannelSet(1), 42);
  for (SlotIndex t = 0; t < 50; ++t) CHECK(one->channel_at(t) == 1);

  auto a = random_ch(ChannelSet(11), 7);
  auto b = random_ch(ChannelSet(11), 7);
  for (SlotIndex t = 0; t < 1000; ++t) CHECK(a->channel_at(t) == b->channel_at(t));

  auto c = random_ch(ChannelSet(11), 8);
  bool differs = false;
  for (SlotIndex t = 0; t < 1000 && !differs; ++t)
    differs = a->channel_at(t) != c->channel_at(t);
  CHECK(differs);

  CHECK(!a->deterministic());
  CHECK(!a->period());
  CHECK(!a->fixed_channel_at(0));
}

TEST_CASE("random CH slots look uniform (chi-square)") {
  const std::uint32_t n = 11;
  auto s = random_ch(ChannelSet(n), 20240817);
  std::array<std::uint64_t, 12> counts{};
  const std::uint64_t slots = 110000;
  for (SlotIndex t = 0; t < slots; ++t) counts[s->channel_at(t)]++;
  double expected = static_cast<double>(slots) / n;
  double chi2 = 0;
  for (std::uint32_t c = 1; c <= n; ++c) {
    double d = static_cast<double>(counts[c]) - expected;
    chi2 += d * d / expected;
  }
  CHECK(chi2 < 35.0);  // dof 10, far beyond the 99.9th percentile
}

TEST_CASE("jump-stay period is 3N for prime N") {
  for (std::uint32_t n : {3u, 5u, 7u, 11u}) {
    ProtocolDescriptor desc{ProtocolKind::jumpstay, n};
    CHECK(desc.period() == 3 * n);
    CHECK(detect_period(*jumpstay(ChannelSet(n), 1), 3 * n) == 3 * n);
  }
}

TEST_CASE("crseq period is N(3N-1) for prime N") {
  for (std::uint32_t n : {3u, 5u, 7u, 11u}) {
    ProtocolDescriptor desc{ProtocolKind::crseq, n};
    CHECK(desc.period() == n * (3 * n - 1));
  }
}

TEST_CASE("single-channel constructions are constant") {
  for (auto kind : {ProtocolKind::crseq, ProtocolKind::jumpstay,
                    ProtocolKind::modular_baseline}) {
    auto s = ProtocolDescriptor{kind, 1}.sequence(1);
    for (SlotIndex t = 0; t < 40; ++t) CHECK(s->channel_at(t) == 1);
  }
}

// Exhaustive drift table for jump-stay N=5, nodes 1 and 2: first rendezvous
// exists within 3P = 15 slots for every drift. The table was computed with
// the full-scan oracle and is re-derived here.
TEST_CASE("jump-stay N=5 drift table") {
  auto a = jumpstay(ChannelSet(5), 1);
  auto b = jumpstay(ChannelSet(5), 2);
  const std::array<SlotIndex, 15> frozen{4, 2, 0, 3, 1, 4, 2, 0, 5, 5, 0, 0, 0, 0, 0};
  for (ClockDrift d = 0; d < 15; ++d) {
    auto got = first_rendezvous(*a, *b, d, 15);
    auto check = oracle::naive_first_rendezvous(*a, *b, d, 15);
    REQUIRE(got.has_value());
    CHECK(*got == frozen[static_cast<std::size_t>(d)]);
    CHECK(got == check);
  }
}

TEST_CASE("crseq N=5 rendezvous within one period at every drift") {
  auto a = crseq(ChannelSet(5), 1);
  auto b = crseq(ChannelSet(5), 2);
  for (ClockDrift d = 0; d < 70; ++d) {
    auto t = first_rendezvous(*a, *b, d, 70);
    REQUIRE(t.has_value());
    CHECK(*t < 70);
  }
}

TEST_CASE("crseq does not depend on the node id") {
  auto a = crseq(ChannelSet(6), 1);
  auto b = crseq(ChannelSet(6), 9);
  for (SlotIndex t = 0; t < 200; ++t) CHECK(a->channel_at(t) == b->channel_at(t));
}

// The modular baseline shifts channels by the id (mod P), so two ids that
// differ mod P never meet at drift 0; the brute-force 9x9 table makes that
// explicit. Computed by exhaustive scan, cross-checked against the naive
// oracle.
TEST_CASE("modular N=3 ids 0/1 drift table") {
  auto a = modular_baseline(ChannelSet(3), 0);
  auto b = modular_baseline(ChannelSet(3), 1);
  const std::array<std::optional<SlotIndex>, 9> frozen{
      std::nullopt, 6, 3, 2, 1, 0, 1, 0, 4};
  for (ClockDrift d = 0; d < 9; ++d) {
    auto got = first_rendezvous(*a, *b, d, 9);
    CHECK(got == frozen[static_cast<std::size_t>(d)]);
    CHECK(got == oracle::naive_first_rendezvous(*a, *b, d, 9));
  }
}

TEST_CASE("modular congruent ids rendezvous at every drift") {
  for (std::uint32_t n : {3u, 5u}) {
    std::uint64_t p = smallest_prime_geq(n);
    auto a = modular_baseline(ChannelSet(n), 1);
    auto b = modular_baseline(ChannelSet(n), 1 + p);
    std::uint64_t tau = *ProtocolDescriptor{ProtocolKind::modular_baseline, n}.period();
    for (ClockDrift d = 0; d < static_cast<ClockDrift>(tau); ++d)
      CHECK(first_rendezvous(*a, *b, d, tau).has_value());
  }
}

TEST_CASE("modular period divides P^2") {
  for (std::uint32_t n = 1; n <= 20; ++n) {
    std::uint64_t p = smallest_prime_geq(n);
    auto tau = detect_period(*modular_baseline(ChannelSet(n), 1), p * p);
    REQUIRE(tau.has_value());
    CHECK(p * p % *tau == 0);
  }
}

TEST_CASE("protocol maps depend only on (id, N)") {
  for (auto kind : {ProtocolKind::crseq, ProtocolKind::jumpstay,
                    ProtocolKind::modular_baseline}) {
    ProtocolDescriptor desc{kind, 7};
    auto a = desc.sequence(4);
    auto b = desc.sequence(4);
    for (SlotIndex t = 0; t < 300; ++t) CHECK(a->channel_at(t) == b->channel_at(t));
  }
}

TEST_CASE("emitted channels stay in [1, N] after remapping") {
  for (auto kind : {ProtocolKind::crseq, ProtocolKind::jumpstay,
                    ProtocolKind::modular_baseline}) {
    for (std::uint32_t n : {1u, 4u, 6u, 9u, 12u}) {
      ProtocolDescriptor desc{kind, n};
      for (NodeId id : {1ull, 2ull, 13ull}) {
        auto s = desc.sequence(id);
        for (SlotIndex t = 0; t < 3 * desc.period_bound(); ++t) {
          ChannelId c = s->channel_at(t);
          REQUIRE(c >= 1);
          REQUIRE(c <= n);
        }
      }
    }
  }
}

TEST_CASE("detected period equals the canonical one across nodes (prime N)") {
  for (auto kind : {ProtocolKind::crseq, ProtocolKind::jumpstay,
                    ProtocolKind::modular_baseline}) {
    for (std::uint32_t n : {3u, 5u, 7u}) {
      ProtocolDescriptor desc{kind, n};
      std::uint64_t canonical = *desc.period();
      for (NodeId id : {2ull, 3ull, 7ull})
        CHECK(detect_period(*desc.sequence(id), desc.period_bound()) == canonical);
    }
  }
}

TEST_CASE("detect_period basics") {
  CHECK(detect_period(*constant_sequence(ChannelSet(4), 2), 10) == 1);
  CHECK(detect_period(*jumpstay(ChannelSet(5), 1), 20) == 15);
  CHECK(detect_period(*crseq(ChannelSet(5), 1), 80) == 70);
  // true period beyond the cap
  auto s = table_sequence(ChannelSet(7), {1, 2, 3, 4, 5, 6, 7});
  CHECK(!detect_period(*s, 3));
  CHECK_THROWS_AS(detect_period(*random_ch(ChannelSet(3), 1), 5),
                  std::invalid_argument);
  CHECK_THROWS_AS(detect_period(*s, 0), std::invalid_argument);
}

TEST_CASE("detect_period agrees with the Z-function oracle") {
  for (auto kind : {ProtocolKind::crseq, ProtocolKind::jumpstay,
                    ProtocolKind::modular_baseline}) {
    for (std::uint32_t n : {2u, 4u, 5u, 6u, 10u}) {
      ProtocolDescriptor desc{kind, n};
      auto s = desc.sequence(1);
      CHECK(detect_period(*s, desc.period_bound()) ==
            oracle::z_detect_period(*s, desc.period_bound()));
    }
  }
}

TEST_CASE("descriptor rejects period queries for random CH") {
  ProtocolDescriptor desc{ProtocolKind::random_ch, 5};
  CHECK(!desc.period());
  CHECK_THROWS_AS(desc.period_bound(), std::invalid_argument);
}
