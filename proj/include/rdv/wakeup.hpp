#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rdv/core.hpp"
#include "rdv/fraction.hpp"

namespace rdv {

/// Periodic binary wake-up schedule: 1 = awake, 0 = asleep.
class WakeUpSchedule {
 public:
  explicit WakeUpSchedule(std::vector<std::uint8_t> bits);

  /// Parses a line of '0'/'1' characters, e.g. "11101000".
  static WakeUpSchedule parse(std::string_view text);

  std::size_t length() const { return bits_.size(); }          // T
  std::uint32_t awake_count() const { return prefix_.back(); } // A
  bool bit(std::size_t i) const { return bits_[i] != 0; }
  const std::vector<std::uint8_t>& bits() const { return bits_; }

  /// A/T as an exact fraction.
  Fraction duty_cycle() const;

  /// Number of awake slots in [0, t) for arbitrary t (full periods count A
  /// each). This is the base-sequence consumption counter of the
  /// interleaving algorithm.
  std::uint64_t awake_prefix(std::uint64_t t) const;

  std::string str() const;

  friend bool operator==(const WakeUpSchedule& a, const WakeUpSchedule& b) {
    return a.bits_ == b.bits_;
  }

 private:
  std::vector<std::uint8_t> bits_;
  std::vector<std::uint32_t> prefix_;  // prefix_[i] = ones in [0, i)
};

/// Cyclic rotation: result[t] = x[(t + k) mod T]; k may be negative.
WakeUpSchedule rotate(const WakeUpSchedule& x, std::int64_t k);

/// Witness of the neighbor-discovery property: for every rotation k, a slot
/// where both schedules are awake, plus the overlap count B(k).
struct OverlapCertificate {
  std::vector<SlotIndex> witness;       // witness[k], k in [0, lcm(Tx, Ty))
  std::vector<std::uint32_t> overlap;   // B(k) over one lcm window
};

/// Checks the discovery condition: for every k there is a t with
/// x[t mod Tx] = y[(t + k) mod Ty] = 1. Returns the certificate when it
/// holds for all rotations, absent otherwise.
std::optional<OverlapCertificate> verify_discovery(const WakeUpSchedule& x,
                                                   const WakeUpSchedule& y);

struct InfeasibleScheduleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Deterministic schedule of length `period` with exactly period*duty ones
/// that passes verify_discovery against itself. Exhaustive search for
/// T <= 16 (lexicographically smallest passing bit string wins),
/// greedy-plus-repair beyond. Throws InfeasibleScheduleError when no
/// schedule with that exact weight satisfies the property (never silently
/// relaxed).
WakeUpSchedule generate_schedule(std::uint32_t period, Fraction target_duty);

}  // namespace rdv
