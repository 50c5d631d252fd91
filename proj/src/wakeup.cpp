#include "rdv/wakeup.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace rdv {

WakeUpSchedule::WakeUpSchedule(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
  if (bits_.empty()) throw std::invalid_argument("wake-up schedule: empty period");
  prefix_.resize(bits_.size() + 1, 0);
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    if (bits_[i] > 1) throw std::invalid_argument("wake-up schedule: bits must be 0/1");
    prefix_[i + 1] = prefix_[i] + bits_[i];
  }
}

WakeUpSchedule WakeUpSchedule::parse(std::string_view text) {
  std::vector<std::uint8_t> bits;
  bits.reserve(text.size());
  for (char c : text) {
    if (c == '0' || c == '1')
      bits.push_back(static_cast<std::uint8_t>(c - '0'));
    else if (!std::isspace(static_cast<unsigned char>(c)))
      throw std::invalid_argument("wake-up schedule: expected only 0/1 characters");
  }
  return WakeUpSchedule(std::move(bits));
}

Fraction WakeUpSchedule::duty_cycle() const {
  return Fraction(awake_count(), static_cast<long long>(length()));
}

std::uint64_t WakeUpSchedule::awake_prefix(std::uint64_t t) const {
  std::uint64_t full = t / length();
  return full * awake_count() + prefix_[t % length()];
}

std::string WakeUpSchedule::str() const {
  std::string s(bits_.size(), '0');
  for (std::size_t i = 0; i < bits_.size(); ++i)
    if (bits_[i]) s[i] = '1';
  return s;
}

WakeUpSchedule rotate(const WakeUpSchedule& x, std::int64_t k) {
  std::int64_t t_len = static_cast<std::int64_t>(x.length());
  std::int64_t shift = ((k % t_len) + t_len) % t_len;
  std::vector<std::uint8_t> out(x.length());
  for (std::size_t t = 0; t < x.length(); ++t)
    out[t] = x.bits()[(t + static_cast<std::size_t>(shift)) % x.length()];
  return WakeUpSchedule(std::move(out));
}

std::optional<OverlapCertificate> verify_discovery(const WakeUpSchedule& x,
                                                   const WakeUpSchedule& y) {
  std::uint64_t window = std::lcm(x.length(), y.length());
  OverlapCertificate cert;
  cert.witness.resize(window);
  cert.overlap.assign(window, 0);
  for (std::uint64_t k = 0; k < window; ++k) {
    bool found = false;
    for (std::uint64_t t = 0; t < window; ++t) {
      if (x.bit(t % x.length()) && y.bit((t + k) % y.length())) {
        if (!found) {
          cert.witness[k] = t;
          found = true;
        }
        ++cert.overlap[k];
      }
    }
    if (!found) return std::nullopt;
  }
  return cert;
}

namespace {

// Self-discovery is equivalent to the support's cyclic differences covering
// every residue: for every k there must be p, q awake with q - p = k (mod T).
bool support_covers(const std::vector<std::uint32_t>& support, std::uint32_t t_len) {
  std::vector<char> covered(t_len, 0);
  std::uint32_t remaining = t_len;
  for (std::uint32_t p : support) {
    for (std::uint32_t q : support) {
      std::uint32_t d = (q + t_len - p) % t_len;
      if (!covered[d]) {
        covered[d] = 1;
        if (--remaining == 0) return true;
      }
    }
  }
  return remaining == 0;
}

WakeUpSchedule from_support(const std::vector<std::uint32_t>& support,
                            std::uint32_t t_len) {
  std::vector<std::uint8_t> bits(t_len, 0);
  for (std::uint32_t p : support) bits[p] = 1;
  return WakeUpSchedule(std::move(bits));
}

// Exhaustive search in ascending bit-string order. Treating position 0 as
// the most significant bit makes numeric mask order equal string order, so
// Gosper's next-combination walk visits candidates lexicographically.
std::optional<WakeUpSchedule> exhaustive_search(std::uint32_t t_len, std::uint32_t weight) {
  std::uint32_t mask = (1u << weight) - 1;
  std::uint32_t limit = t_len == 32 ? 0xFFFFFFFFu : (1u << t_len) - 1;
  std::vector<std::uint32_t> support;
  while (true) {
    support.clear();
    for (std::uint32_t j = 0; j < t_len; ++j)
      if (mask & (1u << (t_len - 1 - j))) support.push_back(j);
    if (support_covers(support, t_len)) return from_support(support, t_len);
    // Gosper's hack: next larger integer with the same popcount.
    std::uint32_t c = mask & static_cast<std::uint32_t>(-static_cast<std::int32_t>(mask));
    std::uint32_t r = mask + c;
    std::uint32_t next = (((r ^ mask) >> 2) / c) | r;
    if (next > limit || r > limit) return std::nullopt;
    mask = next;
  }
}

// Deterministic greedy cover plus local repair for long periods where the
// exhaustive search is out of reach.
std::optional<WakeUpSchedule> greedy_search(std::uint32_t t_len, std::uint32_t weight) {
  std::set<std::uint32_t> support{0};
  auto newly_covered = [&](std::uint32_t cand) {
    std::vector<char> covered(t_len, 0);
    for (std::uint32_t p : support)
      for (std::uint32_t q : support) covered[(q + t_len - p) % t_len] = 1;
    std::uint32_t gain = 0;
    for (std::uint32_t p : support) {
      std::uint32_t d1 = (cand + t_len - p) % t_len;
      std::uint32_t d2 = (p + t_len - cand) % t_len;
      if (!covered[d1]) covered[d1] = 1, ++gain;
      if (d2 != d1 && !covered[d2]) covered[d2] = 1, ++gain;
    }
    return gain;
  };
  while (support.size() < weight) {
    std::uint32_t best = t_len, best_gain = 0;
    for (std::uint32_t cand = 0; cand < t_len; ++cand) {
      if (support.count(cand)) continue;
      std::uint32_t gain = newly_covered(cand);
      if (best == t_len || gain > best_gain) {
        best = cand;
        best_gain = gain;
      }
    }
    support.insert(best);
  }
  auto uncovered_count = [&](const std::set<std::uint32_t>& s) {
    std::vector<char> covered(t_len, 0);
    for (std::uint32_t p : s)
      for (std::uint32_t q : s) covered[(q + t_len - p) % t_len] = 1;
    return static_cast<std::uint32_t>(std::count(covered.begin(), covered.end(), 0));
  };
  std::uint32_t current = uncovered_count(support);
  for (int iter = 0; iter < 256 && current > 0; ++iter) {
    std::uint32_t best_u = current;
    std::uint32_t best_rm = t_len, best_add = t_len;
    for (std::uint32_t rm : support) {
      for (std::uint32_t add = 0; add < t_len; ++add) {
        if (support.count(add)) continue;
        std::set<std::uint32_t> trial = support;
        trial.erase(rm);
        trial.insert(add);
        std::uint32_t u = uncovered_count(trial);
        if (u < best_u) {
          best_u = u;
          best_rm = rm;
          best_add = add;
        }
      }
    }
    if (best_rm == t_len) break;  // no improving move
    support.erase(best_rm);
    support.insert(best_add);
    current = best_u;
  }
  if (current > 0) return std::nullopt;
  return from_support({support.begin(), support.end()}, t_len);
}

}  // namespace

WakeUpSchedule generate_schedule(std::uint32_t period, Fraction target_duty) {
  if (period == 0) throw std::invalid_argument("generate_schedule: period must be >= 1");
  if (target_duty.num <= 0 || Fraction(1, 1) < target_duty)
    throw std::invalid_argument("generate_schedule: duty cycle must be in (0, 1]");
  long long weight_num = static_cast<long long>(period) * target_duty.num;
  if (weight_num % target_duty.den != 0)
    throw std::invalid_argument("generate_schedule: period * duty is not an integer");
  std::uint32_t weight = static_cast<std::uint32_t>(weight_num / target_duty.den);

  std::optional<WakeUpSchedule> found;
  if (period <= 16) {
    found = exhaustive_search(period, weight);
  } else if (2 * weight > period) {
    // Any schedule this heavy self-discovers (two awake windows with
    // 2A > T slots must intersect); the packed form is also the
    // lexicographically smallest candidate.
    std::vector<std::uint8_t> bits(period, 0);
    for (std::uint32_t i = period - weight; i < period; ++i) bits[i] = 1;
    found = WakeUpSchedule(std::move(bits));
  } else {
    found = greedy_search(period, weight);
  }
  if (!found)
    throw InfeasibleScheduleError("infeasible: no self-discovering schedule of period " +
                                  std::to_string(period) + " with " +
                                  std::to_string(weight) + " awake slots" +
                                  (period > 16 ? " (heuristic search exhausted)" : ""));
  return *found;
}

}  // namespace rdv
