#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <vector>

#include <json.hpp>

#include "rdv/core.hpp"
#include "rdv/fraction.hpp"

namespace rdv {

// TTR convention: ttr0 is the 0-based first-rendezvous slot (rendezvous at
// slot 0 -> TTR 0). The "average TTR of random CH is N" statement counts
// 1-based, so reports carry both ttr0 and ttr1 = ttr0 + 1.

struct DriftMetrics {
  ClockDrift drift = 0;
  std::optional<SlotIndex> ttr;   // absent = no rendezvous within horizon
  std::set<ChannelId> channels;
};

struct MetricReport {
  std::optional<std::uint64_t> mttr;  // absent = +infinity / censored
  double attr_ttr0 = 0.0;
  double ci95 = 0.0;
  Fraction diversity_rate;
  double censored_fraction = 0.0;
  std::uint64_t trials = 0;
  std::vector<DriftMetrics> per_drift;

  nlohmann::json to_json() const;
};

/// max over drifts of the first rendezvous slot; absent (+inf) as soon as
/// one drift has no rendezvous within the horizon. Rejects an empty domain.
std::optional<std::uint64_t> mttr(const ChSequence& a, const ChSequence& b,
                                  const std::vector<ClockDrift>& drift_domain,
                                  SlotIndex horizon,
                                  RandomPolicy policy = RandomPolicy::uniform);

/// min over drifts of |rendezvous channels| / N.
Fraction diversity_rate(const ChSequence& a, const ChSequence& b,
                        const std::vector<ClockDrift>& drift_domain,
                        SlotIndex horizon,
                        RandomPolicy policy = RandomPolicy::uniform);

/// Builds a fresh sequence per trial; the seed is the trial's own stream.
using SequenceFactory = std::function<SequencePtr(std::uint64_t seed)>;

struct AttrEstimate {
  double mean_ttr0 = 0.0;          // over uncensored trials
  double ci95 = 0.0;               // normal-approximation half width
  double censored_fraction = 0.0;  // trials with no rendezvous within horizon
  std::uint64_t trials = 0;
  std::uint64_t censored = 0;
  double mean_ttr1() const { return mean_ttr0 + 1.0; }
};

/// Monte Carlo ATTR: each trial draws a drift uniformly from the domain and
/// fresh sequence seeds, then scans for the first rendezvous. Censored
/// trials are excluded from the mean and reported as a fraction, never
/// imputed. Reproducible for a fixed master seed, independently of
/// scheduling order.
AttrEstimate attr(const SequenceFactory& a, const SequenceFactory& b,
                  const std::vector<ClockDrift>& drift_domain,
                  std::uint64_t trials, SlotIndex horizon,
                  std::uint64_t master_seed,
                  RandomPolicy policy = RandomPolicy::uniform);

/// ATTR mixture predicted for a hybrid with overlap count B out of schedule
/// period T: (B/T) * base_attr + (1 - B/T) * N. Pass base_attr in the same
/// TTR convention you want back (acceptance uses ttr1 against the paper's N).
double predict_attr_theorem1(double base_attr, std::uint32_t overlap_b,
                             std::uint32_t period_t, ChannelSet channels);

/// Exhaustive per-drift report for a pair of sequences: per-drift TTR and
/// channel sets, aggregate MTTR / mean TTR / diversity floor. ci95 is 0
/// (the enumeration is exact).
MetricReport deterministic_report(const ChSequence& a, const ChSequence& b,
                                  const std::vector<ClockDrift>& drift_domain,
                                  SlotIndex horizon,
                                  RandomPolicy policy = RandomPolicy::uniform);

/// The drift window [0, count).
std::vector<ClockDrift> drift_window(std::uint64_t count);

}  // namespace rdv
