#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rdv/core.hpp"
#include "rdv/fraction.hpp"
#include "rdv/interleave.hpp"
#include "rdv/metrics.hpp"
#include "rdv/protocols.hpp"
#include "rdv/pumodel.hpp"
#include "rdv/wakeup.hpp"

namespace rdv {

// Pairwise rendezvous experiments under primary-user traffic. Every random
// quantity is drawn from a stream derived from (master seed, cell, pair,
// trial, purpose), so a run is bit-reproducible regardless of thread count
// or scheduling order. Pairs are independent: the model is pairwise
// rendezvous, with no contention between secondary pairs.

/// One experiment configuration: a protocol (optionally interleaved with a
/// schedule), a PU traffic setting, and Monte Carlo sizes.
struct CellConfig {
  ProtocolKind base = ProtocolKind::crseq;
  std::uint32_t n_channels = 11;
  std::optional<WakeUpSchedule> schedule;  // absent = pure base protocol (duty cycle 1)
  PuTrafficConfig pu;
  std::uint32_t pairs = 20;
  std::uint64_t trials_per_pair = 2000;
  SlotIndex horizon = 0;  // 0 = auto: 5 * joint period
  std::uint64_t master_seed = 1;
};

/// Resolved cell: padding applied, period detected, horizon fixed.
/// Construction throws InfeasiblePaddingError when the padding scheme has
/// no feasible channel count for (base, schedule).
struct CellRuntime {
  explicit CellRuntime(CellConfig cfg);

  CellConfig cfg;
  PaddedChannelSet padded;      // n_padded == n for pure-base cells
  std::uint64_t tau = 0;        // base period over the (padded) channel set
  std::uint64_t joint_period = 0;  // drift domain size: tau*T hybrid, tau pure
  std::uint64_t ttr_bound = 0;     // PU-free worst-case bound (tau*T or tau)
  SlotIndex horizon = 0;

  SequencePtr node_sequence(NodeId id, std::uint64_t seed) const;
};

struct PairTrialOutcome {
  std::optional<SlotIndex> ttr;  // first PU-free rendezvous slot, absent = censored
  ClockDrift drift = 0;
};

/// One Monte Carlo trial for one pair: draw a drift uniformly from the
/// joint-period window, realize both sequences and the PU traffic, and scan
/// for the first slot where both nodes sit on the same PU-free channel.
PairTrialOutcome run_pair(const CellRuntime& cell, std::uint32_t pair_id,
                          std::uint64_t trial_id);

/// First slot t < horizon with equal channels and available(channel, t);
/// slots (and the availability clock) follow the left-behind node.
std::optional<SlotIndex> first_available_rendezvous(
    const ChSequence& a, const ChSequence& b, ClockDrift drift,
    const std::function<bool(ChannelId, SlotIndex)>& available, SlotIndex horizon);

/// Sweep grid, defaults mirroring the desk-scale experiment: N=11, 20 node
/// pairs, duty cycles in fourteenths, PU intensities 25% and 50%.
struct ExperimentConfig {
  ProtocolKind base = ProtocolKind::crseq;
  std::uint32_t n_channels = 11;
  std::uint32_t pairs = 20;
  std::uint32_t schedule_period = 14;
  std::vector<Fraction> duty_cycles = {{5, 14}, {7, 14}, {9, 14}, {13, 14}, {1, 1}};
  std::vector<double> pu_intensities = {0.25, 0.50};
  std::uint32_t pu_transmitters = 5;
  std::uint32_t pu_busy_slots = 5;
  /// Explicit idle mean l. When > 0 it replaces the intensity axis with one
  /// traffic setting (busy b, idle mean l); otherwise l is solved per
  /// intensity. The two parameterizations are mutually exclusive.
  double pu_idle_mean_slots = 0.0;
  std::uint64_t trials_per_pair = 100;
  SlotIndex horizon = 0;              // 0 = auto per cell
  std::uint64_t master_seed = 1;
  std::uint32_t diversity_trials_per_pair = 10;  // full-window scans per pair
  std::uint32_t threads = 0;          // 0 = hardware concurrency

  void validate() const;
  /// Canonical key/value dump; also the config-hash input.
  std::string to_text() const;
};

struct CellResult {
  Fraction duty;
  double pu_intensity = 0.0;
  double pu_idle_mean = 0.0;
  bool skipped = false;
  std::string skip_reason;
  std::string schedule_bits;
  std::uint32_t n_padded = 0;
  std::uint64_t tau = 0;
  std::uint64_t ttr_bound = 0;
  std::uint64_t trials = 0;
  std::uint64_t censored = 0;
  double attr_ttr0 = 0.0;
  double attr_ci95 = 0.0;
  std::optional<std::uint64_t> mttr_observed;  // max over uncensored trials
  double mttr_ci_lo = 0.0, mttr_ci_hi = 0.0;   // bootstrap percentile CI
  Fraction diversity;                          // min over sampled window scans
  double div_ci_lo = 0.0, div_ci_hi = 0.0;
};

struct ExperimentResult {
  ExperimentConfig cfg;
  std::string config_hash;  // 16 hex chars
  std::vector<CellResult> cells;

  std::string to_csv() const;
  nlohmann::json to_json() const;
};

/// Runs the full duty-cycle x intensity grid. Cells whose schedule or
/// padding is infeasible are marked skipped, never silently dropped.
ExperimentResult sweep(const ExperimentConfig& cfg);

}  // namespace rdv
