#include "rdv/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "rdv/rng.hpp"

namespace rdv {

namespace {

constexpr std::uint64_t kDriftTag = 0;
constexpr std::uint64_t kSeqATag = 1;
constexpr std::uint64_t kSeqBTag = 2;
constexpr std::uint64_t kPuTag = 3;  // kept after the sequence tags so PU settings
                                     // never perturb drift or sequence draws

std::string fmt_double(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

// Static-partition parallel loop; results must be written to disjoint slots
// so the outcome is independent of thread count.
void parallel_for(std::uint64_t total, std::uint32_t threads,
                  const std::function<void(std::uint64_t)>& body) {
  if (threads == 0) threads = std::thread::hardware_concurrency();
  if (threads <= 1 || total < 2 * threads) {
    for (std::uint64_t i = 0; i < total; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::uint32_t w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      for (std::uint64_t i = w; i < total; i += threads) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

struct Percentiles {
  double lo = 0.0, hi = 0.0;
};

// Uncertainty interval for an extreme statistic (max/min). The bootstrap is
// inconsistent for sample extremes (it collapses onto the observed value),
// so this subsamples over the independent pair blocks instead: the spread
// of per-pair statistics is the spread a rerun would see.
Percentiles subsample_ci(const std::vector<std::uint64_t>& block_stats) {
  if (block_stats.empty()) return {};
  std::vector<std::uint64_t> sorted = block_stats;
  std::sort(sorted.begin(), sorted.end());
  auto at = [&](double q) {
    return static_cast<double>(
        sorted[static_cast<std::size_t>(std::llround(q * (sorted.size() - 1)))]);
  };
  return {at(0.025), at(0.975)};
}

}  // namespace

CellRuntime::CellRuntime(CellConfig c) : cfg(std::move(c)) {
  ChannelSet channels(cfg.n_channels);
  if (cfg.pairs == 0 || cfg.trials_per_pair == 0)
    throw std::invalid_argument("cell: need at least one pair and one trial");
  cfg.pu.validate();
  if (cfg.schedule) {
    if (cfg.base == ProtocolKind::random_ch)
      throw std::invalid_argument("cell: interleaving needs a periodic base protocol");
    padded = pad_channels(channels, cfg.base, *cfg.schedule);
    tau = padded.base_period;
    joint_period = tau * cfg.schedule->length();
    ttr_bound = joint_period;
  } else if (cfg.base != ProtocolKind::random_ch) {
    ProtocolDescriptor desc{cfg.base, cfg.n_channels};
    tau = *desc.period();
    padded = PaddedChannelSet{cfg.n_channels, cfg.n_channels, tau};
    joint_period = tau;
    ttr_bound = tau;
  } else {
    // Pure random CH: i.i.d. slots make every drift equivalent.
    padded = PaddedChannelSet{cfg.n_channels, cfg.n_channels, 0};
    tau = 0;
    joint_period = 1;
    ttr_bound = 0;
  }
  horizon = cfg.horizon != 0 ? cfg.horizon
                             : std::max<SlotIndex>(5 * joint_period, 20000);
}

SequencePtr CellRuntime::node_sequence(NodeId id, std::uint64_t seed) const {
  if (cfg.schedule) {
    HybridProtocol h{cfg.base, id, *cfg.schedule, padded, seed, RandomPolicy::uniform};
    return hybrid_sequence(h);
  }
  ProtocolDescriptor desc{cfg.base, cfg.n_channels};
  return desc.sequence(id, seed);
}

std::optional<SlotIndex> first_available_rendezvous(
    const ChSequence& a, const ChSequence& b, ClockDrift drift,
    const std::function<bool(ChannelId, SlotIndex)>& available, SlotIndex horizon) {
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
  for (SlotIndex t = 0; t < horizon; ++t) {
    ChannelId c = behind->channel_at(t);
    if (c == ahead->channel_at(t + offset) && available(c, t)) return t;
  }
  return std::nullopt;
}

PairTrialOutcome run_pair(const CellRuntime& cell, std::uint32_t pair_id,
                          std::uint64_t trial_id) {
  std::uint64_t s = derive_seed(cell.cfg.master_seed, pair_id, trial_id);
  ClockDrift drift = static_cast<ClockDrift>(
      uniform_below(stream_at(derive_seed(s, kDriftTag), 0), cell.joint_period));
  SequencePtr a = cell.node_sequence(2 * pair_id + 1, derive_seed(s, kSeqATag));
  SequencePtr b = cell.node_sequence(2 * pair_id + 2, derive_seed(s, kSeqBTag));
  PuEnvironment env(cell.cfg.pu, ChannelSet(cell.cfg.n_channels),
                    derive_seed(s, kPuTag));
  auto ttr = first_available_rendezvous(
      *a, *b, drift, [&](ChannelId c, SlotIndex t) { return env.available(c, t); },
      cell.horizon);
  return PairTrialOutcome{ttr, drift};
}

void ExperimentConfig::validate() const {
  ChannelSet channels(n_channels);
  if (pairs == 0) throw std::invalid_argument("sweep: need at least one pair");
  if (trials_per_pair == 0) throw std::invalid_argument("sweep: need trials");
  if (schedule_period == 0) throw std::invalid_argument("sweep: schedule period >= 1");
  if (duty_cycles.empty()) throw std::invalid_argument("sweep: empty duty cycle list");
  if (pu_intensities.empty()) throw std::invalid_argument("sweep: empty intensity list");
  if (pu_transmitters >= n_channels)
    throw std::invalid_argument("sweep: transmitters must be < N");
  if (pu_idle_mean_slots < 0.0)
    throw std::invalid_argument("sweep: idle mean must be positive");
  for (double x : pu_intensities)
    if (x < 0.0 || x >= 1.0)
      throw std::invalid_argument("sweep: PU intensity must be in [0, 1)");
  for (const Fraction& d : duty_cycles)
    if (d.num <= 0 || Fraction(1, 1) < d)
      throw std::invalid_argument("sweep: duty cycles must be in (0, 1]");
  if (diversity_trials_per_pair > trials_per_pair)
    throw std::invalid_argument("sweep: diversity trials exceed trials per pair");
}

std::string ExperimentConfig::to_text() const {
  // Canonical resolved configuration; hashed into result file names.
  // Thread count is excluded: it must not change any result.
  std::ostringstream out;
  out << "base = " << protocol_name(base) << "\n";
  out << "n_channels = " << n_channels << "\n";
  out << "pairs = " << pairs << "\n";
  out << "schedule_period = " << schedule_period << "\n";
  out << "duty_cycles = ";
  for (std::size_t i = 0; i < duty_cycles.size(); ++i)
    out << (i ? "," : "") << duty_cycles[i].str();
  out << "\n";
  out << "pu_intensities = ";
  for (std::size_t i = 0; i < pu_intensities.size(); ++i)
    out << (i ? "," : "") << fmt_double(pu_intensities[i], 4);
  out << "\n";
  out << "pu_transmitters = " << pu_transmitters << "\n";
  out << "pu_busy_slots = " << pu_busy_slots << "\n";
  out << "pu_idle_mean_slots = " << fmt_double(pu_idle_mean_slots, 6) << "\n";
  out << "trials_per_pair = " << trials_per_pair << "\n";
  out << "horizon = " << horizon << "\n";
  out << "master_seed = " << master_seed << "\n";
  out << "diversity_trials_per_pair = " << diversity_trials_per_pair << "\n";
  return out.str();
}

namespace {

// Distinct rendezvous channels seen over one joint-period window, PU applied.
std::uint32_t window_channel_count(const CellRuntime& cell, std::uint32_t pair_id,
                                   std::uint64_t trial_id) {
  std::uint64_t s = derive_seed(cell.cfg.master_seed, pair_id, trial_id);
  ClockDrift drift = static_cast<ClockDrift>(
      uniform_below(stream_at(derive_seed(s, kDriftTag), 0), cell.joint_period));
  SequencePtr a = cell.node_sequence(2 * pair_id + 1, derive_seed(s, kSeqATag));
  SequencePtr b = cell.node_sequence(2 * pair_id + 2, derive_seed(s, kSeqBTag));
  PuEnvironment env(cell.cfg.pu, ChannelSet(cell.cfg.n_channels),
                    derive_seed(s, kPuTag));
  SlotIndex window = std::min<SlotIndex>(
      cell.horizon, cell.joint_period > 1 ? cell.joint_period : cell.horizon);
  std::vector<char> seen(cell.cfg.n_channels + 1, 0);
  std::uint32_t count = 0;
  for (SlotIndex t = 0; t < window; ++t) {
    ChannelId c = a->channel_at(t);
    if (c == b->channel_at(t + static_cast<std::uint64_t>(drift)) &&
        env.available(c, t) && !seen[c]) {
      seen[c] = 1;
      ++count;
    }
  }
  return count;
}

CellResult run_cell(const ExperimentConfig& cfg, const Fraction& duty,
                    double intensity, const PuTrafficConfig& pu,
                    std::uint64_t cell_seed) {
  CellResult row;
  row.duty = duty;
  row.pu_intensity = intensity;
  row.pu_idle_mean = pu.transmitters ? pu.idle_mean_slots : 0.0;

  CellConfig cell_cfg;
  cell_cfg.base = cfg.base;
  cell_cfg.n_channels = cfg.n_channels;
  cell_cfg.pu = pu;
  cell_cfg.pairs = cfg.pairs;
  cell_cfg.trials_per_pair = cfg.trials_per_pair;
  cell_cfg.horizon = cfg.horizon;
  cell_cfg.master_seed = cell_seed;
  try {
    if (duty == Fraction(1, 1)) {
      // Duty cycle 1 is exactly the original CH protocol: no schedule, no
      // padding, no random slots.
      cell_cfg.schedule = std::nullopt;
    } else {
      cell_cfg.schedule = generate_schedule(cfg.schedule_period, duty);
    }
    row.schedule_bits = cell_cfg.schedule ? cell_cfg.schedule->str()
                                          : std::string(cfg.schedule_period, '1');
    CellRuntime cell(cell_cfg);
    row.n_padded = cell.padded.n_padded;
    row.tau = cell.tau;
    row.ttr_bound = cell.ttr_bound;

    std::uint64_t total = static_cast<std::uint64_t>(cfg.pairs) * cfg.trials_per_pair;
    std::vector<PairTrialOutcome> outcomes(total);
    parallel_for(total, cfg.threads, [&](std::uint64_t i) {
      std::uint32_t pair_id = static_cast<std::uint32_t>(i / cfg.trials_per_pair);
      std::uint64_t trial_id = i % cfg.trials_per_pair;
      outcomes[i] = run_pair(cell, pair_id, trial_id);
    });

    std::uint64_t div_total =
        static_cast<std::uint64_t>(cfg.pairs) * cfg.diversity_trials_per_pair;
    std::vector<std::uint32_t> div_counts(div_total);
    parallel_for(div_total, cfg.threads, [&](std::uint64_t i) {
      std::uint32_t pair_id =
          static_cast<std::uint32_t>(i / cfg.diversity_trials_per_pair);
      std::uint64_t trial_id = i % cfg.diversity_trials_per_pair;
      div_counts[i] = window_channel_count(cell, pair_id, trial_id);
    });

    std::vector<std::uint64_t> ttrs;
    ttrs.reserve(total);
    std::vector<std::uint64_t> pair_max(cfg.pairs, 0);
    std::vector<char> pair_has(cfg.pairs, 0);
    for (std::uint64_t i = 0; i < total; ++i) {
      const auto& o = outcomes[i];
      if (o.ttr) {
        ttrs.push_back(*o.ttr);
        std::uint32_t pair_id = static_cast<std::uint32_t>(i / cfg.trials_per_pair);
        pair_max[pair_id] = std::max(pair_max[pair_id], *o.ttr);
        pair_has[pair_id] = 1;
      } else {
        ++row.censored;
      }
    }
    row.trials = total;
    if (!ttrs.empty()) {
      double sum = 0.0;
      for (std::uint64_t v : ttrs) sum += static_cast<double>(v);
      row.attr_ttr0 = sum / static_cast<double>(ttrs.size());
      if (ttrs.size() > 1) {
        double ss = 0.0;
        for (std::uint64_t v : ttrs) {
          double d = static_cast<double>(v) - row.attr_ttr0;
          ss += d * d;
        }
        row.attr_ci95 = 1.96 * std::sqrt(ss / static_cast<double>(ttrs.size() - 1) /
                                         static_cast<double>(ttrs.size()));
      }
      row.mttr_observed = *std::max_element(ttrs.begin(), ttrs.end());
      std::vector<std::uint64_t> blocks;
      for (std::uint32_t p = 0; p < cfg.pairs; ++p)
        if (pair_has[p]) blocks.push_back(pair_max[p]);
      auto ci = subsample_ci(blocks);
      row.mttr_ci_lo = ci.lo;
      row.mttr_ci_hi = ci.hi;
    } else {
      row.attr_ttr0 = std::nan("");
    }
    if (!div_counts.empty()) {
      std::uint64_t least = div_counts[0];
      std::vector<std::uint64_t> div_blocks(cfg.pairs, cfg.n_channels + 1);
      for (std::uint64_t i = 0; i < div_total; ++i) {
        std::uint32_t pair_id =
            static_cast<std::uint32_t>(i / cfg.diversity_trials_per_pair);
        least = std::min<std::uint64_t>(least, div_counts[i]);
        div_blocks[pair_id] = std::min<std::uint64_t>(div_blocks[pair_id], div_counts[i]);
      }
      row.diversity = Fraction(static_cast<long long>(least), cfg.n_channels);
      auto ci = subsample_ci(div_blocks);
      row.div_ci_lo = ci.lo / static_cast<double>(cfg.n_channels);
      row.div_ci_hi = ci.hi / static_cast<double>(cfg.n_channels);
    }
  } catch (const InfeasibleScheduleError& e) {
    row.skipped = true;
    row.skip_reason = e.what();
  } catch (const InfeasiblePaddingError& e) {
    row.skipped = true;
    row.skip_reason = e.what();
  }
  return row;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

ExperimentResult sweep(const ExperimentConfig& cfg) {
  cfg.validate();
  ExperimentResult result;
  result.cfg = cfg;
  char hash[17];
  std::snprintf(hash, sizeof(hash), "%016llx",
                static_cast<unsigned long long>(fnv1a64(cfg.to_text())));
  result.config_hash = hash;

  struct TrafficPoint {
    double label;
    PuTrafficConfig pu;
  };
  std::vector<TrafficPoint> traffic;
  if (cfg.pu_idle_mean_slots > 0.0) {
    PuTrafficConfig pu;
    pu.transmitters = cfg.pu_transmitters;
    pu.busy_slots = cfg.pu_busy_slots;
    pu.idle_mean_slots = cfg.pu_idle_mean_slots;
    traffic.push_back({pu.discretized_intensity(), pu});
  } else {
    for (double intensity : cfg.pu_intensities) {
      PuTrafficConfig pu;
      pu.busy_slots = cfg.pu_busy_slots;
      if (intensity > 0.0) {
        pu.transmitters = cfg.pu_transmitters;
        pu.idle_mean_slots =
            PuTrafficConfig::idle_mean_for_intensity(cfg.pu_busy_slots, intensity);
      } else {
        pu.transmitters = 0;
      }
      traffic.push_back({intensity, pu});
    }
  }

  std::uint64_t cell_index = 0;
  for (const TrafficPoint& point : traffic) {
    for (const Fraction& duty : cfg.duty_cycles) {
      std::uint64_t cell_seed = derive_seed(cfg.master_seed, 0xCE11, cell_index);
      result.cells.push_back(run_cell(cfg, duty, point.label, point.pu, cell_seed));
      ++cell_index;
    }
  }
  return result;
}

std::string ExperimentResult::to_csv() const {
  std::ostringstream out;
  out << "base,n,duty,pu_intensity,pu_busy_slots,pu_idle_mean,schedule,n_padded,tau,"
         "ttr_bound,trials,censored,censored_fraction,attr_ttr0,attr_ttr1,attr_ci95,"
         "mttr_observed,mttr_ci_lo,mttr_ci_hi,diversity,diversity_exact,div_ci_lo,"
         "div_ci_hi,skipped,skip_reason\n";
  for (const CellResult& c : cells) {
    out << protocol_name(cfg.base) << "," << cfg.n_channels << "," << c.duty.str()
        << "," << fmt_double(c.pu_intensity, 4) << "," << cfg.pu_busy_slots << ",";
    if (c.pu_intensity > 0.0) out << fmt_double(c.pu_idle_mean, 6);
    out << "," << c.schedule_bits << ",";
    if (c.skipped) {
      out << ",,,,,,,,,,,,,,,,1," << csv_escape(c.skip_reason) << "\n";
      continue;
    }
    double censored_fraction =
        c.trials ? static_cast<double>(c.censored) / static_cast<double>(c.trials) : 0.0;
    out << c.n_padded << "," << c.tau << "," << c.ttr_bound << "," << c.trials << ","
        << c.censored << "," << fmt_double(censored_fraction, 6) << ","
        << fmt_double(c.attr_ttr0, 6) << "," << fmt_double(c.attr_ttr0 + 1.0, 6) << ","
        << fmt_double(c.attr_ci95, 6) << ",";
    if (c.mttr_observed)
      out << *c.mttr_observed;
    else
      out << "inf";
    out << "," << fmt_double(c.mttr_ci_lo, 1) << "," << fmt_double(c.mttr_ci_hi, 1)
        << "," << fmt_double(c.diversity.value(), 6) << "," << c.diversity.str() << ","
        << fmt_double(c.div_ci_lo, 6) << "," << fmt_double(c.div_ci_hi, 6) << ",0,\n";
  }
  return out.str();
}

nlohmann::json ExperimentResult::to_json() const {
  nlohmann::json j;
  j["config_hash"] = config_hash;
  j["config"] = cfg.to_text();
  j["slot_ms"] = 10;  // slot duration, metadata only
  nlohmann::json cells_json = nlohmann::json::array();
  for (const CellResult& c : cells) {
    nlohmann::json row;
    row["duty"] = c.duty.str();
    row["pu_intensity"] = c.pu_intensity;
    row["pu_idle_mean"] = c.pu_idle_mean;
    row["skipped"] = c.skipped;
    if (c.skipped) {
      row["skip_reason"] = c.skip_reason;
      cells_json.push_back(std::move(row));
      continue;
    }
    row["schedule"] = c.schedule_bits;
    row["n_padded"] = c.n_padded;
    row["tau"] = c.tau;
    row["ttr_bound"] = c.ttr_bound;
    row["trials"] = c.trials;
    row["censored"] = c.censored;
    row["attr_ttr0"] = c.attr_ttr0;
    row["attr_ttr1"] = c.attr_ttr0 + 1.0;
    row["attr_ci95"] = c.attr_ci95;
    if (c.mttr_observed)
      row["mttr_observed"] = *c.mttr_observed;
    else
      row["mttr_observed"] = "inf";
    row["mttr_ci"] = {c.mttr_ci_lo, c.mttr_ci_hi};
    row["diversity"] = c.diversity.value();
    row["diversity_exact"] = c.diversity.str();
    row["div_ci"] = {c.div_ci_lo, c.div_ci_hi};
    cells_json.push_back(std::move(row));
  }
  j["cells"] = std::move(cells_json);
  return j;
}

}  // namespace rdv
