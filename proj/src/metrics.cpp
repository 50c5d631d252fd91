#include "rdv/metrics.hpp"

#include <cmath>
#include <stdexcept>

#include "rdv/rng.hpp"

namespace rdv {

namespace {

nlohmann::json ttr_json(const std::optional<std::uint64_t>& v) {
  if (v) return *v;
  return "inf";
}

}  // namespace

nlohmann::json MetricReport::to_json() const {
  nlohmann::json per;
  per = nlohmann::json::array();
  for (const auto& d : per_drift) {
    nlohmann::json row;
    row["drift"] = d.drift;
    row["ttr0"] = ttr_json(d.ttr);
    row["channels"] = d.channels;
    per.push_back(std::move(row));
  }
  nlohmann::json j;
  j["mttr"] = ttr_json(mttr);
  if (std::isnan(attr_ttr0)) {
    j["attr_ttr0"] = nullptr;
    j["attr_ttr1"] = nullptr;
  } else {
    j["attr_ttr0"] = attr_ttr0;
    j["attr_ttr1"] = attr_ttr0 + 1.0;
  }
  j["ci95"] = ci95;
  j["diversity_rate"] = diversity_rate.str();
  j["censored_fraction"] = censored_fraction;
  j["trials"] = trials;
  j["per_drift"] = std::move(per);
  return j;
}

std::optional<std::uint64_t> mttr(const ChSequence& a, const ChSequence& b,
                                  const std::vector<ClockDrift>& drift_domain,
                                  SlotIndex horizon, RandomPolicy policy) {
  if (drift_domain.empty()) throw std::invalid_argument("mttr: empty drift domain");
  std::uint64_t worst = 0;
  for (ClockDrift d : drift_domain) {
    auto t = first_rendezvous(a, b, d, horizon, policy);
    if (!t) return std::nullopt;  // +infinity
    worst = std::max(worst, *t);
  }
  return worst;
}

Fraction diversity_rate(const ChSequence& a, const ChSequence& b,
                        const std::vector<ClockDrift>& drift_domain,
                        SlotIndex horizon, RandomPolicy policy) {
  if (drift_domain.empty())
    throw std::invalid_argument("diversity_rate: empty drift domain");
  std::size_t least = a.channel_count() + 1;
  for (ClockDrift d : drift_domain) {
    auto rv = rendezvous_slots(a, b, d, horizon, policy);
    least = std::min(least, rv.channels.size());
    if (least == 0) break;
  }
  return Fraction(static_cast<long long>(least), a.channel_count());
}

AttrEstimate attr(const SequenceFactory& a, const SequenceFactory& b,
                  const std::vector<ClockDrift>& drift_domain, std::uint64_t trials,
                  SlotIndex horizon, std::uint64_t master_seed, RandomPolicy policy) {
  if (trials == 0) throw std::invalid_argument("attr: need at least one trial");
  if (drift_domain.empty()) throw std::invalid_argument("attr: empty drift domain");
  double sum = 0.0, sum_sq = 0.0;
  std::uint64_t used = 0, censored = 0;
  for (std::uint64_t trial = 0; trial < trials; ++trial) {
    std::uint64_t drift_word = stream_at(derive_seed(master_seed, trial, 0), 0);
    ClockDrift drift = drift_domain[uniform_below(drift_word, drift_domain.size())];
    SequencePtr sa = a(derive_seed(master_seed, trial, 1));
    SequencePtr sb = b(derive_seed(master_seed, trial, 2));
    auto t = first_rendezvous(*sa, *sb, drift, horizon, policy);
    if (!t) {
      ++censored;
      continue;
    }
    double v = static_cast<double>(*t);
    sum += v;
    sum_sq += v * v;
    ++used;
  }
  AttrEstimate est;
  est.trials = trials;
  est.censored = censored;
  est.censored_fraction = static_cast<double>(censored) / static_cast<double>(trials);
  if (used == 0) {
    est.mean_ttr0 = std::nan("");
    return est;
  }
  est.mean_ttr0 = sum / static_cast<double>(used);
  if (used > 1) {
    double var = (sum_sq - sum * sum / static_cast<double>(used)) /
                 static_cast<double>(used - 1);
    if (var < 0) var = 0;
    est.ci95 = 1.96 * std::sqrt(var / static_cast<double>(used));
  }
  return est;
}

double predict_attr_theorem1(double base_attr, std::uint32_t overlap_b,
                             std::uint32_t period_t, ChannelSet channels) {
  if (period_t == 0 || overlap_b > period_t)
    throw std::invalid_argument("predict_attr_theorem1: need 0 <= B <= T, T >= 1");
  double ratio = static_cast<double>(overlap_b) / static_cast<double>(period_t);
  return ratio * base_attr + (1.0 - ratio) * static_cast<double>(channels.n);
}

MetricReport deterministic_report(const ChSequence& a, const ChSequence& b,
                                  const std::vector<ClockDrift>& drift_domain,
                                  SlotIndex horizon, RandomPolicy policy) {
  if (drift_domain.empty())
    throw std::invalid_argument("deterministic_report: empty drift domain");
  MetricReport report;
  report.per_drift.reserve(drift_domain.size());
  double sum = 0.0;
  std::uint64_t worst = 0, censored = 0;
  std::size_t least_channels = a.channel_count() + 1;
  for (ClockDrift d : drift_domain) {
    auto rv = rendezvous_slots(a, b, d, horizon, policy);
    DriftMetrics dm;
    dm.drift = d;
    if (!rv.slots.empty()) {
      dm.ttr = rv.slots.front();
      sum += static_cast<double>(rv.slots.front());
      worst = std::max(worst, rv.slots.front());
    } else {
      ++censored;
    }
    least_channels = std::min(least_channels, rv.channels.size());
    dm.channels = std::move(rv.channels);
    report.per_drift.push_back(std::move(dm));
  }
  std::uint64_t used = drift_domain.size() - censored;
  report.mttr = censored == 0 ? std::optional<std::uint64_t>(worst) : std::nullopt;
  report.attr_ttr0 = used > 0 ? sum / static_cast<double>(used) : std::nan("");
  report.censored_fraction =
      static_cast<double>(censored) / static_cast<double>(drift_domain.size());
  report.diversity_rate =
      Fraction(static_cast<long long>(least_channels), a.channel_count());
  report.trials = drift_domain.size();
  return report;
}

std::vector<ClockDrift> drift_window(std::uint64_t count) {
  std::vector<ClockDrift> out;
  out.reserve(count);
  for (std::uint64_t k = 0; k < count; ++k) out.push_back(static_cast<ClockDrift>(k));
  return out;
}

}  // namespace rdv
