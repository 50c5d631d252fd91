// Command-line front end: generate sequences and schedules, verify
// properties, compute rendezvous metrics, and run PU-traffic sweeps.
//
// Exit codes: 0 success, 1 property-check failure or internal error,
// 2 configuration error, 3 infeasible schedule or padding.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <map>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "rdv/core.hpp"
#include "rdv/interleave.hpp"
#include "rdv/metrics.hpp"
#include "rdv/protocols.hpp"
#include "rdv/pumodel.hpp"
#include "rdv/rng.hpp"
#include "rdv/simulator.hpp"
#include "rdv/wakeup.hpp"

namespace {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

rdv::ProtocolKind parse_protocol(const std::string& name) {
  auto kind = rdv::protocol_from_name(name);
  if (!kind)
    throw ConfigError("unknown protocol '" + name +
                      "' (expected random|crseq|jumpstay|modular)");
  return *kind;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open output file '" + path + "'");
  out << text;
}

// Every run prints its resolved configuration first (to stderr so artifact
// streams on stdout stay clean).
void print_config(const std::string& command,
                  const std::vector<std::pair<std::string, std::string>>& kv) {
  std::cerr << "# command = " << command << "\n";
  for (const auto& [k, v] : kv) std::cerr << "# " << k << " = " << v << "\n";
}

// Flat key/value experiment config ("key = value", '#' comments, arrays in
// brackets). Documented keys: base, n, pairs, period, duty, trials, horizon,
// seed, div-trials, threads, pu.transmitters, pu.busy_slots, and either
// pu.intensity or pu.idle_mean_slots (mutually exclusive).
std::map<std::string, std::vector<std::string>> parse_config_file(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  auto trim = [](std::string s) {
    auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
    while (!s.empty() && is_space(s.front())) s.erase(s.begin());
    while (!s.empty() && is_space(s.back())) s.pop_back();
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"')
      s = s.substr(1, s.size() - 2);
    return s;
  };
  std::map<std::string, std::vector<std::string>> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::string text = trim(line);
    if (text.empty()) continue;
    auto eq = text.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(line_no) + ": expected key = value");
    std::string key = trim(text.substr(0, eq));
    std::string value = trim(text.substr(eq + 1));
    std::vector<std::string> values;
    if (!value.empty() && value.front() == '[') {
      if (value.back() != ']')
        throw ConfigError(path + ":" + std::to_string(line_no) + ": unterminated array");
      std::string inner = value.substr(1, value.size() - 2);
      std::string item;
      std::istringstream items(inner);
      while (std::getline(items, item, ',')) values.push_back(trim(item));
    } else {
      values.push_back(value);
    }
    if (!out.emplace(key, std::move(values)).second)
      throw ConfigError(path + ": duplicate key '" + key + "'");
  }
  return out;
}

rdv::WakeUpSchedule load_schedule(const std::string& schedule_file,
                                  const std::string& duty, std::uint32_t period) {
  if (!schedule_file.empty()) {
    std::ifstream in(schedule_file);
    if (!in) throw ConfigError("cannot read schedule file '" + schedule_file + "'");
    std::string line;
    std::getline(in, line);
    return rdv::WakeUpSchedule::parse(line);
  }
  return rdv::generate_schedule(period, rdv::Fraction::parse(duty));
}

int cmd_gen_seq(const std::string& base, std::uint32_t n, std::uint64_t id,
                std::uint64_t slots, std::uint64_t seed, const std::string& out) {
  rdv::ProtocolKind kind = parse_protocol(base);
  print_config("gen-seq", {{"base", base},
                           {"n", std::to_string(n)},
                           {"id", std::to_string(id)},
                           {"slots", std::to_string(slots)},
                           {"seed", std::to_string(seed)},
                           {"out", out.empty() ? "-" : out}});
  rdv::ProtocolDescriptor desc{kind, n};
  rdv::SequencePtr seq = desc.sequence(id, seed);
  std::ostringstream text;
  rdv::dump_sequence(text, *seq, slots);
  write_text(out, text.str());
  return 0;
}

int cmd_gen_schedule(std::uint32_t period, const std::string& duty,
                     const std::string& out) {
  print_config("gen-schedule",
               {{"period", std::to_string(period)}, {"duty", duty},
                {"out", out.empty() ? "-" : out}});
  rdv::WakeUpSchedule schedule =
      rdv::generate_schedule(period, rdv::Fraction::parse(duty));
  write_text(out, schedule.str() + "\n");
  return 0;
}

int cmd_verify(const std::string& schedule_file, const std::string& against,
               const std::string& duty, std::uint32_t period,
               const std::string& dump_file) {
  print_config("verify", {{"schedule-file", schedule_file},
                          {"against", against},
                          {"duty", duty},
                          {"period", std::to_string(period)},
                          {"dump", dump_file}});
  if (!dump_file.empty()) {
    std::ifstream in(dump_file);
    if (!in) throw ConfigError("cannot read dump file '" + dump_file + "'");
    rdv::SequenceDump dump = rdv::parse_sequence_dump(in);
    std::cout << "dump: " << dump.channels.size() << " slots, n=" << dump.n << "\n";
    if (dump.period) {
      for (std::size_t t = 0; t + *dump.period < dump.channels.size(); ++t) {
        if (dump.channels[t] != dump.channels[t + *dump.period]) {
          std::cout << "dump: declared period " << *dump.period
                    << " violated at slot " << t << "\n";
          return 1;
        }
      }
      std::cout << "dump: consistent with declared period " << *dump.period << "\n";
    }
    return 0;
  }
  if (schedule_file.empty() && duty.empty())
    throw ConfigError("verify: give --schedule-file, --duty/--period, or --dump");
  rdv::WakeUpSchedule x = load_schedule(schedule_file, duty, period);
  rdv::WakeUpSchedule y = against.empty() ? x : load_schedule(against, "", 0);
  auto cert = rdv::verify_discovery(x, y);
  if (!cert) {
    std::cout << "discovery: FAIL (some rotation has no common awake slot)\n";
    return 1;
  }
  std::uint32_t min_b = *std::min_element(cert->overlap.begin(), cert->overlap.end());
  std::cout << "discovery: OK schedule=" << x.str()
            << " duty=" << x.duty_cycle().str() << " min_overlap=" << min_b << "\n";
  return 0;
}

int cmd_metrics(const std::string& base, std::uint32_t n, const std::string& ids_text,
                const std::string& duty, std::uint32_t period,
                const std::string& schedule_file, bool adversarial,
                std::uint64_t trials, std::uint64_t horizon_opt, std::uint64_t seed,
                std::uint64_t max_drifts, const std::string& out,
                const std::string& format) {
  rdv::ProtocolKind kind = parse_protocol(base);
  auto comma = ids_text.find(',');
  if (comma == std::string::npos)
    throw ConfigError("--ids expects two comma-separated node ids");
  rdv::NodeId id_a = std::stoull(ids_text.substr(0, comma));
  rdv::NodeId id_b = std::stoull(ids_text.substr(comma + 1));
  if (id_a < 1 || id_b < 1) throw ConfigError("node ids must be >= 1");
  bool hybrid = !duty.empty() || !schedule_file.empty();
  if (hybrid && kind == rdv::ProtocolKind::random_ch)
    throw ConfigError("interleaving needs a periodic base protocol");

  print_config("metrics", {{"base", base},
                           {"n", std::to_string(n)},
                           {"ids", ids_text},
                           {"duty", duty},
                           {"period", std::to_string(period)},
                           {"schedule-file", schedule_file},
                           {"adversarial", adversarial ? "1" : "0"},
                           {"trials", std::to_string(trials)},
                           {"horizon", std::to_string(horizon_opt)},
                           {"seed", std::to_string(seed)},
                           {"out", out.empty() ? "-" : out}});

  rdv::ChannelSet channels(n);
  rdv::MetricReport report;
  nlohmann::json extra;
  if (kind == rdv::ProtocolKind::random_ch && !hybrid) {
    rdv::SlotIndex horizon = horizon_opt ? horizon_opt : 50ull * n;
    auto factory = [&](std::uint64_t s) { return rdv::random_ch(channels, s); };
    auto est = rdv::attr(factory, factory, {0}, trials, horizon, seed,
                         adversarial ? rdv::RandomPolicy::adversarial
                                     : rdv::RandomPolicy::uniform);
    rdv::SequencePtr a = rdv::random_ch(channels, rdv::derive_seed(seed, 1));
    rdv::SequencePtr b = rdv::random_ch(channels, rdv::derive_seed(seed, 2));
    report = rdv::deterministic_report(*a, *b, {0}, horizon,
                                       rdv::RandomPolicy::adversarial);
    report.attr_ttr0 = est.mean_ttr0;
    report.ci95 = est.ci95;
    report.censored_fraction = est.censored_fraction;
    report.trials = est.trials;
    if (est.censored)
      std::cerr << "# warning: " << est.censored << " of " << est.trials
                << " trials censored at the horizon; excluded from the mean\n";
    extra["attr_source"] = "monte_carlo";
  } else if (!hybrid) {
    rdv::ProtocolDescriptor desc{kind, n};
    std::uint64_t tau = *desc.period();
    rdv::SlotIndex horizon = horizon_opt ? horizon_opt : 5 * tau;
    auto domain = rdv::drift_window(max_drifts ? std::min(max_drifts, tau) : tau);
    report = rdv::deterministic_report(*desc.sequence(id_a), *desc.sequence(id_b),
                                       domain, horizon);
    extra["attr_source"] = "exhaustive";
  } else {
    rdv::WakeUpSchedule schedule = load_schedule(schedule_file, duty, period);
    rdv::HybridProtocol ha = rdv::make_hybrid(kind, id_a, channels, schedule,
                                              rdv::derive_seed(seed, 1));
    rdv::HybridProtocol hb = ha;
    hb.node = id_b;
    hb.seed = rdv::derive_seed(seed, 2);
    auto sa = rdv::hybrid_sequence(ha);
    auto sb = rdv::hybrid_sequence(hb);
    std::uint64_t window = sa->skeleton_period();
    rdv::SlotIndex horizon = horizon_opt ? horizon_opt : window;
    auto domain = rdv::drift_window(max_drifts ? std::min(max_drifts, window) : window);
    // Worst-case structure (adversarial random slots) gives the guaranteed
    // MTTR and the diversity floor; the uniform Monte Carlo gives the ATTR.
    report = rdv::deterministic_report(*sa, *sb, domain, horizon,
                                       rdv::RandomPolicy::adversarial);
    auto factory_a = [&](std::uint64_t s) {
      rdv::HybridProtocol h = ha;
      h.seed = s;
      return rdv::hybrid_sequence(h);
    };
    auto factory_b = [&](std::uint64_t s) {
      rdv::HybridProtocol h = hb;
      h.seed = s;
      return rdv::hybrid_sequence(h);
    };
    auto est = rdv::attr(factory_a, factory_b, domain, trials,
                         horizon_opt ? horizon_opt : 5 * window, seed,
                         adversarial ? rdv::RandomPolicy::adversarial
                                     : rdv::RandomPolicy::uniform);
    report.attr_ttr0 = est.mean_ttr0;
    report.ci95 = est.ci95;
    report.censored_fraction = est.censored_fraction;
    report.trials = est.trials;
    if (est.censored)
      std::cerr << "# warning: " << est.censored << " of " << est.trials
                << " trials censored at the horizon; excluded from the mean\n";
    extra["attr_source"] = "monte_carlo";
    extra["mttr_policy"] = "adversarial";
    extra["n_padded"] = ha.padded.n_padded;
    extra["tau"] = ha.padded.base_period;
    extra["ttr_bound"] = window;
    extra["schedule"] = schedule.str();
  }

  if (format == "csv") {
    std::ostringstream csv;
    csv << "mttr,attr_ttr0,attr_ttr1,ci95,diversity_rate,censored_fraction\n";
    if (report.mttr)
      csv << *report.mttr;
    else
      csv << "inf";
    char buf[160];
    std::snprintf(buf, sizeof(buf), ",%.6f,%.6f,%.6f,%s,%.6f\n", report.attr_ttr0,
                  report.attr_ttr0 + 1.0, report.ci95,
                  report.diversity_rate.str().c_str(), report.censored_fraction);
    csv << buf;
    write_text(out, csv.str());
  } else {
    nlohmann::json j = report.to_json();
    for (auto& [k, v] : extra.items()) j[k] = v;
    write_text(out, j.dump(2) + "\n");
  }
  return 0;
}

// Experiment options as parsed (CLI flags override config-file values).
struct ExperimentOptions {
  std::string base = "crseq";
  std::uint32_t n = 11, pairs = 20, period = 14, transmitters = 5, busy = 5,
                div_trials = 10, threads = 0;
  std::vector<std::string> duties;
  std::vector<double> intensities;
  double idle_mean = 0.0;
  std::uint64_t trials = 100, horizon = 0, seed = 1;
  std::string config_path, out = "results";
};

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
  try {
    if constexpr (std::is_floating_point_v<T>)
      return static_cast<T>(std::stod(text));
    else
      return static_cast<T>(std::stoull(text));
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': bad value '" + text + "'");
  }
}

// File values apply only where the command line did not set the option.
void apply_config_file(ExperimentOptions& opt, const CLI::App* cmd) {
  auto entries = parse_config_file(opt.config_path);
  auto cli_set = [&](const char* name) { return cmd->count(name) > 0; };
  for (const auto& [key, values] : entries) {
    const std::string& first = values.front();
    if (key == "base") {
      if (!cli_set("--base")) opt.base = first;
    } else if (key == "n") {
      if (!cli_set("--n")) opt.n = parse_number<std::uint32_t>(key, first);
    } else if (key == "pairs") {
      if (!cli_set("--pairs")) opt.pairs = parse_number<std::uint32_t>(key, first);
    } else if (key == "period") {
      if (!cli_set("--period")) opt.period = parse_number<std::uint32_t>(key, first);
    } else if (key == "duty") {
      if (!cli_set("--duty")) opt.duties = values;
    } else if (key == "pu.intensity") {
      if (!cli_set("--pu-intensity")) {
        opt.intensities.clear();
        for (const auto& v : values)
          opt.intensities.push_back(parse_number<double>(key, v));
      }
    } else if (key == "pu.idle_mean_slots") {
      if (!cli_set("--pu-idle-mean")) opt.idle_mean = parse_number<double>(key, first);
    } else if (key == "pu.transmitters") {
      if (!cli_set("--pu-transmitters"))
        opt.transmitters = parse_number<std::uint32_t>(key, first);
    } else if (key == "pu.busy_slots") {
      if (!cli_set("--pu-busy-slots"))
        opt.busy = parse_number<std::uint32_t>(key, first);
    } else if (key == "trials") {
      if (!cli_set("--trials")) opt.trials = parse_number<std::uint64_t>(key, first);
    } else if (key == "horizon") {
      if (!cli_set("--horizon")) opt.horizon = parse_number<std::uint64_t>(key, first);
    } else if (key == "seed") {
      if (!cli_set("--seed")) opt.seed = parse_number<std::uint64_t>(key, first);
    } else if (key == "div-trials") {
      if (!cli_set("--div-trials"))
        opt.div_trials = parse_number<std::uint32_t>(key, first);
    } else if (key == "threads") {
      if (!cli_set("--threads")) opt.threads = parse_number<std::uint32_t>(key, first);
    } else {
      throw ConfigError(opt.config_path + ": unknown config key '" + key + "'");
    }
  }
}

rdv::ExperimentConfig resolve_experiment(ExperimentOptions& opt, const CLI::App* cmd) {
  if (!opt.config_path.empty()) apply_config_file(opt, cmd);
  bool intensity_given = cmd->count("--pu-intensity") > 0 || !opt.intensities.empty();
  if (opt.idle_mean > 0.0 && intensity_given)
    throw ConfigError("pu.intensity and pu.idle_mean_slots are mutually exclusive");
  rdv::ExperimentConfig cfg;
  cfg.base = parse_protocol(opt.base);
  cfg.n_channels = opt.n;
  cfg.pairs = opt.pairs;
  cfg.schedule_period = opt.period;
  if (!opt.duties.empty()) {
    cfg.duty_cycles.clear();
    for (const auto& d : opt.duties) cfg.duty_cycles.push_back(rdv::Fraction::parse(d));
  }
  if (!opt.intensities.empty()) cfg.pu_intensities = opt.intensities;
  cfg.pu_transmitters = opt.transmitters;
  cfg.pu_busy_slots = opt.busy;
  cfg.pu_idle_mean_slots = opt.idle_mean;
  cfg.trials_per_pair = opt.trials;
  cfg.horizon = opt.horizon;
  cfg.master_seed = opt.seed;
  cfg.diversity_trials_per_pair = opt.div_trials;
  cfg.threads = opt.threads;
  return cfg;
}

int run_sweep_and_write(const rdv::ExperimentConfig& cfg, const std::string& out_dir,
                        const std::string& command) {
  std::cerr << "# command = " << command << "\n";
  std::istringstream lines(cfg.to_text());
  std::string line;
  while (std::getline(lines, line)) std::cerr << "# " << line << "\n";
  rdv::ExperimentResult result = rdv::sweep(cfg);
  std::filesystem::create_directories(out_dir);
  std::string stem = out_dir + "/sweep_" + result.config_hash;
  {
    std::ofstream csv(stem + ".csv", std::ios::binary);
    csv << result.to_csv();
  }
  {
    std::ofstream js(stem + ".json", std::ios::binary);
    js << result.to_json().dump(2) << "\n";
  }
  std::cout << "sweep: " << result.cells.size() << " cells -> " << stem << ".csv\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"channel-hopping rendezvous toolkit"};
  app.require_subcommand(1);

  // gen-seq
  auto* gen_seq = app.add_subcommand("gen-seq", "emit a CH sequence dump");
  std::string gs_base = "jumpstay", gs_out;
  std::uint32_t gs_n = 11;
  std::uint64_t gs_id = 1, gs_slots = 100, gs_seed = 1;
  gen_seq->add_option("--base", gs_base, "protocol: random|crseq|jumpstay|modular");
  gen_seq->add_option("--n", gs_n, "channel count")->check(CLI::PositiveNumber);
  gen_seq->add_option("--id", gs_id, "node id (>= 1)")->check(CLI::PositiveNumber);
  gen_seq->add_option("--slots", gs_slots, "slots to emit");
  gen_seq->add_option("--seed", gs_seed, "seed (random protocol only)");
  gen_seq->add_option("--out", gs_out, "output file ('-' = stdout)");

  // gen-schedule
  auto* gen_sched = app.add_subcommand("gen-schedule", "emit a wake-up schedule");
  std::uint32_t sc_period = 14;
  std::string sc_duty = "7/14", sc_out;
  gen_sched->add_option("--period", sc_period, "schedule period T")
      ->check(CLI::PositiveNumber);
  gen_sched->add_option("--duty", sc_duty, "target duty cycle a/b");
  gen_sched->add_option("--out", sc_out, "output file ('-' = stdout)");

  // verify
  auto* verify = app.add_subcommand("verify", "check discovery / dump consistency");
  std::string vf_schedule, vf_against, vf_duty, vf_dump;
  std::uint32_t vf_period = 14;
  verify->add_option("--schedule-file", vf_schedule, "schedule to verify");
  verify->add_option("--against", vf_against, "second schedule (pairwise check)");
  verify->add_option("--duty", vf_duty, "generate then verify");
  verify->add_option("--period", vf_period, "period for --duty");
  verify->add_option("--dump", vf_dump, "sequence dump to re-check");

  // metrics
  auto* metrics = app.add_subcommand("metrics", "MTTR / ATTR / diversity for a pair");
  std::string mt_base = "jumpstay", mt_ids = "1,2", mt_duty, mt_schedule, mt_out,
              mt_format = "json";
  std::uint32_t mt_n = 11, mt_period = 14;
  std::uint64_t mt_trials = 10000, mt_horizon = 0, mt_seed = 1, mt_max_drifts = 0;
  bool mt_adversarial = false;
  metrics->add_option("--base", mt_base, "protocol");
  metrics->add_option("--n", mt_n, "channel count")->check(CLI::PositiveNumber);
  metrics->add_option("--ids", mt_ids, "node id pair, e.g. 1,2");
  metrics->add_option("--duty", mt_duty, "interleave with this duty cycle");
  metrics->add_option("--period", mt_period, "schedule period for --duty");
  metrics->add_option("--schedule-file", mt_schedule, "interleave with this schedule");
  metrics->add_flag("--adversarial", mt_adversarial,
                    "worst-case random slots in the Monte Carlo scan");
  metrics->add_option("--trials", mt_trials, "Monte Carlo trials");
  metrics->add_option("--horizon", mt_horizon, "scan horizon (0 = auto)");
  metrics->add_option("--seed", mt_seed, "master seed");
  metrics->add_option("--max-drifts", mt_max_drifts, "cap enumerated drifts (0 = all)");
  metrics->add_option("--out", mt_out, "output file ('-' = stdout)");
  metrics->add_option("--format", mt_format, "csv|json")
      ->check(CLI::IsMember({"csv", "json"}));

  // simulate / sweep share the experiment options
  ExperimentOptions sw;
  auto add_experiment_options = [&](CLI::App* cmd) {
    cmd->add_option("--config", sw.config_path, "experiment config file");
    cmd->add_option("--base", sw.base, "protocol");
    cmd->add_option("--n", sw.n, "channel count")->check(CLI::PositiveNumber);
    cmd->add_option("--pairs", sw.pairs, "node pairs")->check(CLI::PositiveNumber);
    cmd->add_option("--period", sw.period, "schedule period T");
    cmd->add_option("--duty", sw.duties, "duty cycle list");
    cmd->add_option("--pu-intensity", sw.intensities, "PU traffic intensity list");
    cmd->add_option("--pu-idle-mean", sw.idle_mean,
                    "explicit PU idle mean l (excludes --pu-intensity)");
    cmd->add_option("--pu-transmitters", sw.transmitters, "PU transmitter count X");
    cmd->add_option("--pu-busy-slots", sw.busy, "busy period length b");
    cmd->add_option("--trials", sw.trials, "trials per pair");
    cmd->add_option("--horizon", sw.horizon, "scan horizon (0 = auto)");
    cmd->add_option("--seed", sw.seed, "master seed");
    cmd->add_option("--div-trials", sw.div_trials,
                    "full-window diversity scans per pair");
    cmd->add_option("--threads", sw.threads, "worker threads (0 = hardware)");
    cmd->add_option("--out", sw.out, "results directory");
  };

  auto* simulate = app.add_subcommand("simulate", "run one experiment cell");
  add_experiment_options(simulate);

  auto* sweep_cmd = app.add_subcommand("sweep", "duty-cycle x PU-intensity grid");
  add_experiment_options(sweep_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (gen_seq->parsed())
      return cmd_gen_seq(gs_base, gs_n, gs_id, gs_slots, gs_seed, gs_out);
    if (gen_sched->parsed()) return cmd_gen_schedule(sc_period, sc_duty, sc_out);
    if (verify->parsed())
      return cmd_verify(vf_schedule, vf_against, vf_duty, vf_period, vf_dump);
    if (metrics->parsed())
      return cmd_metrics(mt_base, mt_n, mt_ids, mt_duty, mt_period, mt_schedule,
                         mt_adversarial, mt_trials, mt_horizon, mt_seed,
                         mt_max_drifts, mt_out, mt_format);
    if (simulate->parsed() || sweep_cmd->parsed()) {
      const CLI::App* cmd = simulate->parsed() ? simulate : sweep_cmd;
      if (simulate->parsed()) {
        if (sw.duties.empty()) sw.duties = {"1"};
        if (sw.intensities.empty() && !(sw.idle_mean > 0.0)) sw.intensities = {0.0};
      }
      rdv::ExperimentConfig cfg = resolve_experiment(sw, cmd);
      return run_sweep_and_write(cfg, sw.out,
                                 simulate->parsed() ? "simulate" : "sweep");
    }
  } catch (const rdv::InfeasibleScheduleError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const rdv::InfeasiblePaddingError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
