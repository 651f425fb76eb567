// wattcast: broadcast speed-scaling scheduler, rounding, oracle, and verifier.
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "wattcast/analysis.hpp"
#include "wattcast/blaps.hpp"
#include "wattcast/numeric.hpp"
#include "wattcast/rounding.hpp"

namespace {

using namespace wattcast;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::InvalidArgument, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::InvalidArgument, "cannot write '" + path + "'");
  out << content;
}

double tolerance_from_env() {
  if (const char* env = std::getenv("WATTCAST_TOL")) {
    char* end = nullptr;
    double v = std::strtod(env, &end);
    if (end == env || *end != '\0' || !(v > 0)) {
      fail(Errc::InvalidArgument, "WATTCAST_TOL must be a positive number");
    }
    return v;
  }
  return 1e-9;
}

struct OracleFlags {
  double delta_opt = 0.5;
  std::string speeds;   // comma-separated; empty means the default grid
  double horizon = -1;  // negative: derived from the trace
};

OracleParams oracle_params(const OracleFlags& flags, const Trace& trace) {
  OracleParams p;
  p.delta = flags.delta_opt;
  if (!flags.speeds.empty()) {
    std::istringstream in(flags.speeds);
    std::string tok;
    while (std::getline(in, tok, ',')) p.speeds.push_back(parse_double(tok));
  }
  if (flags.horizon >= 0) {
    p.horizon = flags.horizon;
  } else {
    // Feasible fallback: after the last arrival there is time to send every
    // page once at unit speed.
    double last_arrival = 0;
    double total_sigma = 0;
    for (const Request& r : trace.requests()) last_arrival = std::max(last_arrival, r.arrival);
    for (const Page& pg : trace.pages()) total_sigma += pg.sigma;
    p.horizon = std::ceil(last_arrival + total_sigma + 1);
  }
  return p;
}

std::string metrics_text(const Metrics& m) {
  std::ostringstream out;
  out << "F=" << fmt_g12(m.flow) << '\n';
  out << "E=" << fmt_g12(m.energy) << '\n';
  out << "G=" << fmt_g12(m.objective) << '\n';
  return out.str();
}

int run(int argc, char** argv) {
  CLI::App app{"online broadcast scheduling with dynamic speed scaling"};
  app.require_subcommand(1);

  Config cfg;
  cfg.tol = tolerance_from_env();

  // gen-trace
  auto* gen = app.add_subcommand("gen-trace", "generate a seeded random trace");
  std::uint64_t seed = 0;
  int pages = 3, requests = 8;
  double sigma_max = 2.0, horizon = 4.0;
  std::string out_path;
  gen->add_option("--seed", seed, "random seed");
  gen->add_option("--pages", pages, "number of pages")->check(CLI::PositiveNumber);
  gen->add_option("--requests", requests, "number of requests")->check(CLI::NonNegativeNumber);
  gen->add_option("--sigma-max", sigma_max, "maximum page size");
  gen->add_option("--horizon", horizon, "arrival window [0, horizon]");
  gen->add_option("--out,-o", out_path, "output file (default stdout)");

  // simulate
  auto* sim = app.add_subcommand("simulate", "run the scheduler on a trace");
  std::string trace_path, power_path, log_path;
  double beta_flag = -1;
  std::string accounting = "augmented";
  sim->add_option("--trace", trace_path, "trace file")->required();
  sim->add_option("--power", power_path, "power function file")->required();
  sim->add_option("--eps", cfg.eps, "speed augmentation (0 < eps <= 1/6)");
  sim->add_option("--beta", beta_flag, "share fraction (default: eps)");
  sim->add_option("--accounting", accounting, "metrics accounting: augmented|raw");
  sim->add_option("--out,-o", out_path, "schedule dump file (default stdout)");
  sim->add_option("--log", log_path, "event log file");

  // round
  auto* rnd = app.add_subcommand("round", "convert a fractional schedule to an integral one");
  std::string schedule_path;
  double eps_prime = 1.0;
  double delta_flag = -1;
  rnd->add_option("--schedule", schedule_path, "fractional schedule dump")->required();
  rnd->add_option("--trace", trace_path, "trace file")->required();
  rnd->add_option("--power", power_path, "power function file")->required();
  rnd->add_option("--eps-prime", eps_prime, "rounding augmentation (0 < eps' <= 1)");
  rnd->add_option("--delta", delta_flag, "slot size (default: min(0.1, min sigma/4))");
  rnd->add_option("--out,-o", out_path, "integral dump file (default stdout)");

  // oracle
  auto* orc = app.add_subcommand("oracle", "brute-force reference schedule");
  OracleFlags oflags;
  orc->add_option("--trace", trace_path, "trace file")->required();
  orc->add_option("--power", power_path, "power function file")->required();
  orc->add_option("--delta-opt", oflags.delta_opt, "oracle slot size");
  orc->add_option("--speeds", oflags.speeds, "comma-separated speed grid");
  orc->add_option("--horizon", oflags.horizon, "search horizon");
  orc->add_option("--out,-o", out_path, "schedule dump file (default stdout)");

  // verify
  auto* ver = app.add_subcommand("verify", "check the potential-function conditions");
  std::string alg_path, ref_path;
  ver->add_option("--alg", alg_path, "algorithm schedule dump")->required();
  ver->add_option("--ref", ref_path, "reference schedule dump")->required();
  ver->add_option("--trace", trace_path, "trace file")->required();
  ver->add_option("--power", power_path, "power function file")->required();
  ver->add_option("--eps", cfg.eps, "eps the algorithm ran with");

  // compare
  auto* cmp = app.add_subcommand("compare", "simulate + oracle + verify end to end");
  int trials = 1;
  std::string out_alg, out_ref;
  cmp->add_option("--trace", trace_path, "trace file (single-trial mode)");
  cmp->add_option("--power", power_path, "power function file")->required();
  cmp->add_option("--eps", cfg.eps, "speed augmentation (0 < eps <= 1/6)");
  cmp->add_option("--delta-opt", oflags.delta_opt, "oracle slot size");
  cmp->add_option("--speeds", oflags.speeds, "comma-separated speed grid");
  cmp->add_option("--horizon", oflags.horizon, "oracle search horizon");
  cmp->add_option("--trials", trials, "run N seeded random traces instead of --trace");
  cmp->add_option("--seed", seed, "first seed for --trials");
  cmp->add_option("--pages", pages, "pages per generated trace");
  cmp->add_option("--requests", requests, "requests per generated trace");
  cmp->add_option("--sigma-max", sigma_max, "maximum page size for generated traces");
  cmp->add_option("--gen-horizon", horizon, "arrival window for generated traces");
  cmp->add_option("--out-alg", out_alg, "write the algorithm schedule dump here");
  cmp->add_option("--out-ref", out_ref, "write the reference schedule dump here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (gen->parsed()) {
    Trace trace = gen_random_trace(seed, pages, requests, sigma_max, horizon);
    write_output(out_path, trace.emit());
    return 0;
  }

  if (sim->parsed()) {
    if (beta_flag >= 0) cfg.beta = beta_flag;
    cfg.validate();
    if (accounting != "raw" && accounting != "augmented") {
      fail(Errc::InvalidArgument, "accounting must be 'augmented' or 'raw'");
    }
    Trace trace = Trace::parse(read_file(trace_path));
    PowerFunction power = PowerFunction::parse(read_file(power_path));
    SimResult result = simulate(trace, power, cfg);
    write_output(out_path, emit_schedule(result.schedule, trace));
    if (!log_path.empty()) {
      std::ostringstream log;
      for (const SimEvent& ev : result.events) log << format_event(ev) << '\n';
      write_output(log_path, log.str());
    }
    auto mode = accounting == "raw" ? Config::Accounting::Raw : Config::Accounting::Augmented;
    std::cout << metrics_text(objective(result.schedule, trace, power, mode));
    return 0;
  }

  if (rnd->parsed()) {
    Trace trace = Trace::parse(read_file(trace_path));
    PowerFunction power = PowerFunction::parse(read_file(power_path));
    FractionalSchedule fs = parse_schedule(read_file(schedule_path), trace);
    double delta = delta_flag > 0 ? delta_flag : default_slot_size(trace);
    SlotSequence slots = serialize_slots(fs, trace, delta);
    IntegralSchedule is = gen_rounding(slots, trace, fs.completion, eps_prime);
    is.delta = delta;
    write_output(out_path, emit_integral(is, trace));
    RoundingReport report = verify_rounding(fs, is, trace, power, eps_prime, delta);
    std::cout << report.to_text();
    return report.pass ? 0 : 1;
  }

  if (orc->parsed()) {
    Trace trace = Trace::parse(read_file(trace_path));
    PowerFunction power = PowerFunction::parse(read_file(power_path));
    auto [schedule, metrics] = brute_force_opt(trace, power, oracle_params(oflags, trace));
    write_output(out_path, emit_schedule(schedule, trace));
    std::cout << metrics_text(metrics);
    return 0;
  }

  if (ver->parsed()) {
    Trace trace = Trace::parse(read_file(trace_path));
    PowerFunction power = PowerFunction::parse(read_file(power_path));
    FractionalSchedule alg = parse_schedule(read_file(alg_path), trace);
    FractionalSchedule ref = parse_schedule(read_file(ref_path), trace);
    ConditionReport report = verify_conditions(alg, ref, trace, power, cfg.eps);
    std::cout << report.to_text();
    return report.pass ? 0 : 1;
  }

  if (cmp->parsed()) {
    cfg.validate();
    PowerFunction power = PowerFunction::parse(read_file(power_path));
    std::vector<Trace> traces;
    if (trials > 1) {
      for (int i = 0; i < trials; ++i) {
        traces.push_back(gen_random_trace(seed + std::uint64_t(i), pages, requests, sigma_max, horizon));
      }
    } else {
      if (trace_path.empty()) fail(Errc::InvalidArgument, "compare needs --trace or --trials N");
      traces.push_back(Trace::parse(read_file(trace_path)));
    }
    bool all_pass = true;
    double worst_ratio = 0;
    for (size_t i = 0; i < traces.size(); ++i) {
      const Trace& trace = traces[i];
      SimResult result = simulate(trace, power, cfg);
      auto [ref, ref_metrics] = brute_force_opt(trace, power, oracle_params(oflags, trace));
      ConditionReport report = verify_conditions(result.schedule, ref, trace, power, cfg.eps);
      if (traces.size() > 1) std::cout << "# trial " << i << " (seed " << seed + i << ")\n";
      std::cout << report.to_text();
      all_pass = all_pass && report.pass;
      worst_ratio = std::max(worst_ratio, report.ratio);
      if (i == 0) {
        if (!out_alg.empty()) write_output(out_alg, emit_schedule(result.schedule, trace));
        if (!out_ref.empty()) write_output(out_ref, emit_schedule(ref, trace));
      }
    }
    if (traces.size() > 1) std::cout << "worst_ratio=" << fmt_g12(worst_ratio) << '\n';
    return all_pass ? 0 : 1;
  }

  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
