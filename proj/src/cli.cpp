#include "tapdrag/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include "tapdrag/bench.hpp"
#include "tapdrag/study_harness.hpp"
#include "tapdrag/tapdrag_machine.hpp"
#include "tapdrag/text_format.hpp"
#include "tapdrag/trace_io.hpp"
#include "tapdrag/verification.hpp"

namespace tapdrag {

namespace {

// Raised inside subcommand handlers and mapped to an exit code at the top.
struct CliFailure {
  int code;
  std::string message;
};

struct EngineFlags {
  std::string policy;
  double slop = 0.0;
  std::string stacking;

  void attach(CLI::App* sub) {
    sub->add_option("--policy", policy, "fig8 or ghost")->check(CLI::IsMember({"fig8", "ghost"}));
    sub->add_option("--slop", slop, "slop radius in mm")->check(CLI::PositiveNumber);
    sub->add_option("--stacking", stacking, "object-on-object TapDrag: on or off")
        ->check(CLI::IsMember({"on", "off"}));
  }

  // Flags win over trace headers.
  EngineConfig apply(EngineConfig config) const {
    if (!policy.empty()) apply_config_option(config, "policy", policy);
    if (!stacking.empty()) apply_config_option(config, "stacking", stacking);
    if (slop > 0.0) config.slop_radius = slop;
    return config;
  }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliFailure{kExitUsage, "cannot open " + path};
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CliFailure{kExitUsage, "cannot write " + path};
  out << content;
}

TraceFile load_trace(const std::string& path) {
  try {
    return parse_trace(read_file(path));
  } catch (const ParseError& e) {
    throw CliFailure{kExitParse, path + ": " + e.what()};
  }
}

void require_well_formed(std::span<const TouchEvent> events, const EngineConfig& config) {
  if (auto error = validate_stream(events, config)) {
    throw CliFailure{kExitProtocol, "event " + std::to_string(error->index) + ": " +
                                        std::string(to_string(error->kind))};
  }
}

}  // namespace

int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"TapDrag gesture engine: trace replay, study generation, fuzzing, benchmarking"};
  app.name("tapdrag");
  app.require_subcommand(1);

  // replay
  auto* replay_cmd = app.add_subcommand("replay", "Replay a trace and print the gesture log");
  std::string replay_trace, scene_path, log_out, scene_out;
  int study_trial = -1;
  std::uint64_t study_seed = 0;
  EngineFlags replay_flags;
  replay_cmd->add_option("trace", replay_trace, "trace file")->required();
  auto* scene_opt = replay_cmd->add_option("--scene", scene_path, "initial scene snapshot");
  auto* trial_opt =
      replay_cmd->add_option("--study-trial", study_trial, "use the scene of this study trial");
  replay_cmd->add_option("--seed", study_seed, "study seed for --study-trial");
  replay_cmd->add_option("--log-out", log_out, "write the log here instead of stdout");
  replay_cmd->add_option("--scene-out", scene_out, "write the final scene here");
  scene_opt->excludes(trial_opt);
  replay_flags.attach(replay_cmd);

  // gen-study
  auto* gen_cmd = app.add_subcommand("gen-study", "Generate the trial CSV for a study");
  std::uint64_t gen_seed = 0;
  int participants = 1;
  std::string gen_out;
  gen_cmd->add_option("--seed", gen_seed, "study seed")->required();
  gen_cmd->add_option("--participants", participants, "number of sessions")
      ->check(CLI::PositiveNumber);
  gen_cmd->add_option("--out", gen_out, "write here instead of stdout");

  // stats
  auto* stats_cmd = app.add_subcommand("stats", "Summarize trial results per condition");
  std::string results_path, trials_path, group_by;
  stats_cmd->add_option("results", results_path, "results CSV")->required();
  stats_cmd->add_option("--trials", trials_path, "trial CSV the results refer to")->required();
  stats_cmd->add_option("--group-by", group_by, "comma-separated factors");

  // fuzz
  auto* fuzz_cmd = app.add_subcommand("fuzz", "Check recognizer invariants on random streams");
  std::uint64_t fuzz_seed = 0, fuzz_streams = 0, cross_streams = 0;
  std::string reproducers;
  EngineFlags fuzz_flags;
  fuzz_cmd->add_option("--seed", fuzz_seed, "fuzz seed")->required();
  fuzz_cmd->add_option("--streams", fuzz_streams, "number of streams")->required();
  fuzz_cmd->add_option("--cross-policy", cross_streams, "also run this many sub-slop streams "
                                                        "under both policies");
  fuzz_cmd->add_option("--reproducers", reproducers, "directory for minimized failing traces");
  fuzz_flags.attach(fuzz_cmd);

  // enumerate
  auto* enum_cmd =
      app.add_subcommand("enumerate", "Compare recognizer and oracle on every short stream");
  int max_events = 6;
  std::string enum_reproducers;
  enum_cmd->add_option("--max-events", max_events, "stream length bound")
      ->check(CLI::Range(0, 8));
  enum_cmd->add_option("--reproducers", enum_reproducers, "directory for failing traces");
  EngineFlags enum_flags;
  enum_flags.attach(enum_cmd);

  // bench
  auto* bench_cmd = app.add_subcommand("bench", "Measure throughput and per-event latency");
  std::string bench_trace, bench_scene;
  std::size_t synthetic = 0;
  int repeats = 1;
  std::uint64_t bench_seed = 1;
  EngineFlags bench_flags;
  auto* trace_opt = bench_cmd->add_option("trace", bench_trace, "trace file");
  auto* synth_opt =
      bench_cmd->add_option("--synthetic", synthetic, "generate a trace of at least N events");
  bench_cmd->add_option("--seed", bench_seed, "seed for --synthetic");
  bench_cmd->add_option("--scene", bench_scene, "initial scene (default: demo grid)");
  bench_cmd->add_option("--repeat", repeats, "passes over the trace")->check(CLI::PositiveNumber);
  trace_opt->excludes(synth_opt);
  bench_flags.attach(bench_cmd);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "tapdrag: " << e.what() << '\n' << app.help();
    return kExitUsage;
  }

  try {
    if (replay_cmd->parsed()) {
      const TraceFile trace = load_trace(replay_trace);
      const EngineConfig config = replay_flags.apply(config_from_trace(trace));
      Scene scene;
      if (!scene_path.empty()) {
        try {
          scene = parse_scene(read_file(scene_path));
        } catch (const ParseError& e) {
          throw CliFailure{kExitParse, scene_path + ": " + e.what()};
        }
      } else if (trial_opt->count() > 0) {
        study::StudyConfig sc;
        sc.seed = study_seed;
        sc.display = config.display;
        const auto trials = study::generate_session(sc);
        if (study_trial < 0 || static_cast<std::size_t>(study_trial) >= trials.size()) {
          throw CliFailure{kExitUsage, "--study-trial out of range"};
        }
        scene = study::trial_scene(trials[static_cast<std::size_t>(study_trial)]);
      } else {
        throw CliFailure{kExitUsage, "replay needs --scene or --study-trial"};
      }
      require_well_formed(trace.events, config);
      const ReplayResult result = replay(trace.events, std::move(scene), config);
      const std::string log = serialize_gesture_log(result.log);
      const std::string snapshot = serialize_scene(result.final_scene);
      if (log_out.empty()) {
        out << log;
      } else {
        write_file(log_out, log);
      }
      if (scene_out.empty()) {
        out << "#scene\n" << snapshot;
      } else {
        write_file(scene_out, snapshot);
      }
      return kExitOk;
    }

    if (gen_cmd->parsed()) {
      study::StudyConfig sc;
      sc.seed = gen_seed;
      const std::string csv = study::trials_to_csv(study::generate_study(sc, participants));
      if (gen_out.empty()) {
        out << csv;
      } else {
        write_file(gen_out, csv);
      }
      return kExitOk;
    }

    if (stats_cmd->parsed()) {
      std::vector<study::Factor> factors;
      if (!group_by.empty()) {
        for (auto name : text::split(group_by, ',')) {
          const auto f = study::parse_factor(name);
          if (!f) throw CliFailure{kExitUsage, "unknown factor: " + std::string(name)};
          factors.push_back(*f);
        }
      }
      std::vector<study::JoinedTrial> rows;
      try {
        const auto trials = study::trials_from_csv(read_file(trials_path));
        const auto results = study::results_from_csv(read_file(results_path));
        rows = study::join(trials, results);
      } catch (const ParseError& e) {
        throw CliFailure{kExitParse, e.what()};
      } catch (const study::StudyError& e) {
        throw CliFailure{kExitParse, e.what()};
      }
      try {
        out << study::stats_to_csv(study::summarize(rows, factors));
      } catch (const study::StudyError& e) {
        throw CliFailure{kExitParse, e.what()};
      }
      return kExitOk;
    }

    if (fuzz_cmd->parsed()) {
      const EngineConfig config = fuzz_flags.apply({});
      std::optional<std::filesystem::path> dir;
      if (!reproducers.empty()) dir = reproducers;
      auto report = verify::fuzz(fuzz_seed, fuzz_streams, config);
      if (cross_streams > 0) {
        auto cross = verify::fuzz_cross_policy(fuzz_seed, cross_streams, config);
        report.streams_run += cross.streams_run;
        for (auto& f : cross.violations) report.violations.push_back(std::move(f));
        for (auto& f : cross.mismatches) report.mismatches.push_back(std::move(f));
      }
      out << verify::format_report(report, dir);
      return report.passed() ? kExitOk : kExitFindings;
    }

    if (enum_cmd->parsed()) {
      const EngineConfig config = enum_flags.apply({});
      std::optional<std::filesystem::path> dir;
      if (!enum_reproducers.empty()) dir = enum_reproducers;
      const auto report = verify::enumerate_and_check(max_events, verify::micro_scene(), config);
      out << verify::format_report(report, dir);
      return report.passed() ? kExitOk : kExitFindings;
    }

    if (bench_cmd->parsed()) {
      TraceFile trace;
      if (!bench_trace.empty()) {
        trace = load_trace(bench_trace);
      } else if (synthetic == 0) {
        throw CliFailure{kExitUsage, "bench needs a trace or --synthetic N"};
      }
      const EngineConfig config = bench_flags.apply(config_from_trace(trace));
      if (synthetic > 0) trace.events = make_synthetic_trace(synthetic, bench_seed, config);
      Scene scene = demo_scene(config);
      if (!bench_scene.empty()) {
        try {
          scene = parse_scene(read_file(bench_scene));
        } catch (const ParseError& e) {
          throw CliFailure{kExitParse, bench_scene + ": " + e.what()};
        }
      }
      require_well_formed(trace.events, config);
      out << format_bench_report(run_bench(trace.events, scene, config, repeats));
      return kExitOk;
    }
  } catch (const CliFailure& f) {
    err << "tapdrag: " << f.message << '\n';
    return f.code;
  } catch (const ProtocolViolation& e) {
    err << "tapdrag: protocol violation: " << e.what() << '\n';
    return kExitProtocol;
  } catch (const std::invalid_argument& e) {
    err << "tapdrag: " << e.what() << '\n';
    return kExitUsage;
  } catch (const study::StudyError& e) {
    err << "tapdrag: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

int cli_dispatch(int argc, char** argv) {
  std::vector<std::string> args(argv + std::min(argc, 1), argv + argc);
  return cli_dispatch(args, std::cout, std::cerr);
}

}  // namespace tapdrag
