#include "cli.hpp"

#include <openssl/evp.h>

#include <CLI11.hpp>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <optional>
#include <sstream>

#include "accf/checker.hpp"
#include "accf/config.hpp"
#include "accf/experiments.hpp"
#include "accf/trace.hpp"

namespace accf::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidConfig : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

constexpr std::string_view kToolVersion = "0.1.0";

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IoError("error reading " + path.string());
  return buffer.str();
}

void write_atomic(const fs::path& path, const std::string& data) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out << data;
    out.flush();
    if (!out) throw IoError("error writing " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    std::error_code ignored;
    fs::remove(tmp, ignored);
    throw IoError("cannot move " + tmp.string() + " into place: " + ec.message());
  }
}

void prepare_out_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw IoError("cannot create output directory " + dir.string() + (ec ? ": " + ec.message() : ""));
  }
}

std::int64_t parse_int(std::string_view text, const std::string& what) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size() || value < 0) {
    throw UsageError(what + ": expected a non-negative integer, got '" + std::string(text) + "'");
  }
  return value;
}

std::vector<std::int64_t> parse_int_list(const std::string& text, const std::string& what) {
  std::vector<std::int64_t> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    if (item.find_first_not_of(' ') == std::string::npos) continue;
    out.push_back(parse_int(item, what));
  }
  if (out.empty()) throw UsageError("no " + what + " given");
  return out;
}

std::vector<std::string> parse_name_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    if (!item.empty()) out.push_back(item);
  }
  if (out.empty()) throw UsageError("no groupings given");
  return out;
}

std::optional<std::int64_t> env_int(const char* name) {
  const char* value = std::getenv(name);
  if (value == nullptr || *value == '\0') return std::nullopt;
  return parse_int(value, name);
}

struct ConfigOptions {
  std::string path;
  std::optional<std::string> grouping;
  std::optional<std::int64_t> heartbeat_ms;
  std::optional<std::int64_t> gossip_ms;
};

void add_config_options(CLI::App& cmd, ConfigOptions& options, bool grouping_flag) {
  cmd.add_option("--config", options.path, "System configuration file")->required();
  if (grouping_flag) cmd.add_option("--grouping", options.grouping, "Replace the grouping with a preset");
  cmd.add_option("--heartbeat-ms", options.heartbeat_ms, "Heartbeat interval (overrides ACCF_HEARTBEAT_MS)");
  cmd.add_option("--gossip-ms", options.gossip_ms, "VV gossip interval (overrides ACCF_GOSSIP_MS)");
}

/// Parses, applies overrides and validates. Throws ConfigError, IoError or
/// InvalidConfig.
SystemConfig load_effective_config(const ConfigOptions& options) {
  SystemConfig config = parse_config(read_file(options.path));
  if (auto v = options.heartbeat_ms ? options.heartbeat_ms : env_int("ACCF_HEARTBEAT_MS")) {
    if (*v <= 0) throw UsageError("heartbeat interval must be positive");
    config.protocol.heartbeat_ms = *v;
  }
  if (auto v = options.gossip_ms ? options.gossip_ms : env_int("ACCF_GOSSIP_MS")) {
    if (*v <= 0) throw UsageError("gossip interval must be positive");
    config.protocol.gossip_ms = *v;
  }
  if (options.grouping) {
    const auto epoch = config.groups.epoch;
    config.groups = preset(*options.grouping, Topology{config.groups.servers, config.groups.placement});
    config.groups.epoch = epoch;
  }
  const auto violations = validate(config.groups);
  if (!violations.empty()) {
    std::string message;
    for (const auto& v : violations) message += "violation: " + v.message + "\n";
    throw InvalidConfig(message);
  }
  return config;
}

ordered_json workload_json(experiments::App app, const experiments::WorkloadSpec& spec) {
  return ordered_json{{"app", experiments::to_string(app)},
                      {"duration_ms", spec.duration_ms},
                      {"warmup_fraction", spec.warmup_fraction},
                      {"poll_ms", spec.poll_ms},
                      {"writer_pause_ms", spec.writer_pause_ms},
                      {"reader_pause_ms", spec.reader_pause_ms}};
}

struct WorkloadOptions {
  std::string app;
  experiments::WorkloadSpec spec;
};

void add_workload_options(CLI::App& cmd, WorkloadOptions& options) {
  cmd.add_option("--workload", options.app, "app1 or app2")->required();
  cmd.add_option("--duration-ms", options.spec.duration_ms, "Simulated run length")
      ->check(CLI::PositiveNumber);
  cmd.add_option("--poll-ms", options.spec.poll_ms, "App1 poll interval")->check(CLI::NonNegativeNumber);
}

// Commands -------------------------------------------------------------------

int cmd_validate(const ConfigOptions& options, std::ostream& out) {
  const SystemConfig config = load_effective_config(options);
  out << "ok: " << config.groups.servers.size() << " servers, " << config.groups.tracking.size()
      << " tracking groups, " << config.groups.checking.size() << " checking groups, "
      << config.groups.placement.size() << " key classes\n";
  return kExitOk;
}

struct RunArgs {
  ConfigOptions config;
  WorkloadOptions workload;
  std::uint64_t seed = 1;
  std::int64_t delay_ms = 0;
  std::string out;
};

int cmd_run(RunArgs args, std::ostream& out, std::ostream& err) {
  if (auto seed = env_int("ACCF_SEED")) args.seed = static_cast<std::uint64_t>(*seed);
  const auto app = experiments::parse_app(args.workload.app);
  const SystemConfig config = load_effective_config(args.config);
  const fs::path dir = args.out;
  prepare_out_dir(dir);

  const auto& spec = args.workload.spec;
  auto run = app == experiments::App::kApp1 ? experiments::run_app1(config, args.delay_ms, args.seed, spec)
                                            : experiments::run_app2(config, args.delay_ms, args.seed, spec);
  auto base = app == experiments::App::kApp1 ? experiments::run_app1_baseline(config, args.seed, spec)
                                             : experiments::run_app2_baseline(config, args.seed, spec);
  const std::string grouping = args.config.grouping.value_or("config");
  run.result.grouping = grouping;
  run.result.normalized = base.result.throughput > 0 ? run.result.throughput / base.result.throughput : 0.0;
  base.result.grouping = grouping;
  base.result.normalized = 1.0;

  experiments::SweepTable table;
  table.app = app;
  table.baselines.push_back(base.result);
  table.rows.push_back(run.result);

  const std::string config_text = serialize_config(config);
  const std::string trace_text = render_trace(run.trace);
  const std::string results_text = experiments::sweep_csv(table);
  std::string report_text = checker::format_report(run.report);
  if (!base.report.ok()) report_text += "baseline run:\n" + checker::format_report(base.report);

  write_atomic(dir / "config.yaml", config_text);
  write_atomic(dir / "trace.tsv", trace_text);
  write_atomic(dir / "results.csv", results_text);
  write_atomic(dir / "report.txt", report_text);

  ordered_json manifest{
      {"tool", "accf"},
      {"tool_version", kToolVersion},
      {"command", "run"},
      {"config", {{"path", args.config.path}, {"grouping", grouping}}},
      {"workload", workload_json(app, spec)},
      {"seeds", {args.seed}},
      {"delays_ms", {args.delay_ms}},
      {"protocol",
       {{"heartbeat_ms", config.protocol.heartbeat_ms}, {"gossip_ms", config.protocol.gossip_ms}}},
      {"out", dir.string()},
      {"artifacts",
       {{"config.yaml", sha256_hex(config_text)},
        {"trace.tsv", sha256_hex(trace_text)},
        {"results.csv", sha256_hex(results_text)},
        {"report.txt", sha256_hex(report_text)}}},
  };
  write_atomic(dir / "manifest.json", manifest.dump(2) + "\n");

  out << experiments::to_string(app) << " grouping=" << grouping << " delay_ms=" << args.delay_ms
      << " seed=" << args.seed << " throughput=" << run.result.throughput
      << " normalized=" << run.result.normalized << "\n";
  out << "trace sha256 " << sha256_hex(trace_text) << "\n";
  if (!run.report.ok() || !base.report.ok()) {
    err << report_text;
    return kExitViolations;
  }
  out << report_text;
  return kExitOk;
}

struct SweepArgs {
  ConfigOptions config;
  WorkloadOptions workload;
  std::string delays = "0,50,100,250,500,1000";
  std::string seeds = "1,2,3";
  std::string groupings = "two-by-two,four-by-one";
  std::string out;
  bool keep_traces = false;
  unsigned threads = 0;
};

int cmd_sweep(const SweepArgs& args, std::ostream& out, std::ostream& err) {
  const auto app = experiments::parse_app(args.workload.app);
  const auto delays = parse_int_list(args.delays, "delays");
  std::vector<std::uint64_t> seeds;
  for (auto s : parse_int_list(args.seeds, "seeds")) seeds.push_back(static_cast<std::uint64_t>(s));
  const auto groupings = parse_name_list(args.groupings);
  ConfigOptions config_options = args.config;
  config_options.grouping.reset();
  const SystemConfig config = load_effective_config(config_options);
  for (const auto& g : groupings) preset(g, Topology{config.groups.servers, config.groups.placement});
  const fs::path dir = args.out;
  prepare_out_dir(dir);

  experiments::SweepOptions options;
  options.base = config;
  options.workload = args.workload.spec;
  options.threads = args.threads;
  options.keep_traces = args.keep_traces;

  experiments::SweepTable table;
  try {
    table = experiments::sweep(app, groupings, delays, seeds, options);
  } catch (const experiments::SweepAborted& e) {
    err << "sweep aborted: " << e.what() << "\n";
    return kExitViolations;
  }

  const std::string config_text = serialize_config(config);
  const std::string csv = experiments::sweep_csv(table);
  write_atomic(dir / "config.yaml", config_text);
  write_atomic(dir / "results.csv", csv);
  ordered_json artifacts{{"config.yaml", sha256_hex(config_text)}, {"results.csv", sha256_hex(csv)}};
  for (const auto& g : groupings) {
    const std::string name = "plot-" + g + ".dat";
    const std::string data = experiments::plot_data(table, g);
    write_atomic(dir / name, data);
    artifacts[name] = sha256_hex(data);
  }
  if (args.keep_traces) {
    prepare_out_dir(dir / "traces");
    for (const auto& [cell, trace] : table.traces) {
      const auto& [g, delay, seed] = cell;
      const std::string name =
          "traces/" + g + "-d" + std::to_string(delay) + "-s" + std::to_string(seed) + ".tsv";
      const std::string text = render_trace(trace);
      write_atomic(dir / name, text);
      artifacts[name] = sha256_hex(text);
    }
  }

  ordered_json manifest{
      {"tool", "accf"},
      {"tool_version", kToolVersion},
      {"command", "sweep"},
      {"config", {{"path", args.config.path}}},
      {"groupings", groupings},
      {"workload", workload_json(app, args.workload.spec)},
      {"seeds", seeds},
      {"delays_ms", delays},
      {"protocol",
       {{"heartbeat_ms", config.protocol.heartbeat_ms}, {"gossip_ms", config.protocol.gossip_ms}}},
      {"out", dir.string()},
      {"artifacts", artifacts},
  };
  write_atomic(dir / "manifest.json", manifest.dump(2) + "\n");

  out << csv;
  return kExitOk;
}

int cmd_check_trace(const std::string& path, std::ostream& out, std::ostream& err) {
  const std::string text = read_file(path);
  checker::Report report;
  try {
    report = checker::check_trace(parse_trace(text));
  } catch (const MalformedTrace& e) {
    err << "malformed trace: " << path << ": " << e.what() << "\n";
    return kExitMalformedTrace;
  }
  if (!report.ok()) {
    err << checker::format_report(report);
    return kExitViolations;
  }
  out << checker::format_report(report);
  return kExitOk;
}

}  // namespace

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 computation failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < length; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 0xf];
  }
  return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Causally consistent replicated store simulator", "accf"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));

  ConfigOptions validate_options;
  auto* validate_cmd = app.add_subcommand("validate", "Parse and validate a configuration file");
  add_config_options(*validate_cmd, validate_options, true);

  RunArgs run_args;
  auto* run_cmd = app.add_subcommand("run", "Run one experiment and check its trace");
  add_config_options(*run_cmd, run_args.config, true);
  add_workload_options(*run_cmd, run_args.workload);
  run_cmd->add_option("--seed", run_args.seed, "RNG seed (ACCF_SEED overrides)");
  run_cmd->add_option("--delay", run_args.delay_ms, "Injected delay in ms")->check(CLI::NonNegativeNumber);
  run_cmd->add_option("--out", run_args.out, "Output directory")->required();

  SweepArgs sweep_args;
  auto* sweep_cmd = app.add_subcommand("sweep", "Sweep groupings, delays and seeds");
  add_config_options(*sweep_cmd, sweep_args.config, false);
  add_workload_options(*sweep_cmd, sweep_args.workload);
  sweep_cmd->add_option("--delays", sweep_args.delays, "Comma-separated delays in ms");
  sweep_cmd->add_option("--seeds", sweep_args.seeds, "Comma-separated seeds");
  sweep_cmd->add_option("--grouping", sweep_args.groupings, "Comma-separated grouping presets");
  sweep_cmd->add_option("--out", sweep_args.out, "Output directory")->required();
  sweep_cmd->add_flag("--keep-traces", sweep_args.keep_traces, "Write every run's trace");
  sweep_cmd->add_option("--threads", sweep_args.threads, "Worker threads (0 = all cores)");

  std::string trace_path;
  auto* check_cmd = app.add_subcommand("check-trace", "Check a trace file for consistency violations");
  check_cmd->add_option("trace", trace_path, "Trace file")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (validate_cmd->parsed()) return cmd_validate(validate_options, out);
    if (run_cmd->parsed()) return cmd_run(run_args, out, err);
    if (sweep_cmd->parsed()) return cmd_sweep(sweep_args, out, err);
    if (check_cmd->parsed()) return cmd_check_trace(trace_path, out, err);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InvalidConfig& e) {
    err << e.what();
    return kExitViolations;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const GroupingError& e) {
    err << "grouping error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace accf::cli
