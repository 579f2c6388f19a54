// Command-line front end over the C API: analyze, surrogate, synth, replay.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "smfdfa/smfdfa.h"

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitNumeric = 4;

struct SeriesFree {
  void operator()(smfdfa_series* p) const { smfdfa_series_free(p); }
};
struct ConfigFree {
  void operator()(smfdfa_config* p) const { smfdfa_config_free(p); }
};
struct AnalysisFree {
  void operator()(smfdfa_analysis* p) const { smfdfa_analysis_free(p); }
};
using SeriesPtr = std::unique_ptr<smfdfa_series, SeriesFree>;
using ConfigPtr = std::unique_ptr<smfdfa_config, ConfigFree>;
using AnalysisPtr = std::unique_ptr<smfdfa_analysis, AnalysisFree>;

int exit_code_for(smfdfa_status status) {
  switch (status) {
    case SMFDFA_OK: return kExitOk;
    case SMFDFA_INVALID_ARGUMENT:
    case SMFDFA_INVALID_CONFIG: return kExitUsage;
    case SMFDFA_EMPTY_INPUT:
    case SMFDFA_NON_POSITIVE_PRICE:
    case SMFDFA_MISSING_TIMESTAMPS:
    case SMFDFA_PARSE_ERROR:
    case SMFDFA_IO_ERROR:
    case SMFDFA_NON_MONOTONIC_TIMESTAMPS:
    case SMFDFA_NON_FINITE_VALUE:
    case SMFDFA_SERIES_TOO_SHORT:
    case SMFDFA_SCALE_TOO_LARGE: return kExitData;
    default: return kExitNumeric;
  }
}

// Carries a status out of a subcommand; main prints it as one line.
struct Failure {
  smfdfa_status status;
  std::string detail;
};

void check(smfdfa_status status) {
  if (status != SMFDFA_OK) throw Failure{status, smfdfa_last_error()};
}

[[noreturn]] void usage_error(const std::string& detail) { throw Failure{SMFDFA_INVALID_ARGUMENT, detail}; }

std::string channel_name(smfdfa_channel channel) {
  switch (channel) {
    case SMFDFA_CHANNEL_POSITIVE: return "positive";
    case SMFDFA_CHANNEL_NEGATIVE: return "negative";
    case SMFDFA_CHANNEL_UNSIGNED: return "unsigned";
  }
  return "unsigned";
}

std::string read_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{SMFDFA_IO_ERROR, "cannot open '" + path + "'"};
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Failure{SMFDFA_IO_ERROR, "cannot write '" + path.string() + "'"};
  out << text;
}

// FNV-1a, recorded in manifests to pin the input bytes.
std::string fnv1a64(const std::string& bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  char out[17];
  std::snprintf(out, sizeof out, "%016llx", static_cast<unsigned long long>(hash));
  return out;
}

// Every flag that influences results. Defaults follow the library.
struct AnalysisOptions {
  std::string input;
  std::string input_kind = "prices";
  std::string delimiter = "auto";
  std::string overnight = "auto";
  double gap_factor = 5.0;
  std::string mode = "signed";
  double q_min = -10.0;
  double q_max = 10.0;
  double q_step = 0.25;
  int poly_order = 2;
  std::optional<std::size_t> scales_min;
  std::optional<std::size_t> scales_max;
  std::optional<std::size_t> scales_count;
  std::vector<std::size_t> scales;  // explicit list, used by replay
  std::optional<std::size_t> fit_min;
  std::optional<std::size_t> fit_max;
  std::string zero_policy = "exclude";
  std::string normalization = "paper_1_over_s";
  std::optional<std::size_t> min_points;
  bool surfaces = false;
  unsigned threads = 1;
  std::string out_dir = ".";
  bool record_timing = false;
  // surrogate only
  std::size_t shuffles = 10;
  std::uint64_t seed = 0;
};

void add_analysis_flags(CLI::App& cmd, AnalysisOptions& o) {
  cmd.add_option("input", o.input, "Input CSV (timestamp,price or timestamp,value)")->required();
  cmd.add_option("--input-kind", o.input_kind, "prices or returns")
      ->check(CLI::IsMember({"prices", "returns"}))
      ->capture_default_str();
  cmd.add_option("--delimiter", o.delimiter, "',' ';' or auto")
      ->check(CLI::IsMember({",", ";", "auto"}))
      ->capture_default_str();
  cmd.add_option("--overnight", o.overnight, "auto, off or calendar:<file>")->capture_default_str();
  cmd.add_option("--gap-factor", o.gap_factor, "Gap rule multiple of the median interval")->capture_default_str();
  cmd.add_option("--mode", o.mode, "standard or signed")
      ->check(CLI::IsMember({"standard", "signed"}))
      ->capture_default_str();
  cmd.add_option("--q-min", o.q_min)->capture_default_str();
  cmd.add_option("--q-max", o.q_max)->capture_default_str();
  cmd.add_option("--q-step", o.q_step)->capture_default_str();
  cmd.add_option("--poly-order", o.poly_order, "Detrending polynomial order l")->capture_default_str();
  cmd.add_option("--scales-min", o.scales_min, "Smallest scale (default max(16, 2(l+2)))");
  cmd.add_option("--scales-max", o.scales_max, "Largest scale (default N/4)");
  cmd.add_option("--scales-count", o.scales_count, "Number of log-spaced scales (default 20)");
  cmd.add_option("--scales", o.scales, "Explicit scale list (overrides --scales-*)")->delimiter(',');
  cmd.add_option("--fit-min", o.fit_min, "Smallest scale in the log-log fit");
  cmd.add_option("--fit-max", o.fit_max, "Largest scale in the log-log fit");
  cmd.add_option("--zero-policy", o.zero_policy)
      ->check(CLI::IsMember({"exclude", "to_positive", "to_negative"}))
      ->capture_default_str();
  cmd.add_option("--normalization", o.normalization)
      ->check(CLI::IsMember({"paper_1_over_s", "subset_1_over_N"}))
      ->capture_default_str();
  cmd.add_option("--min-points", o.min_points, "Minimum profile points per segment (default l+2)");
  cmd.add_flag("--surfaces", o.surfaces, "Also write fluctuation surface CSVs");
  cmd.add_option("--threads", o.threads, "Worker threads (results do not depend on it)")->capture_default_str();
  cmd.add_option("--out", o.out_dir, "Output directory")->capture_default_str();
  cmd.add_flag("--record-timing", o.record_timing, "Record elapsed time in the manifest");
}

char delimiter_char(const std::string& d) { return d == "auto" ? 0 : d[0]; }

SeriesPtr load_series(const AnalysisOptions& o, std::size_t& removed) {
  smfdfa_series* raw = nullptr;
  const auto kind = o.input_kind == "returns" ? SMFDFA_INPUT_RETURNS : SMFDFA_INPUT_PRICES;
  check(smfdfa_series_read_csv(o.input.c_str(), kind, delimiter_char(o.delimiter), &raw));
  SeriesPtr series(raw);
  removed = 0;
  if (o.overnight == "off") return series;
  smfdfa_series* filtered = nullptr;
  if (o.overnight == "auto") {
    check(smfdfa_series_filter_gaps(series.get(), o.gap_factor, &filtered));
  } else if (o.overnight.rfind("calendar:", 0) == 0) {
    check(smfdfa_series_filter_calendar(series.get(), o.overnight.substr(9).c_str(), &filtered));
  } else {
    usage_error("--overnight must be auto, off or calendar:<file>");
  }
  SeriesPtr out(filtered);
  removed = smfdfa_series_overnight_removed(out.get());
  return out;
}

ConfigPtr build_config(const AnalysisOptions& o, std::size_t series_length) {
  smfdfa_config* raw = nullptr;
  check(smfdfa_config_new(&raw));
  ConfigPtr config(raw);
  check(smfdfa_config_set_mode(config.get(), o.mode == "standard" ? SMFDFA_MODE_STANDARD : SMFDFA_MODE_SIGNED));
  check(smfdfa_config_set_q_range(config.get(), o.q_min, o.q_max, o.q_step));
  check(smfdfa_config_set_poly_order(config.get(), o.poly_order));
  if (!o.scales.empty()) {
    check(smfdfa_config_set_scales(config.get(), o.scales.data(), o.scales.size()));
  } else if (o.scales_min || o.scales_max || o.scales_count) {
    const std::size_t floor_scale = std::max<std::size_t>(16, 2 * (static_cast<std::size_t>(o.poly_order) + 2));
    check(smfdfa_config_set_scale_grid(config.get(), o.scales_min.value_or(floor_scale),
                                       o.scales_max.value_or(series_length / 4), o.scales_count.value_or(20)));
  }
  if (o.fit_min || o.fit_max) {
    check(smfdfa_config_set_fit_range(config.get(), o.fit_min.value_or(0),
                                      o.fit_max.value_or(static_cast<std::size_t>(-1))));
  }
  const auto zero = o.zero_policy == "to_positive"   ? SMFDFA_ZERO_TO_POSITIVE
                    : o.zero_policy == "to_negative" ? SMFDFA_ZERO_TO_NEGATIVE
                                                     : SMFDFA_ZERO_EXCLUDE;
  check(smfdfa_config_set_zero_policy(config.get(), zero));
  check(smfdfa_config_set_normalization(config.get(), o.normalization == "subset_1_over_N"
                                                          ? SMFDFA_NORM_SUBSET_LENGTH
                                                          : SMFDFA_NORM_SEGMENT_LENGTH));
  if (o.min_points) check(smfdfa_config_set_min_points(config.get(), *o.min_points));
  check(smfdfa_config_set_threads(config.get(), o.threads));
  return config;
}

AnalysisPtr run_analysis(const smfdfa_series* series, const smfdfa_config* config) {
  smfdfa_analysis* raw = nullptr;
  check(smfdfa_analyze(series, config, &raw));
  return AnalysisPtr(raw);
}

std::vector<smfdfa_channel> channels_of(const smfdfa_analysis* analysis) {
  std::vector<smfdfa_channel> out;
  for (std::size_t i = 0; i < smfdfa_analysis_channel_count(analysis); ++i) {
    out.push_back(smfdfa_analysis_channel(analysis, i));
  }
  return out;
}

ordered_json manifest_for(const std::string& command, const AnalysisOptions& o, const std::string& input_bytes,
                          std::size_t series_length, std::size_t removed, const smfdfa_analysis* analysis,
                          const std::vector<std::string>& outputs) {
  ordered_json m;
  m["tool"] = "smfdfa";
  m["version"] = smfdfa_version();
  m["command"] = command;
  m["input"] = {{"path", o.input},
                {"fnv1a64", fnv1a64(input_bytes)},
                {"kind", o.input_kind},
                {"delimiter", o.delimiter}};
  m["overnight"] = {{"rule", o.overnight}, {"gap_factor", o.gap_factor}, {"removed", removed}};
  std::vector<std::size_t> scales(smfdfa_analysis_scale_count(analysis));
  smfdfa_analysis_scales(analysis, scales.data(), scales.size());
  ordered_json config;
  config["mode"] = o.mode;
  config["q_min"] = o.q_min;
  config["q_max"] = o.q_max;
  config["q_step"] = o.q_step;
  config["poly_order"] = o.poly_order;
  config["scales"] = scales;
  config["fit_min"] = o.fit_min ? ordered_json(*o.fit_min) : ordered_json(nullptr);
  config["fit_max"] = o.fit_max ? ordered_json(*o.fit_max) : ordered_json(nullptr);
  config["zero_policy"] = o.zero_policy;
  config["normalization"] = o.normalization;
  config["min_points"] = o.min_points ? ordered_json(*o.min_points) : ordered_json(nullptr);
  config["surfaces"] = o.surfaces;
  m["config"] = config;
  if (command == "surrogate") {
    std::vector<std::uint64_t> seeds;
    for (std::size_t i = 0; i < o.shuffles; ++i) seeds.push_back(o.seed + i);
    m["surrogate"] = {{"shuffles", o.shuffles}, {"seed", o.seed}, {"seeds", seeds}};
  }
  m["series_length"] = series_length;
  ordered_json channels = ordered_json::array();
  for (auto channel : channels_of(analysis)) {
    channels.push_back({{"channel", channel_name(channel)},
                        {"status", smfdfa_status_name(smfdfa_analysis_channel_status(analysis, channel))}});
  }
  m["channels"] = channels;
  m["outputs"] = outputs;
  return m;
}

// Writes the per-channel files and returns their names.
std::vector<std::string> write_outputs(const smfdfa_analysis* analysis, const AnalysisOptions& o) {
  const std::filesystem::path dir(o.out_dir);
  std::vector<std::string> outputs;
  for (auto channel : channels_of(analysis)) {
    const std::string name = channel_name(channel);
    if (smfdfa_analysis_channel_status(analysis, channel) == SMFDFA_OK) {
      const std::string file = "spectrum_" + name + ".csv";
      check(smfdfa_analysis_write_spectrum_csv(analysis, channel, (dir / file).string().c_str()));
      outputs.push_back(file);
    }
    if (o.surfaces) {
      const std::string file = "surface_" + name + ".csv";
      check(smfdfa_analysis_write_surface_csv(analysis, channel, (dir / file).string().c_str()));
      outputs.push_back(file);
    }
  }
  check(smfdfa_analysis_write_plot_csv(analysis, (dir / "plot.csv").string().c_str()));
  outputs.push_back("plot.csv");
  check(smfdfa_analysis_write_metrics_json(analysis, (dir / "metrics.json").string().c_str()));
  outputs.push_back("metrics.json");
  return outputs;
}

bool any_channel_ok(const smfdfa_analysis* analysis) {
  for (auto channel : channels_of(analysis)) {
    if (smfdfa_analysis_channel_status(analysis, channel) == SMFDFA_OK) return true;
  }
  return false;
}

struct Moments {
  double mean = 0.0;
  double stddev = 0.0;
};

Moments moments(const std::vector<double>& xs) {
  Moments m;
  if (xs.empty()) return m;
  for (double x : xs) m.mean += x;
  m.mean /= static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - m.mean) * (x - m.mean);
    m.stddev = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  }
  return m;
}

ordered_json surrogate_report(const smfdfa_analysis* original, const std::vector<AnalysisPtr>& replicas,
                              const AnalysisOptions& o) {
  ordered_json report;
  report["shuffles"] = o.shuffles;
  report["seed"] = o.seed;
  ordered_json channels = ordered_json::array();
  for (auto channel : channels_of(original)) {
    ordered_json c;
    c["channel"] = channel_name(channel);
    smfdfa_metrics m{};
    if (smfdfa_analysis_channel_status(original, channel) == SMFDFA_OK) {
      check(smfdfa_analysis_metrics(original, channel, &m));
      c["original"] = {{"alpha_max", m.alpha_max}, {"delta_alpha", m.delta_alpha}};
    } else {
      c["original"] = {{"status", smfdfa_status_name(smfdfa_analysis_channel_status(original, channel))}};
    }
    std::vector<double> alpha_max;
    std::vector<double> delta_alpha;
    std::size_t failed = 0;
    for (const auto& replica : replicas) {
      if (!replica || smfdfa_analysis_channel_status(replica.get(), channel) != SMFDFA_OK) {
        ++failed;
        continue;
      }
      check(smfdfa_analysis_metrics(replica.get(), channel, &m));
      alpha_max.push_back(m.alpha_max);
      delta_alpha.push_back(m.delta_alpha);
    }
    const Moments am = moments(alpha_max);
    const Moments da = moments(delta_alpha);
    c["surrogate"] = {{"alpha_max", {{"mean", am.mean}, {"std", am.stddev}}},
                      {"delta_alpha", {{"mean", da.mean}, {"std", da.stddev}}},
                      {"replicas_used", alpha_max.size()},
                      {"replicas_failed", failed}};
    channels.push_back(std::move(c));
  }
  report["channels"] = channels;
  return report;
}

int run_command(const std::string& command, const AnalysisOptions& o) {
  const auto started = std::chrono::steady_clock::now();
  std::filesystem::create_directories(o.out_dir);
  const std::string input_bytes = read_bytes(o.input);
  std::size_t removed = 0;
  SeriesPtr series = load_series(o, removed);
  const std::size_t length = smfdfa_series_length(series.get());
  ConfigPtr config = build_config(o, length);
  AnalysisPtr analysis = run_analysis(series.get(), config.get());
  std::vector<std::string> outputs = write_outputs(analysis.get(), o);

  if (command == "surrogate") {
    if (o.shuffles < 1) usage_error("--shuffles must be at least 1");
    std::vector<AnalysisPtr> replicas;
    for (std::size_t i = 0; i < o.shuffles; ++i) {
      smfdfa_series* raw = nullptr;
      check(smfdfa_series_shuffle(series.get(), o.seed + i, &raw));
      SeriesPtr shuffled(raw);
      smfdfa_analysis* result = nullptr;
      // A replica in which every channel fails is counted, not fatal.
      if (smfdfa_analyze(shuffled.get(), config.get(), &result) == SMFDFA_OK) {
        replicas.emplace_back(result);
      } else {
        replicas.emplace_back(nullptr);
      }
    }
    write_text(std::filesystem::path(o.out_dir) / "surrogate.json",
               surrogate_report(analysis.get(), replicas, o).dump(2) + "\n");
    outputs.push_back("surrogate.json");
  }

  ordered_json manifest = manifest_for(command, o, input_bytes, length, removed, analysis.get(), outputs);
  if (o.record_timing) {
    manifest["elapsed_ms"] =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
  }
  write_text(std::filesystem::path(o.out_dir) / "manifest.json", manifest.dump(2) + "\n");

  for (auto channel : channels_of(analysis.get())) {
    const auto status = smfdfa_analysis_channel_status(analysis.get(), channel);
    if (status != SMFDFA_OK) {
      std::cerr << "smfdfa: warning: " << channel_name(channel) << " channel: " << smfdfa_status_name(status) << ": "
                << smfdfa_last_error() << "\n";
    }
  }
  return any_channel_ok(analysis.get()) ? kExitOk : kExitNumeric;
}

template <typename T>
std::optional<T> optional_field(const ordered_json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<T>();
}

int replay(const std::string& manifest_path, const std::optional<std::string>& out_dir,
           const std::optional<std::string>& input_override) {
  ordered_json m;
  try {
    m = ordered_json::parse(read_bytes(manifest_path));
  } catch (const nlohmann::json::exception& e) {
    throw Failure{SMFDFA_PARSE_ERROR, std::string("manifest: ") + e.what()};
  }
  AnalysisOptions o;
  std::string command;
  try {
    command = m.at("command").get<std::string>();
    const auto& input = m.at("input");
    o.input = input_override.value_or(input.at("path").get<std::string>());
    o.input_kind = input.at("kind").get<std::string>();
    o.delimiter = input.at("delimiter").get<std::string>();
    o.overnight = m.at("overnight").at("rule").get<std::string>();
    o.gap_factor = m.at("overnight").at("gap_factor").get<double>();
    const auto& c = m.at("config");
    o.mode = c.at("mode").get<std::string>();
    o.q_min = c.at("q_min").get<double>();
    o.q_max = c.at("q_max").get<double>();
    o.q_step = c.at("q_step").get<double>();
    o.poly_order = c.at("poly_order").get<int>();
    o.scales = c.at("scales").get<std::vector<std::size_t>>();
    o.fit_min = optional_field<std::size_t>(c, "fit_min");
    o.fit_max = optional_field<std::size_t>(c, "fit_max");
    o.zero_policy = c.at("zero_policy").get<std::string>();
    o.normalization = c.at("normalization").get<std::string>();
    o.min_points = optional_field<std::size_t>(c, "min_points");
    o.surfaces = c.at("surfaces").get<bool>();
    if (command == "surrogate") {
      o.shuffles = m.at("surrogate").at("shuffles").get<std::size_t>();
      o.seed = m.at("surrogate").at("seed").get<std::uint64_t>();
    }
    if (const auto& expected = input.at("fnv1a64").get<std::string>(); fnv1a64(read_bytes(o.input)) != expected) {
      throw Failure{SMFDFA_PARSE_ERROR, "input bytes differ from the manifest checksum"};
    }
  } catch (const nlohmann::json::exception& e) {
    throw Failure{SMFDFA_PARSE_ERROR, std::string("manifest: ") + e.what()};
  }
  if (command != "analyze" && command != "surrogate") {
    throw Failure{SMFDFA_PARSE_ERROR, "manifest command '" + command + "' cannot be replayed"};
  }
  o.out_dir = out_dir.value_or(".");
  return run_command(command, o);
}

struct SynthOptions {
  std::string generator;
  int levels = 16;
  double weight = 0.75;
  double hurst = 0.5;
  std::size_t length = 65536;
  std::uint64_t seed = 0;
  std::string out;
};

int synth(const SynthOptions& o) {
  smfdfa_series* raw = nullptr;
  if (o.generator == "cascade") {
    check(smfdfa_synth_cascade(o.levels, o.weight, &raw));
  } else if (o.generator == "signed-cascade") {
    check(smfdfa_synth_signed_cascade(o.levels, o.weight, o.seed, &raw));
  } else if (o.generator == "fgn") {
    check(smfdfa_synth_fgn(o.hurst, o.length, o.seed, &raw));
  } else {
    check(smfdfa_synth_gaussian(o.length, o.seed, &raw));
  }
  SeriesPtr series(raw);
  const std::filesystem::path out(o.out);
  if (out.has_parent_path()) std::filesystem::create_directories(out.parent_path());
  check(smfdfa_series_write_csv(series.get(), o.out.c_str()));

  ordered_json m;
  m["tool"] = "smfdfa";
  m["version"] = smfdfa_version();
  m["command"] = "synth";
  m["generator"] = o.generator;
  if (o.generator == "cascade" || o.generator == "signed-cascade") {
    m["levels"] = o.levels;
    m["a"] = o.weight;
  }
  if (o.generator == "fgn") m["hurst"] = o.hurst;
  if (o.generator == "fgn" || o.generator == "gaussian") m["length"] = o.length;
  if (o.generator != "cascade") m["seed"] = o.seed;
  m["output"] = out.filename().string();
  m["rows"] = smfdfa_series_length(series.get());
  m["fnv1a64"] = fnv1a64(read_bytes(o.out));
  write_text(std::filesystem::path(o.out + ".manifest.json"), m.dump(2) + "\n");
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sign-asymmetric multifractal detrended fluctuation analysis"};
  app.set_version_flag("--version", std::string(smfdfa_version()));
  app.require_subcommand(1);

  AnalysisOptions analyze_opts;
  auto* analyze_cmd = app.add_subcommand("analyze", "Estimate h(q) and f(alpha) for a series");
  add_analysis_flags(*analyze_cmd, analyze_opts);

  AnalysisOptions surrogate_opts;
  auto* surrogate_cmd = app.add_subcommand("surrogate", "Compare a series with shuffled surrogates");
  add_analysis_flags(*surrogate_cmd, surrogate_opts);
  surrogate_cmd->add_option("--shuffles", surrogate_opts.shuffles, "Number of shuffled replicas")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  surrogate_cmd->add_option("--seed", surrogate_opts.seed, "Seed of the first replica (replica i uses seed+i)")
      ->capture_default_str();

  SynthOptions synth_opts;
  auto* synth_cmd = app.add_subcommand("synth", "Write a synthetic series as timestamp,value CSV");
  synth_cmd->add_option("generator", synth_opts.generator, "cascade, signed-cascade, fgn or gaussian")
      ->required()
      ->check(CLI::IsMember({"cascade", "signed-cascade", "fgn", "gaussian"}));
  synth_cmd->add_option("--levels", synth_opts.levels, "Cascade levels k (2^k values)")->capture_default_str();
  synth_cmd->add_option("--a", synth_opts.weight, "Cascade weight, 0.5 < a < 1")->capture_default_str();
  synth_cmd->add_option("--hurst", synth_opts.hurst, "fGn Hurst exponent")->capture_default_str();
  synth_cmd->add_option("--length", synth_opts.length, "Series length for fgn/gaussian")->capture_default_str();
  synth_cmd->add_option("--seed", synth_opts.seed)->capture_default_str();
  synth_cmd->add_option("--out", synth_opts.out, "Output CSV path")->required();

  std::string manifest_path;
  std::optional<std::string> replay_out;
  std::optional<std::string> replay_input;
  auto* replay_cmd = app.add_subcommand("replay", "Re-run the analysis recorded in a manifest");
  replay_cmd->add_option("manifest", manifest_path)->required();
  replay_cmd->add_option("--out", replay_out, "Output directory (default .)");
  replay_cmd->add_option("--input", replay_input, "Override the recorded input path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*analyze_cmd) return run_command("analyze", analyze_opts);
    if (*surrogate_cmd) return run_command("surrogate", surrogate_opts);
    if (*synth_cmd) return synth(synth_opts);
    if (*replay_cmd) return replay(manifest_path, replay_out, replay_input);
  } catch (const Failure& f) {
    std::cerr << "error: " << smfdfa_status_name(f.status) << ": " << f.detail << "\n";
    return exit_code_for(f.status);
  } catch (const std::exception& e) {
    std::cerr << "error: Internal: " << e.what() << "\n";
    return kExitNumeric;
  }
  return kExitUsage;
}
