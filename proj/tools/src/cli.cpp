// Copyright 2026 The barrierfree Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "cli.hpp"

#include <openssl/evp.h>

#include <CLI11.hpp>
#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>

#include "barrierfree/ap_eval.hpp"
#include "barrierfree/controller_io.hpp"
#include "barrierfree/dataset.hpp"
#include "barrierfree/error.hpp"
#include "barrierfree/selfcheck.hpp"

#ifndef BARRIERFREE_VERSION
#define BARRIERFREE_VERSION "0.0.0"
#endif

namespace barrierfree::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

constexpr int kExitFailure = 1;
constexpr int kExitInputError = 2;
constexpr int kManifestSchema = 1;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Writes `name` under `dir` and records it in the manifest.
void emit(const fs::path& dir, const std::string& name, const std::string& content,
          RunManifest& manifest) {
  std::ofstream out(dir / name, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write '" + (dir / name).string() + "'");
  out << content;
  if (!out) throw ConfigError("write failed for '" + (dir / name).string() + "'");
  manifest.outputs.push_back(name);
}

void finish(const fs::path& dir, RunManifest& manifest) {
  manifest.outputs.push_back("manifest.json");
  std::ofstream out(dir / "manifest.json", std::ios::binary | std::ios::trunc);
  out << manifest_to_json(manifest).dump(2) << '\n';
  if (!out) throw ConfigError("cannot write manifest in '" + dir.string() + "'");
}

RunManifest make_manifest(std::string command, std::string digest) {
  RunManifest m;
  m.command = std::move(command);
  m.config_digest = std::move(digest);
  return m;
}

fs::path prepare_out(const std::string& out_dir) {
  fs::path dir(out_dir.empty() ? default_out_dir() : out_dir);
  fs::create_directories(dir);
  return dir;
}

// Digest over the sorted regular files of a directory.
std::string directory_digest(const std::string& path) {
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(path)) {
    if (e.is_regular_file()) files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  std::string acc;
  for (const auto& f : files) {
    acc += f.filename().string();
    acc += '\0';
    acc += sha256_hex(read_file(f.string()));
    acc += '\n';
  }
  return "sha256:" + sha256_hex(acc);
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

// ---- kernels ---------------------------------------------------------------

struct SelfcheckArgs {
  int cases = 1000;
  std::uint64_t seed = kernels::SelfCheckOptions{}.seed;
  std::string inject_fault;
  std::string out;
};

int cmd_selfcheck(const SelfcheckArgs& args) {
  const fs::path dir = prepare_out(args.out);
  kernels::SelfCheckOptions opts{
      .cases = args.cases, .seed = args.seed, .inject_fault = args.inject_fault};
  const auto results = kernels::run_selfcheck(opts);
  std::string report;
  bool all = true;
  for (const auto& r : results) {
    char line[256];
    std::snprintf(line, sizeof(line), "%s %-26s cases=%d max_error=%.3e tolerance=%.1e\n",
                  r.passed ? "PASS" : "FAIL", r.name.c_str(), r.cases, r.max_error,
                  r.tolerance);
    report += line;
    all = all && r.passed;
  }
  std::cout << report;
  RunManifest m = make_manifest("kernels selfcheck", config_digest(json{{"cases", args.cases},
                                                    {"inject_fault", args.inject_fault}}));
  m.seeds["seed"] = args.seed;
  emit(dir, "selfcheck.txt", report, m);
  finish(dir, m);
  if (!all) {
    for (const auto& r : results) {
      if (!r.passed) std::cerr << "failing property: " << r.name << '\n';
    }
    return kExitFailure;
  }
  return 0;
}

// ---- sim -------------------------------------------------------------------

struct SimArgs {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string ablate;
};

sim::ScenarioConfig resolve_scenario(const SimArgs& args) {
  auto cfg = args.config.empty() ? sim::ScenarioConfig::defaults()
                                 : sim::load_scenario_config(args.config);
  if (args.seed) cfg.rng_seed = *args.seed;
  cfg.validate();
  return cfg;
}

int cmd_sim_run(const SimArgs& args) {
  const auto cfg = resolve_scenario(args);
  const fs::path dir = prepare_out(args.out);
  json canonical{{"scenario", sim::scenario_config_to_json(cfg)}};
  std::vector<int> ns;
  if (!args.ablate.empty()) {
    ns = parse_n_list(args.ablate);
    canonical["ablate_n"] = ns;
  }
  RunManifest m = make_manifest("sim run", config_digest(canonical));
  m.seeds["rng_seed"] = cfg.rng_seed;
  m.seeds["ensemble_size"] = cfg.ensemble_size;

  std::string metrics;
  if (ns.empty()) {
    metrics = std::string(sim::kMetricsCsvHeader) + "\n" +
              sim::metrics_csv_row(cfg.validation_frames, sim::run_ensemble(cfg)) + "\n";
    emit(dir, "metrics.csv", metrics, m);
  } else {
    const auto rows = sim::ablate_n(cfg, ns);
    metrics = sim::ablation_csv(rows);
    emit(dir, "metrics.csv", metrics, m);
    emit(dir, "ablation_report.csv", ablation_report_csv(rows), m);
  }

  // One traced member for the event and command logs.
  const auto trace = sim::run_scenario(cfg);
  std::ostringstream events, commands;
  control::write_event_stream(events, trace.frames);
  control::write_command_log(commands, trace.commands);
  emit(dir, "events.jsonl", events.str(), m);
  emit(dir, "commands.jsonl", commands.str(), m);
  emit(dir, "controller.json",
       control::controller_config_to_json(cfg.controller_config()).dump(2) + "\n", m);
  emit(dir, "scenario.json", sim::scenario_config_to_json(cfg).dump(2) + "\n", m);
  finish(dir, m);
  std::cout << metrics;
  return 0;
}

int cmd_sim_ablate(const SimArgs& args) {
  const auto cfg = resolve_scenario(args);
  const auto ns = parse_n_list(args.ablate.empty() ? "1..5" : args.ablate);
  const fs::path dir = prepare_out(args.out);
  json canonical{{"scenario", sim::scenario_config_to_json(cfg)}, {"ablate_n", ns}};
  RunManifest m = make_manifest("sim ablate-n", config_digest(canonical));
  m.seeds["rng_seed"] = cfg.rng_seed;
  m.seeds["ensemble_size"] = cfg.ensemble_size;
  const auto rows = sim::ablate_n(cfg, ns);
  const std::string csv = sim::ablation_csv(rows);
  const std::string report = ablation_report_csv(rows);
  emit(dir, "ablation.csv", csv, m);
  emit(dir, "ablation_report.csv", report, m);
  finish(dir, m);
  std::cout << report;
  return 0;
}

// ---- controller ------------------------------------------------------------

struct ReplayArgs {
  std::string events;
  std::string config;
  std::string out;
};

int cmd_replay(const ReplayArgs& args) {
  const auto config = control::load_controller_config(args.config);
  const auto frames = control::read_event_file(args.events);
  const auto commands = control::replay(config, frames);
  const fs::path dir = prepare_out(args.out);

  int phases = 0, total = 0, boost_s = 0;
  for (const auto& c : commands) {
    phases += c.green_ended ? 1 : 0;
    total += c.extend_green_by;
    boost_s += c.audible_boost ? 1 : 0;
  }
  ordered_json summary;
  summary["commands"] = commands.size();
  summary["green_phases"] = phases;
  summary["total_extension_s"] = total;
  summary["audible_boost_s"] = boost_s;

  RunManifest m = make_manifest("controller replay", config_digest(control::controller_config_to_json(config)));
  m.inputs["events"] = file_digest(args.events);
  std::ostringstream log;
  control::write_command_log(log, commands);
  emit(dir, "commands.jsonl", log.str(), m);
  emit(dir, "summary.json", summary.dump(2) + "\n", m);
  finish(dir, m);
  std::cout << "green_phases=" << phases << " total_extension_s=" << total
            << " audible_boost_s=" << boost_s << '\n';
  return 0;
}

// ---- dataset ---------------------------------------------------------------

struct DatasetArgs {
  std::string labels;
  std::string names;
  std::string predictions;
  std::string image_size = "640x512";
  std::uint64_t seed = 0;
  double ratio = 0.8;
  std::string out;
};

int cmd_dataset_stats(const DatasetArgs& args) {
  const auto records = dataset::parse_annotations(args.labels, args.names);
  const auto dist = dataset::class_distribution(records);
  const fs::path dir = prepare_out(args.out);

  std::string hist = "class_index,class_name,count\n";
  ordered_json counts = ordered_json::object();
  for (int c = 0; c < detection::kNumClasses; ++c) {
    const auto name = std::string(detection::class_name(detection::class_from_index(c)));
    const auto n = dist.counts[static_cast<std::size_t>(c)];
    hist += std::to_string(c) + "," + name + "," + std::to_string(n) + "\n";
    counts[name] = n;
  }
  std::string seasons = "season,images\n";
  ordered_json per_season = ordered_json::object();
  for (const auto& [season, n] : dist.images_per_season) {
    seasons += std::string(dataset::season_name(season)) + "," + std::to_string(n) + "\n";
    per_season[std::string(dataset::season_name(season))] = n;
  }
  std::set<std::string> images;
  for (const auto& r : records) images.insert(r.image_id);
  ordered_json stats;
  stats["boxes"] = dist.total();
  stats["images"] = images.size();
  stats["imbalance_ratio"] = dist.imbalance_ratio;
  stats["counts"] = counts;
  stats["images_per_season"] = per_season;

  RunManifest m = make_manifest("dataset stats", config_digest(json::object()));
  m.inputs["labels"] = directory_digest(args.labels);
  m.inputs["names"] = file_digest(args.names);
  emit(dir, "histogram.csv", hist, m);
  emit(dir, "seasons.csv", seasons, m);
  emit(dir, "stats.json", stats.dump(2) + "\n", m);
  finish(dir, m);
  std::cout << hist << "imbalance_ratio," << fmt_double(dist.imbalance_ratio) << '\n';
  return 0;
}

int cmd_dataset_split(const DatasetArgs& args) {
  const auto records = dataset::parse_annotations(args.labels, args.names);
  const auto split = dataset::split_dataset(records, args.ratio, args.seed);
  const fs::path dir = prepare_out(args.out);
  auto lines = [](const std::vector<std::string>& ids) {
    std::string s;
    for (const auto& id : ids) s += id + "\n";
    return s;
  };
  RunManifest m = make_manifest("dataset split", config_digest(json{{"ratio", args.ratio}}));
  m.seeds["seed"] = args.seed;
  m.inputs["labels"] = directory_digest(args.labels);
  m.inputs["names"] = file_digest(args.names);
  emit(dir, "train.txt", lines(split.train), m);
  emit(dir, "eval.txt", lines(split.eval), m);
  finish(dir, m);
  std::cout << "train=" << split.train.size() << " eval=" << split.eval.size() << '\n';
  return 0;
}

int cmd_dataset_eval(const DatasetArgs& args) {
  const auto [w, h] = parse_image_size(args.image_size);
  const auto records = dataset::parse_annotations(args.labels, args.names);
  const auto gt = eval::ground_truth_from_annotations(records, w, h);
  const auto preds = eval::read_predictions_file(args.predictions);
  const auto r = eval::evaluate_ap(preds, gt);
  const fs::path dir = prepare_out(args.out);
  const std::string csv =
      std::string(eval::kEvalCsvHeader) + "\n" + eval::eval_csv_row(r) + "\n";
  ordered_json doc;
  doc["AP"] = r.ap;
  doc["AP50"] = r.ap50;
  doc["AP75"] = r.ap75;
  doc["AP_S"] = r.ap_s;
  doc["AP_L"] = r.ap_l;
  RunManifest m = make_manifest("dataset eval-ap", config_digest(json{{"image_width", w}, {"image_height", h}}));
  m.inputs["labels"] = directory_digest(args.labels);
  m.inputs["names"] = file_digest(args.names);
  m.inputs["predictions"] = file_digest(args.predictions);
  emit(dir, "eval.csv", csv, m);
  emit(dir, "eval.json", doc.dump(2) + "\n", m);
  finish(dir, m);
  std::cout << csv;
  return 0;
}

int cmd_dataset_names(const DatasetArgs& args) {
  const fs::path dir = prepare_out(args.out);
  RunManifest m = make_manifest("dataset names", config_digest(json::object()));
  emit(dir, "classes.names", detection::names_file_contents(), m);
  finish(dir, m);
  std::cout << detection::names_file_contents();
  return 0;
}

}  // namespace

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 computation failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 0xf];
  }
  return out;
}

std::string config_digest(const json& canonical) {
  // nlohmann::json keeps object keys sorted, so dump() is canonical.
  return "sha256:" + sha256_hex(canonical.dump());
}

std::string file_digest(const std::string& path) { return "sha256:" + sha256_hex(read_file(path)); }

ordered_json manifest_to_json(const RunManifest& m) {
  ordered_json doc;
  doc["schema"] = kManifestSchema;
  doc["command"] = m.command;
  doc["config_digest"] = m.config_digest;
  doc["seeds"] = m.seeds;
  doc["inputs"] = m.inputs;
  doc["versions"] = {{"barrierfree", BARRIERFREE_VERSION}};
  doc["outputs"] = m.outputs;
  return doc;
}

std::vector<int> parse_n_list(const std::string& text) {
  auto parse_int = [&](std::string_view s) {
    int v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || v < 1) {
      throw ConfigError("invalid validation depth '" + std::string(s) + "' in '" + text + "'");
    }
    return v;
  };
  std::vector<int> out;
  const auto dots = text.find("..");
  if (dots != std::string::npos) {
    const int lo = parse_int(std::string_view(text).substr(0, dots));
    const int hi = parse_int(std::string_view(text).substr(dots + 2));
    if (hi < lo) throw ConfigError("empty range '" + text + "'");
    for (int n = lo; n <= hi; ++n) out.push_back(n);
    return out;
  }
  std::string_view rest(text);
  while (true) {
    const auto comma = rest.find(',');
    out.push_back(parse_int(rest.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return out;
}

std::pair<double, double> parse_image_size(const std::string& text) {
  const auto x = text.find('x');
  auto parse = [&](std::string_view s) {
    int v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || v < 1) {
      throw ConfigError("invalid image size '" + text + "' (expected WIDTHxHEIGHT)");
    }
    return static_cast<double>(v);
  };
  if (x == std::string::npos) throw ConfigError("invalid image size '" + text + "' (expected WIDTHxHEIGHT)");
  return {parse(std::string_view(text).substr(0, x)), parse(std::string_view(text).substr(x + 1))};
}

std::string ablation_report_csv(std::span<const sim::AblationRow> rows) {
  std::string out = std::string(sim::kMetricsCsvHeader) +
                    ",ref_success_rate,ref_latency_s,ref_real_success_rate,"
                    "ref_avg_ext_walking,ref_avg_ext_visual,ref_avg_ext_burden\n";
  for (const auto& row : rows) {
    out += sim::metrics_csv_row(row.validation_frames, row.metrics);
    const auto& table = sim::reference_table();
    const auto it = std::find_if(table.begin(), table.end(), [&](const sim::ReferenceRow& r) {
      return r.n == row.validation_frames;
    });
    if (it == table.end()) {
      out += ",,,,,,\n";
      continue;
    }
    char buf[128];
    std::snprintf(buf, sizeof(buf), ",%.1f,%.1f,%.1f,%.1f,%.1f,%.1f\n", it->success_rate,
                  it->latency_s, it->real_success_rate, it->avg_extended_green_s[0],
                  it->avg_extended_green_s[1], it->avg_extended_green_s[2]);
    out += buf;
  }
  return out;
}

std::string default_out_dir() {
  const char* env = std::getenv(kOutDirEnv);
  return env != nullptr && *env != '\0' ? std::string(env) : std::string(kDefaultOutDir);
}

int run(int argc, const char* const* argv) {
  CLI::App app{"Adaptive pedestrian signal toolkit for thermal-camera intersections",
               "barrierfree"};
  app.require_subcommand(1);
  app.set_version_flag("--version", BARRIERFREE_VERSION);
  const std::string out_help = "Output directory (default: $" + std::string(kOutDirEnv) +
                               " or ./" + kDefaultOutDir + ")";

  auto* kernels_cmd = app.add_subcommand("kernels", "Numerical kernel checks");
  kernels_cmd->require_subcommand(1);
  SelfcheckArgs sc;
  auto* selfcheck = kernels_cmd->add_subcommand("selfcheck", "Run the kernel invariant suite");
  selfcheck->add_option("--cases", sc.cases, "Random cases per property")
      ->check(CLI::PositiveNumber);
  selfcheck->add_option("--seed", sc.seed, "Generator seed");
  selfcheck->add_option("--inject-fault", sc.inject_fault,
                        "Swap in a broken kernel for the named property");
  selfcheck->add_option("--out", sc.out, out_help);

  auto* sim_cmd = app.add_subcommand("sim", "Intersection simulator");
  sim_cmd->require_subcommand(1);
  SimArgs sa;
  std::uint64_t seed_value = 0;
  auto add_sim_flags = [&](CLI::App* sub) {
    sub->add_option("--config", sa.config, "Scenario config (JSON); defaults when omitted")
        ->check(CLI::ExistingFile);
    sub->add_option("--seed", seed_value, "Override the config's rng_seed");
    sub->add_option("--out", sa.out, out_help);
    sub->add_option("--ablate-n", sa.ablate, "Validation depths, e.g. 1..5 or 1,2,4");
  };
  auto* sim_run = sim_cmd->add_subcommand("run", "Run a scenario ensemble");
  add_sim_flags(sim_run);
  auto* sim_ablate = sim_cmd->add_subcommand("ablate-n", "Sweep the validation depth N");
  add_sim_flags(sim_ablate);

  auto* controller_cmd = app.add_subcommand("controller", "Signal controller");
  controller_cmd->require_subcommand(1);
  ReplayArgs ra;
  auto* replay = controller_cmd->add_subcommand("replay", "Replay a detection event log");
  replay->add_option("--events", ra.events, "Detection events (JSON lines)")
      ->required()
      ->check(CLI::ExistingFile);
  replay->add_option("--config", ra.config, "Controller config (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  replay->add_option("--out", ra.out, out_help);

  auto* dataset_cmd = app.add_subcommand("dataset", "Annotation tooling");
  dataset_cmd->require_subcommand(1);
  DatasetArgs da;
  auto add_label_flags = [&](CLI::App* sub) {
    sub->add_option("--labels", da.labels, "Directory of per-image label files")
        ->required()
        ->check(CLI::ExistingDirectory);
    sub->add_option("--names", da.names, "Class names file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", da.out, out_help);
  };
  auto* stats = dataset_cmd->add_subcommand("stats", "Class histogram and season counts");
  add_label_flags(stats);
  auto* split = dataset_cmd->add_subcommand("split", "Seeded train/eval split by image");
  add_label_flags(split);
  split->add_option("--seed", da.seed, "Shuffle seed");
  split->add_option("--ratio", da.ratio, "Training fraction")->check(CLI::Range(0.0, 1.0));
  auto* eval_ap = dataset_cmd->add_subcommand("eval-ap", "COCO-style AP of predictions");
  add_label_flags(eval_ap);
  eval_ap->add_option("--predictions", da.predictions, "Predictions (JSON lines, pixels)")
      ->required()
      ->check(CLI::ExistingFile);
  eval_ap->add_option("--image-size", da.image_size, "Image size WIDTHxHEIGHT");
  auto* names = dataset_cmd->add_subcommand("names", "Write the class names file");
  names->add_option("--out", da.out, out_help);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  if (sim_run->count("--seed") > 0 || sim_ablate->count("--seed") > 0) sa.seed = seed_value;

  try {
    if (*selfcheck) return cmd_selfcheck(sc);
    if (*sim_run) return cmd_sim_run(sa);
    if (*sim_ablate) return cmd_sim_ablate(sa);
    if (*replay) return cmd_replay(ra);
    if (*stats) return cmd_dataset_stats(da);
    if (*split) return cmd_dataset_split(da);
    if (*eval_ap) return cmd_dataset_eval(da);
    if (*names) return cmd_dataset_names(da);
  } catch (const std::invalid_argument& e) {
    std::cerr << "barrierfree: error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "barrierfree: error: " << e.what() << '\n';
    return kExitInputError;
  }
  return kExitInputError;
}

}  // namespace barrierfree::cli
