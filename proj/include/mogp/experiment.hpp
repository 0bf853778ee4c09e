#pragma once

// Experiment orchestration: named run configurations, seed derivation from
// human-readable keys, line-delimited JSON result persistence, the resumable
// factorial campaign, and CSV report generation.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <utility>
#include <vector>

#include "json.hpp"
#include "mogp/dataset.hpp"
#include "mogp/engine.hpp"
#include "mogp/errors.hpp"
#include "mogp/metrics.hpp"
#include "mogp/stats.hpp"

namespace mogp {

inline std::string scheme_name(Scheme s) { return s == Scheme::nsga2 ? "nsga2" : "spea2"; }

inline Scheme scheme_id(const std::string& name) {
  if (name == "nsga2") return Scheme::nsga2;
  if (name == "spea2") return Scheme::spea2;
  throw DataError("unknown scheme: '" + name + "'");
}

inline std::string variant_name(Variant v) {
  switch (v) {
    case Variant::baseline: return "baseline";
    case Variant::ssc: return "ssc";
    case Variant::scd: return "scd";
    case Variant::sdo: return "sdo";
  }
  throw ContractError("variant_name: bad enum");
}

inline Variant variant_id(const std::string& name) {
  if (name == "baseline") return Variant::baseline;
  if (name == "ssc") return Variant::ssc;
  if (name == "scd") return Variant::scd;
  if (name == "sdo") return Variant::sdo;
  throw DataError("unknown variant: '" + name + "'");
}

// Shortest exact decimal form, shared by seed keys, file names, and CSVs.
inline std::string format_real(double v) {
  for (int precision = 1; precision < 17; ++precision) {
    char shorter[40];
    std::snprintf(shorter, sizeof shorter, "%.*g", precision, v);
    double parsed = 0.0;
    std::sscanf(shorter, "%lf", &parsed);
    if (parsed == v) return shorter;
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct ExperimentConfig {
  std::string dataset;
  Scheme scheme = Scheme::nsga2;
  Variant variant = Variant::baseline;
  std::optional<SemanticThresholds> thresholds;
  int ssc_max_trials = 20;
  std::size_t pop_size = 500;
  std::size_t generations = 50;
  int init_min_depth = 1;
  int init_max_depth = 5;
  VariationParams variation{};
  std::size_t runs = 50;
  std::uint64_t base_seed = 1;
  std::uint64_t split_seed = 1;
  bool shared_split = true;  // all runs of a dataset reuse one train/test split

  bool operator==(const ExperimentConfig&) const = default;
};

inline EngineConfig engine_config(const ExperimentConfig& cfg) {
  EngineConfig e;
  e.scheme = cfg.scheme;
  e.variant = cfg.variant;
  e.thresholds = cfg.thresholds;
  e.ssc_max_trials = cfg.ssc_max_trials;
  e.pop_size = cfg.pop_size;
  e.generations = cfg.generations;
  e.init_min_depth = cfg.init_min_depth;
  e.init_max_depth = cfg.init_max_depth;
  e.variation = cfg.variation;
  return e;
}

// Threshold cell label: "-" (none), "u0.5", or "l0.001-u0.5".
inline std::string cell_label(const std::optional<SemanticThresholds>& t) {
  if (!t) return "-";
  std::string out;
  if (t->lbss) out += "l" + format_real(*t->lbss) + "-";
  return out + "u" + format_real(t->ubss);
}

inline std::string run_id(const ExperimentConfig& cfg, std::size_t run_index) {
  return cfg.dataset + "_" + scheme_name(cfg.scheme) + "_" + variant_name(cfg.variant) + "_" +
         cell_label(cfg.thresholds) + "_r" + std::to_string(run_index);
}

// Seeds hash human-readable keys so every (config, run) pair owns an
// independent stream and adding configs never perturbs existing runs.
inline std::uint64_t run_seed(const ExperimentConfig& cfg, std::size_t run_index) {
  const std::string lbss =
      cfg.thresholds && cfg.thresholds->lbss ? format_real(*cfg.thresholds->lbss) : "-";
  const std::string ubss = cfg.thresholds ? format_real(cfg.thresholds->ubss) : "-";
  return hash_seed(std::to_string(cfg.base_seed) + "|" + cfg.dataset + "|" +
                   scheme_name(cfg.scheme) + "|" + variant_name(cfg.variant) + "|" + lbss + "|" +
                   ubss + "|" + std::to_string(run_index));
}

inline std::uint64_t split_stream_seed(const ExperimentConfig& cfg, std::size_t run_index) {
  std::string key = "split|" + std::to_string(cfg.split_seed) + "|" + cfg.dataset;
  if (!cfg.shared_split) key += "|" + std::to_string(run_index);
  return hash_seed(key);
}

// ---------------------------------------------------------------------------
// Result persistence: one JSON line per run, written atomically.

inline std::string serialize_run(const RunResult& r) {
  nlohmann::json j;
  j["run_id"] = r.run_id;
  j["seed"] = r.seed;
  j["dataset"] = r.dataset;
  j["scheme"] = scheme_name(r.scheme);
  j["variant"] = variant_name(r.variant);
  j["lbss"] = r.thresholds && r.thresholds->lbss ? nlohmann::json(*r.thresholds->lbss)
                                                 : nlohmann::json(nullptr);
  j["ubss"] = r.thresholds ? nlohmann::json(r.thresholds->ubss) : nlohmann::json(nullptr);
  nlohmann::json front = nlohmann::json::array();
  for (const FrontPoint& p : r.final_front.points())
    front.push_back(nlohmann::json::array({p.tp, p.fn, p.fp, p.tn}));
  j["front"] = std::move(front);
  j["hyperarea"] = r.hypervolume;
  j["mean_tree_size"] = r.mean_tree_size;
  j["sizes"] = r.per_generation_sizes;
  return j.dump();
}

inline RunResult parse_run(const std::string& line) {
  try {
    const nlohmann::json j = nlohmann::json::parse(line);
    RunResult r;
    r.run_id = j.at("run_id").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.dataset = j.at("dataset").get<std::string>();
    r.scheme = scheme_id(j.at("scheme").get<std::string>());
    r.variant = variant_id(j.at("variant").get<std::string>());
    const nlohmann::json& lbss = j.at("lbss");
    const nlohmann::json& ubss = j.at("ubss");
    if (!ubss.is_null()) {
      SemanticThresholds t{ubss.get<double>(), std::nullopt};
      if (!lbss.is_null()) t.lbss = lbss.get<double>();
      r.thresholds = t;
    } else if (!lbss.is_null()) {
      throw DataError("result parse: lbss without ubss");
    }
    for (const nlohmann::json& p : j.at("front")) {
      if (!p.is_array() || p.size() != 4) throw DataError("result parse: bad front point");
      const FrontPoint point{p[0].get<std::int64_t>(), p[1].get<std::int64_t>(),
                             p[2].get<std::int64_t>(), p[3].get<std::int64_t>()};
      if (!r.final_front.insert(point))
        throw DataError("result parse: front points are not mutually non-dominated");
    }
    r.hypervolume = j.at("hyperarea").get<double>();
    r.mean_tree_size = j.at("mean_tree_size").get<double>();
    r.per_generation_sizes = j.at("sizes").get<std::vector<double>>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("result parse: ") + e.what());
  }
}

inline void write_text_atomic(const std::filesystem::path& path, const std::string& content) {
  if (!path.parent_path().empty()) std::filesystem::create_directories(path.parent_path());
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write: " + tmp.string());
    out << content;
    out.flush();
    if (!out.good()) throw DataError("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

inline std::filesystem::path run_file_path(const std::filesystem::path& dir,
                                           const std::string& id) {
  return dir / (id + ".json");
}

inline void write_run_file(const std::filesystem::path& dir, const RunResult& r) {
  write_text_atomic(run_file_path(dir, r.run_id), serialize_run(r) + "\n");
}

// Valid, matching result file -> the parsed result; anything else -> nullopt.
inline std::optional<RunResult> try_read_run_file(const std::filesystem::path& path,
                                                  const std::string& expected_id) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::string line;
  if (!std::getline(in, line)) return std::nullopt;
  try {
    RunResult r = parse_run(line);
    if (r.run_id != expected_id) return std::nullopt;
    return r;
  } catch (const DataError&) {
    return std::nullopt;
  }
}

// ---------------------------------------------------------------------------
// Single runs and campaigns.

inline RunResult run_one(const ExperimentConfig& cfg, std::size_t run_index,
                         const Dataset& data) {
  if (data.name != cfg.dataset)
    throw DataError("run_one: config wants dataset '" + cfg.dataset + "' but got '" + data.name +
                    "'");
  check_engine_config(engine_config(cfg));
  const SplitDataset split = stratified_split(data, split_stream_seed(cfg, run_index));
  const std::uint64_t seed = run_seed(cfg, run_index);
  EvolutionResult outcome = evolve(engine_config(cfg), split, seed);
  RunResult r;
  r.run_id = run_id(cfg, run_index);
  r.seed = seed;
  r.dataset = cfg.dataset;
  r.scheme = cfg.scheme;
  r.variant = cfg.variant;
  r.thresholds = cfg.thresholds;
  r.final_front = std::move(outcome.test_front);
  r.hypervolume = outcome.test_hyperarea;
  r.mean_tree_size = outcome.mean_tree_size;
  r.per_generation_sizes = std::move(outcome.per_generation_sizes);
  return r;
}

struct CampaignEntry {
  std::string run_id;
  std::string file;
  std::string status;  // "ok", "cached", or "failed: <reason>"
};

struct CampaignManifest {
  std::vector<CampaignEntry> entries;
  std::size_t executed = 0;
  std::size_t cached = 0;
  std::size_t failed = 0;
};

// Expands configs into one task per run.
struct CampaignTask {
  ExperimentConfig config;
  std::size_t run_index = 0;
};

inline std::vector<CampaignTask> campaign_tasks(const std::vector<ExperimentConfig>& configs) {
  std::vector<CampaignTask> tasks;
  for (const ExperimentConfig& cfg : configs)
    for (std::size_t i = 0; i < cfg.runs; ++i) tasks.push_back(CampaignTask{cfg, i});
  return tasks;
}

// Executes every (config, run) task, skipping tasks whose result files
// already exist and validate.  Failures are recorded in the manifest and
// never abort the campaign.  The manifest is written to
// output_dir/manifest.tsv.
inline CampaignManifest run_campaign(const std::vector<ExperimentConfig>& configs,
                                     const std::map<std::string, Dataset>& datasets,
                                     const std::filesystem::path& output_dir,
                                     unsigned parallelism = 1) {
  std::filesystem::create_directories(output_dir);
  const std::vector<CampaignTask> tasks = campaign_tasks(configs);
  std::vector<CampaignEntry> entries(tasks.size());

  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < tasks.size(); i = next.fetch_add(1)) {
      const CampaignTask& task = tasks[i];
      const std::string id = run_id(task.config, task.run_index);
      const std::filesystem::path file = run_file_path(output_dir, id);
      CampaignEntry entry{id, file.string(), ""};
      try {
        if (try_read_run_file(file, id)) {
          entry.status = "cached";
        } else {
          const auto found = datasets.find(task.config.dataset);
          if (found == datasets.end())
            throw DataError("dataset not ingested: '" + task.config.dataset + "'");
          write_run_file(output_dir, run_one(task.config, task.run_index, found->second));
          entry.status = "ok";
        }
      } catch (const std::exception& e) {
        entry.status = std::string("failed: ") + e.what();
      }
      entries[i] = std::move(entry);
    }
  };

  const unsigned thread_count = std::max(1u, std::min<unsigned>(parallelism, tasks.size()));
  if (thread_count <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < thread_count; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  CampaignManifest manifest;
  manifest.entries = std::move(entries);
  std::string tsv = "run_id\tfile\tstatus\n";
  for (const CampaignEntry& entry : manifest.entries) {
    tsv += entry.run_id + "\t" + entry.file + "\t" + entry.status + "\n";
    if (entry.status == "ok")
      ++manifest.executed;
    else if (entry.status == "cached")
      ++manifest.cached;
    else
      ++manifest.failed;
  }
  write_text_atomic(output_dir / "manifest.tsv", tsv);
  return manifest;
}

// The full factorial grid: per dataset, two plain baselines plus every
// (scheme, semantic variant, threshold combination) cell.
inline std::vector<double> ubss_grid() { return {0.25, 0.5, 0.75, 1.0}; }

inline std::vector<std::optional<double>> lbss_grid() {
  return {std::nullopt, 0.001, 0.01, 0.1};
}

inline std::vector<ExperimentConfig> full_grid(const ExperimentConfig& base,
                                               const std::vector<std::string>& datasets) {
  std::vector<ExperimentConfig> out;
  for (const std::string& dataset : datasets)
    for (Scheme scheme : {Scheme::nsga2, Scheme::spea2}) {
      ExperimentConfig cfg = base;
      cfg.dataset = dataset;
      cfg.scheme = scheme;
      cfg.variant = Variant::baseline;
      cfg.thresholds.reset();
      out.push_back(cfg);
      for (Variant variant : {Variant::ssc, Variant::scd, Variant::sdo})
        for (double ubss : ubss_grid())
          for (const std::optional<double>& lbss : lbss_grid()) {
            cfg.variant = variant;
            cfg.thresholds = SemanticThresholds{ubss, lbss};
            out.push_back(cfg);
          }
    }
  return out;
}

// ---------------------------------------------------------------------------
// Flat key=value configuration files.

struct ParsedConfig {
  ExperimentConfig config;                // shared settings (dataset if singular)
  std::vector<std::string> datasets;      // for campaigns; empty means {config.dataset}
  bool grid_full = false;                 // expand the full factorial grid
};

namespace detail {

inline bool parse_bool(const std::string& token, const std::string& origin, std::size_t line) {
  if (token == "true" || token == "1") return true;
  if (token == "false" || token == "0") return false;
  throw DataError(origin + ": line " + std::to_string(line) + ": not a boolean: '" + token + "'");
}

}  // namespace detail

inline ParsedConfig parse_config_text(const std::string& text, const std::string& origin) {
  ParsedConfig parsed;
  std::optional<double> ubss;
  std::optional<double> lbss;
  std::istringstream in(text);
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    const std::size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const auto is_space = [](char c) { return c == ' ' || c == '\t'; };
    std::string trimmed;
    trimmed = raw;
    trimmed.erase(trimmed.begin(),
                  std::find_if_not(trimmed.begin(), trimmed.end(), is_space));
    while (!trimmed.empty() && is_space(trimmed.back())) trimmed.pop_back();
    if (trimmed.empty()) continue;
    const std::size_t eq = trimmed.find('=');
    if (eq == std::string::npos)
      throw DataError(origin + ": line " + std::to_string(line_no) + ": expected key = value");
    std::string key = trimmed.substr(0, eq);
    std::string value = trimmed.substr(eq + 1);
    while (!key.empty() && is_space(key.back())) key.pop_back();
    value.erase(value.begin(), std::find_if_not(value.begin(), value.end(), is_space));
    if (key.empty() || value.empty())
      throw DataError(origin + ": line " + std::to_string(line_no) + ": expected key = value");

    ExperimentConfig& cfg = parsed.config;
    if (key == "dataset") {
      cfg.dataset = value;
    } else if (key == "datasets") {
      for (std::string& name : detail::split_on_comma(value)) {
        name.erase(name.begin(), std::find_if_not(name.begin(), name.end(), is_space));
        while (!name.empty() && is_space(name.back())) name.pop_back();
        if (!name.empty()) parsed.datasets.push_back(std::move(name));
      }
    } else if (key == "scheme") {
      cfg.scheme = scheme_id(value);
    } else if (key == "variant") {
      cfg.variant = variant_id(value);
    } else if (key == "ubss") {
      if (value != "-") ubss = detail::parse_real(value, origin, line_no);
    } else if (key == "lbss") {
      if (value != "-") lbss = detail::parse_real(value, origin, line_no);
    } else if (key == "ssc_max_trials") {
      cfg.ssc_max_trials = static_cast<int>(detail::parse_integer(value, origin, line_no));
    } else if (key == "pop_size") {
      cfg.pop_size = static_cast<std::size_t>(detail::parse_integer(value, origin, line_no));
    } else if (key == "generations") {
      cfg.generations = static_cast<std::size_t>(detail::parse_integer(value, origin, line_no));
    } else if (key == "init_min_depth") {
      cfg.init_min_depth = static_cast<int>(detail::parse_integer(value, origin, line_no));
    } else if (key == "init_max_depth") {
      cfg.init_max_depth = static_cast<int>(detail::parse_integer(value, origin, line_no));
    } else if (key == "crossover_rate") {
      cfg.variation.crossover_rate = detail::parse_real(value, origin, line_no);
    } else if (key == "mutation_rate") {
      cfg.variation.mutation_rate = detail::parse_real(value, origin, line_no);
    } else if (key == "internal_node_bias") {
      cfg.variation.internal_node_bias = detail::parse_real(value, origin, line_no);
    } else if (key == "tournament_size") {
      cfg.variation.tournament_size =
          static_cast<std::size_t>(detail::parse_integer(value, origin, line_no));
    } else if (key == "max_length") {
      cfg.variation.max_length =
          static_cast<std::size_t>(detail::parse_integer(value, origin, line_no));
    } else if (key == "max_depth") {
      cfg.variation.max_depth = static_cast<int>(detail::parse_integer(value, origin, line_no));
    } else if (key == "runs") {
      cfg.runs = static_cast<std::size_t>(detail::parse_integer(value, origin, line_no));
    } else if (key == "base_seed") {
      cfg.base_seed = static_cast<std::uint64_t>(detail::parse_integer(value, origin, line_no));
    } else if (key == "split_seed") {
      cfg.split_seed = static_cast<std::uint64_t>(detail::parse_integer(value, origin, line_no));
    } else if (key == "shared_split") {
      cfg.shared_split = detail::parse_bool(value, origin, line_no);
    } else if (key == "grid") {
      if (value == "full")
        parsed.grid_full = true;
      else if (value == "single")
        parsed.grid_full = false;
      else
        throw DataError(origin + ": line " + std::to_string(line_no) + ": grid must be full or single");
    } else {
      throw DataError(origin + ": line " + std::to_string(line_no) + ": unknown key '" + key +
                      "'");
    }
  }

  if (ubss) {
    parsed.config.thresholds = SemanticThresholds{*ubss, lbss};
  } else if (lbss) {
    throw DataError(origin + ": lbss given without ubss");
  }
  if (parsed.config.variant != Variant::baseline && !parsed.config.thresholds && !parsed.grid_full)
    throw DataError(origin + ": variant '" + variant_name(parsed.config.variant) +
                    "' needs ubss (and optionally lbss)");
  return parsed;
}

inline ParsedConfig load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open config: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str(), path.string());
}

// ---------------------------------------------------------------------------
// Reports.

inline std::vector<RunResult> load_results_dir(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw DataError("no results directory: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".json")
      files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  std::vector<RunResult> results;
  for (const std::filesystem::path& file : files) {
    std::ifstream in(file, std::ios::binary);
    std::string line;
    if (!in || !std::getline(in, line)) throw DataError("cannot read result: " + file.string());
    try {
      results.push_back(parse_run(line));
    } catch (const DataError& e) {
      throw DataError(file.string() + ": " + e.what());
    }
  }
  return results;
}

struct MethodSelector {
  Scheme scheme = Scheme::nsga2;
  Variant variant = Variant::baseline;
};

// "nsga2", "spea2:sdo", ... (missing variant means baseline).
inline MethodSelector parse_method(const std::string& text) {
  const std::size_t colon = text.find(':');
  MethodSelector m;
  m.scheme = scheme_id(text.substr(0, colon));
  if (colon != std::string::npos) m.variant = variant_id(text.substr(colon + 1));
  return m;
}

inline std::string method_name(const MethodSelector& m) {
  return scheme_name(m.scheme) + (m.variant == Variant::baseline ? std::string()
                                                                 : ":" + variant_name(m.variant));
}

namespace detail {

// Orders threshold cells: no-lbss cells first, then by lbss, then ubss.
struct CellKey {
  double lbss_order = -1.0;  // -1 encodes "absent"
  double ubss = 0.0;

  bool operator<(const CellKey& other) const {
    return std::tie(lbss_order, ubss) < std::tie(other.lbss_order, other.ubss);
  }
};

inline CellKey cell_key(const std::optional<SemanticThresholds>& t) {
  CellKey key;
  if (t) {
    key.ubss = t->ubss;
    if (t->lbss) key.lbss_order = *t->lbss;
  }
  return key;
}

struct GroupKey {
  std::string dataset;
  Scheme scheme = Scheme::nsga2;
  Variant variant = Variant::baseline;
  CellKey cell;

  bool operator<(const GroupKey& other) const {
    return std::tie(dataset, scheme, variant, cell) <
           std::tie(other.dataset, other.scheme, other.variant, other.cell);
  }
};

struct Group {
  std::optional<SemanticThresholds> thresholds;
  std::vector<RunResult> runs;
};

inline std::map<GroupKey, Group> group_results(const std::vector<RunResult>& results) {
  std::map<GroupKey, Group> groups;
  for (const RunResult& r : results) {
    const GroupKey key{r.dataset, r.scheme, r.variant, cell_key(r.thresholds)};
    Group& group = groups[key];
    group.thresholds = r.thresholds;
    group.runs.push_back(r);
  }
  return groups;
}

inline std::vector<double> hyperareas(const Group& group) {
  std::vector<double> values;
  values.reserve(group.runs.size());
  for (const RunResult& r : group.runs) values.push_back(r.hypervolume);
  return values;
}

inline std::vector<FrontSet> fronts(const Group& group) {
  std::vector<FrontSet> out;
  out.reserve(group.runs.size());
  for (const RunResult& r : group.runs) out.push_back(r.final_front);
  return out;
}

inline void require_complete(const Group& group, const std::string& dataset,
                             const MethodSelector& method,
                             const std::optional<SemanticThresholds>& thresholds,
                             std::size_t expected_runs) {
  if (group.runs.size() == expected_runs) return;
  std::vector<std::string> present;
  for (const RunResult& r : group.runs) present.push_back(r.run_id);
  ExperimentConfig probe;
  probe.dataset = dataset;
  probe.scheme = method.scheme;
  probe.variant = method.variant;
  probe.thresholds = thresholds;
  std::string missing;
  for (std::size_t i = 0; i < expected_runs; ++i) {
    const std::string id = run_id(probe, i);
    if (std::find(present.begin(), present.end(), id) == present.end()) missing += " " + id;
  }
  throw DataError("incomplete runs for " + method_name(method) + " on " + dataset + " (" +
                  std::to_string(group.runs.size()) + "/" + std::to_string(expected_runs) +
                  "); missing:" + missing);
}

}  // namespace detail

struct CellComparison {
  std::string dataset;
  std::optional<SemanticThresholds> thresholds;  // method A's cell
  Statistic hyperarea_a, hyperarea_b;
  double po_hyperarea_a = 0.0, po_hyperarea_b = 0.0;
  RankSumResult rank_sum;        // A against B on per-run hyperareas
  Statistic unique_a, unique_b;  // per-run solutions absent from the other pool
  bool win_avg = false, win_po = false;
};

// Per-(dataset, threshold cell) comparison of two methods.  Baseline methods
// contribute their single cell to every comparison row.
inline std::vector<CellComparison> compare_methods(const std::vector<RunResult>& results,
                                                   const MethodSelector& method_a,
                                                   const MethodSelector& method_b,
                                                   std::size_t expected_runs,
                                                   double alpha = 0.05) {
  const std::map<detail::GroupKey, detail::Group> groups = detail::group_results(results);
  std::vector<CellComparison> rows;
  std::vector<std::string> datasets;
  for (const auto& [key, group] : groups)
    if (key.scheme == method_a.scheme && key.variant == method_a.variant &&
        std::find(datasets.begin(), datasets.end(), key.dataset) == datasets.end())
      datasets.push_back(key.dataset);
  std::sort(datasets.begin(), datasets.end());

  for (const std::string& dataset : datasets)
    for (const auto& [key, group_a] : groups) {
      if (key.dataset != dataset || key.scheme != method_a.scheme ||
          key.variant != method_a.variant)
        continue;
      const std::optional<SemanticThresholds> cell_b =
          method_b.variant == Variant::baseline ? std::nullopt : group_a.thresholds;
      const detail::GroupKey key_b{dataset, method_b.scheme, method_b.variant,
                                   detail::cell_key(cell_b)};
      const auto found_b = groups.find(key_b);
      if (found_b == groups.end())
        throw DataError("no runs for " + method_name(method_b) + " on " + dataset + " cell " +
                        cell_label(cell_b));
      detail::require_complete(group_a, dataset, method_a, group_a.thresholds, expected_runs);
      detail::require_complete(found_b->second, dataset, method_b, cell_b, expected_runs);

      CellComparison row;
      row.dataset = dataset;
      row.thresholds = group_a.thresholds;
      const std::vector<double> values_a = detail::hyperareas(group_a);
      const std::vector<double> values_b = detail::hyperareas(found_b->second);
      row.hyperarea_a = mean_and_sample_sd(values_a);
      row.hyperarea_b = mean_and_sample_sd(values_b);
      row.po_hyperarea_a = hyperarea(accumulate_po_front(detail::fronts(group_a)));
      row.po_hyperarea_b = hyperarea(accumulate_po_front(detail::fronts(found_b->second)));
      row.rank_sum = wilcoxon_rank_sum(values_a, values_b, alpha);
      const auto [unique_a, unique_b] =
          unique_solutions(detail::fronts(group_a), detail::fronts(found_b->second));
      row.unique_a = unique_a;
      row.unique_b = unique_b;
      row.win_avg = row.hyperarea_a.mean > row.hyperarea_b.mean;
      row.win_po = row.po_hyperarea_a > row.po_hyperarea_b;
      rows.push_back(std::move(row));
    }
  return rows;
}

inline char verdict_symbol(Verdict v) {
  switch (v) {
    case Verdict::better: return '+';
    case Verdict::worse: return '-';
    case Verdict::equal: return '=';
  }
  throw ContractError("verdict_symbol: bad enum");
}

namespace detail {

inline std::string threshold_columns(const std::optional<SemanticThresholds>& t) {
  const std::string lbss = t && t->lbss ? format_real(*t->lbss) : "-";
  const std::string ubss = t ? format_real(t->ubss) : "-";
  return lbss + "," + ubss;
}

}  // namespace detail

// Writes summary.csv (every group), comparison.csv (verdicts, PO fronts,
// unique solutions, and win flags for A vs B).  Returns the comparison rows.
inline std::vector<CellComparison> write_report(const std::vector<RunResult>& results,
                                                const MethodSelector& method_a,
                                                const MethodSelector& method_b,
                                                std::size_t expected_runs,
                                                const std::filesystem::path& out_dir,
                                                double alpha = 0.05) {
  std::filesystem::create_directories(out_dir);

  std::string summary = "dataset,scheme,variant,lbss,ubss,runs,hyperarea_mean,hyperarea_sd,po_hyperarea\n";
  for (const auto& [key, group] : detail::group_results(results)) {
    const Statistic stat = mean_and_sample_sd(detail::hyperareas(group));
    summary += key.dataset + "," + scheme_name(key.scheme) + "," + variant_name(key.variant) +
               "," + detail::threshold_columns(group.thresholds) + "," +
               std::to_string(group.runs.size()) + "," + format_real(stat.mean) + "," +
               format_real(stat.sd) + "," +
               format_real(hyperarea(accumulate_po_front(detail::fronts(group)))) + "\n";
  }
  write_text_atomic(out_dir / "summary.csv", summary);

  const std::vector<CellComparison> rows =
      compare_methods(results, method_a, method_b, expected_runs, alpha);
  std::string comparison =
      "dataset,lbss,ubss,hyperarea_mean_a,hyperarea_sd_a,hyperarea_mean_b,hyperarea_sd_b,"
      "p_value,verdict,po_hyperarea_a,po_hyperarea_b,unique_mean_a,unique_sd_a,unique_mean_b,"
      "unique_sd_b,win_avg,win_po\n";
  for (const CellComparison& row : rows) {
    comparison += row.dataset + "," + detail::threshold_columns(row.thresholds) + "," +
                  format_real(row.hyperarea_a.mean) + "," + format_real(row.hyperarea_a.sd) +
                  "," + format_real(row.hyperarea_b.mean) + "," + format_real(row.hyperarea_b.sd) +
                  "," + format_real(row.rank_sum.p_value) + "," +
                  std::string(1, verdict_symbol(row.rank_sum.verdict)) + "," +
                  format_real(row.po_hyperarea_a) + "," + format_real(row.po_hyperarea_b) + "," +
                  format_real(row.unique_a.mean) + "," + format_real(row.unique_a.sd) + "," +
                  format_real(row.unique_b.mean) + "," + format_real(row.unique_b.sd) + "," +
                  (row.win_avg ? "1" : "0") + "," + (row.win_po ? "1" : "0") + "\n";
  }
  write_text_atomic(out_dir / "comparison.csv", comparison);
  return rows;
}

// Plot-ready CSVs: mean archive size by generation, and the pooled
// non-dominated front points, per (dataset, method, threshold cell).
inline void write_plot_data(const std::vector<RunResult>& results,
                            const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);

  std::string sizes = "dataset,scheme,variant,lbss,ubss,generation,mean_size\n";
  std::string points = "dataset,scheme,variant,lbss,ubss,tpr,tnr,tp,fn,fp,tn\n";
  for (const auto& [key, group] : detail::group_results(results)) {
    const std::string prefix = key.dataset + "," + scheme_name(key.scheme) + "," +
                               variant_name(key.variant) + "," +
                               detail::threshold_columns(group.thresholds) + ",";
    std::size_t longest = 0;
    for (const RunResult& r : group.runs)
      longest = std::max(longest, r.per_generation_sizes.size());
    for (std::size_t g = 0; g < longest; ++g) {
      double total = 0.0;
      std::size_t n = 0;
      for (const RunResult& r : group.runs)
        if (g < r.per_generation_sizes.size()) {
          total += r.per_generation_sizes[g];
          ++n;
        }
      sizes += prefix + std::to_string(g) + "," + format_real(total / static_cast<double>(n)) +
               "\n";
    }
    const FrontSet pooled = accumulate_po_front(detail::fronts(group));
    for (const FrontPoint& p : pooled.points())
      points += prefix + format_real(p.tpr()) + "," + format_real(p.tnr()) + "," +
                std::to_string(p.tp) + "," + std::to_string(p.fn) + "," + std::to_string(p.fp) +
                "," + std::to_string(p.tn) + "\n";
  }
  write_text_atomic(out_dir / "sizes_over_generations.csv", sizes);
  write_text_atomic(out_dir / "po_front_points.csv", points);
}

}  // namespace mogp
