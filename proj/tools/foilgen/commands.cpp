#include "foilgen/commands.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "foilgen/bias_audit.hpp"
#include "foilgen/caption_gen.hpp"
#include "foilgen/constraints.hpp"
#include "foilgen/corpus_stats.hpp"
#include "foilgen/dataset.hpp"
#include "foilgen/error.hpp"
#include "foilgen/generation_config.hpp"
#include "foilgen/pipeline.hpp"
#include "foilgen/scene_graph.hpp"
#include "foilgen/version.hpp"

namespace foilgen::cli {

namespace fs = std::filesystem;

namespace {

constexpr std::size_t kTableBatch = 4096;

fs::path with_suffix(const fs::path& p, const std::string& suffix) {
  return fs::path(p.string() + suffix);
}

void write_json(const fs::path& path, const nlohmann::ordered_json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw Error("failed writing " + path.string());
}

/// Reports the first missing input; true when all exist.
bool inputs_exist(const std::vector<fs::path>& paths, std::ostream& err) {
  for (const auto& p : paths) {
    std::error_code ec;
    if (!fs::exists(p, ec)) {
      err << "error: input not found: " << p.string() << '\n';
      return false;
    }
  }
  return true;
}

template <class F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace

int cmd_build_tables(const BuildTablesOptions& options, std::ostream& log, std::ostream& err) {
  if (options.scenes.empty()) {
    err << "error: build-tables needs at least one --scenes file\n";
    return kExitUsage;
  }
  if (!inputs_exist(options.scenes, err)) return kExitUsage;
  return guarded(err, [&] {
    LookupTables tables;
    ParseReport parse;
    std::set<std::string> seen;
    std::vector<SceneGraph> batch;
    const std::size_t workers = std::max(1u, options.workers);
    auto flush = [&] {
      if (batch.empty()) return;
      tables.merge(build_tables(std::span<const SceneGraph>(batch), workers));
      batch.clear();
    };
    for (const auto& path : options.scenes) {
      std::ifstream in(path, std::ios::binary);
      if (!in) throw Error("cannot open " + path.string());
      for_each_scene_graph(
          in,
          [&](SceneGraph&& scene) {
            if (!seen.insert(scene.image_id()).second) {
              ++parse.duplicate_images;
              parse.warn("duplicate image id " + scene.image_id() + " ignored");
              return;
            }
            batch.push_back(std::move(scene));
            if (batch.size() >= kTableBatch) flush();
          },
          parse);
    }
    flush();
    if (tables.scene_count == 0) throw CorpusError("no scenes found in the input files");
    save_tables(tables, options.out);

    nlohmann::ordered_json report;
    report["generator_version"] = std::string(library_version());
    nlohmann::ordered_json inputs = nlohmann::ordered_json::array();
    for (const auto& p : options.scenes) inputs.push_back(p.string());
    report["inputs"] = std::move(inputs);
    report["tables"] = tables_summary(tables);
    report["parse"] = parse.to_json();
    write_json(with_suffix(options.out, ".report.json"), report);
    log << "built tables from " << tables.scene_count << " scenes -> " << options.out.string()
        << '\n';
    if (parse.warning_count > 0) err << "warning: " << parse.warning_count << " parse warnings\n";
    return kExitOk;
  });
}

int cmd_generate(const GenerateOptions& options, std::ostream& log, std::ostream& err) {
  std::vector<fs::path> inputs{options.tables, options.scenes};
  if (options.config) inputs.push_back(*options.config);
  if (!inputs_exist(inputs, err)) return kExitUsage;
  return guarded(err, [&] {
    ConfigFile file = options.config ? load_config(*options.config) : ConfigFile{};
    GenerationConfig& config = file.generation;
    if (options.seed) config.global_seed = *options.seed;
    if (options.regime) {
      auto regime = SamplingRegime::parse(*options.regime);
      if (!regime) throw ConfigError("unknown regime '" + *options.regime + "'");
      config.regime = *regime;
    }
    config.validate();

    const fs::path assets = default_asset_dir();
    const fs::path clusters_path = file.attribute_clusters.value_or(assets / "attribute_clusters.txt");
    const fs::path body_path = file.body_parts.value_or(assets / "body_parts.txt");
    const fs::path background_path = file.background_classes.value_or(assets / "background_classes.txt");
    if (!inputs_exist({clusters_path, body_path, background_path}, err)) return kExitUsage;
    const AttributeClusters clusters = load_attribute_clusters(clusters_path);
    const AmbiguityLexicons lexicons = load_lexicons(body_path, background_path);
    const SplitAssignment splits = file.split_manifests.empty()
                                       ? SplitAssignment()
                                       : SplitAssignment::from_manifests(file.split_manifests);

    const LookupTables tables = load_tables(options.tables);
    const CandidateIndex index(tables);
    const GenerationContext context(index, clusters, lexicons, config);

    std::ifstream scenes(options.scenes, std::ios::binary);
    if (!scenes) throw Error("cannot open " + options.scenes.string());
    std::ofstream out(options.out, std::ios::binary);
    if (!out) throw Error("cannot write " + options.out.string());
    PipelineOptions pipeline;
    pipeline.workers = std::max(1u, options.workers);
    const PipelineResult result = run_generation(scenes, context, splits, out, pipeline);
    out.close();
    if (!out) throw Error("failed writing " + options.out.string());

    write_json(with_suffix(options.out, ".stats.json"), result.stats.to_json());
    nlohmann::ordered_json report;
    report["generator_version"] = std::string(library_version());
    report["config"] = config_to_json(config);
    const auto pipeline_json = result.to_json();
    for (const auto& [k, v] : pipeline_json.items()) report[k] = v;
    write_json(with_suffix(options.out, ".generation.json"), report);

    if (result.unknown_class_objects > 0) {
      err << "warning: " << result.unknown_class_objects
          << " scene objects have classes absent from the lookup tables\n";
    }
    if (result.unassigned_images > 0) {
      err << "warning: " << result.unassigned_images << " images are in no split manifest\n";
    }
    log << "generated " << result.stats.total_captions << " captions ("
        << result.stats.total_pairs << " pairs) for " << result.generation.images
        << " images, regime " << config.regime.name() << " -> " << options.out.string() << '\n';
    return kExitOk;
  });
}

int cmd_stats(const StatsOptions& options, std::ostream& log, std::ostream& err) {
  if (!inputs_exist({options.dataset}, err)) return kExitUsage;
  return guarded(err, [&] {
    std::ifstream in(options.dataset, std::ios::binary);
    if (!in) throw Error("cannot open " + options.dataset.string());
    const StatsReport stats = compute_stats(in);
    log << stats.to_table();
    if (stats.malformed_lines > 0) {
      err << "warning: skipped " << stats.malformed_lines << " malformed lines\n";
    }
    if (options.out) write_json(*options.out, stats.to_json());
    return kExitOk;
  });
}

int cmd_audit(const AuditOptions& options, std::ostream& log, std::ostream& err) {
  if (options.datasets.empty()) {
    err << "error: audit needs at least one dataset\n";
    return kExitUsage;
  }
  if (!inputs_exist(options.datasets, err)) return kExitUsage;
  return guarded(err, [&] {
    foilgen::AuditOptions audit;
    audit.split_seed = options.seed;
    audit.probe.seed = options.seed;
    std::vector<std::pair<std::string, BiasReport>> columns;
    nlohmann::ordered_json reports = nlohmann::ordered_json::array();
    for (const auto& path : options.datasets) {
      std::size_t malformed = 0;
      const auto records = load_dataset(path, &malformed);
      if (malformed > 0) err << "warning: " << path.string() << ": skipped " << malformed << " malformed lines\n";
      BiasReport report = run_audit(records, audit);
      std::string name = report.regime;
      if (options.datasets.size() > 1) name = path.stem().string();
      nlohmann::ordered_json entry;
      entry["dataset"] = path.string();
      entry["report"] = report.to_json();
      reports.push_back(std::move(entry));
      columns.emplace_back(std::move(name), std::move(report));
    }
    const std::string table = format_bias_table(columns);
    log << table;
    if (options.out) {
      nlohmann::ordered_json j;
      j["reports"] = std::move(reports);
      j["table"] = table;
      write_json(*options.out, j);
    }
    return kExitOk;
  });
}

int run(const std::vector<std::string>& args, std::ostream& log, std::ostream& err) {
  CLI::App app{"Hard-negative caption generation from scene graphs", "foilgen"};
  app.set_version_flag("--version", std::string(library_version()));
  app.require_subcommand(1);

  BuildTablesOptions build;
  auto* build_cmd = app.add_subcommand("build-tables", "Count co-occurrences over a scene-graph corpus");
  build_cmd->add_option("--scenes", build.scenes, "Scene-graph JSON file (repeatable)")->required();
  build_cmd->add_option("--out", build.out, "Output table file")->required();
  build_cmd->add_option("--workers", build.workers, "Worker threads")->check(CLI::PositiveNumber);

  GenerateOptions gen;
  std::string regime;
  std::uint64_t seed = 0;
  auto* gen_cmd = app.add_subcommand("generate", "Generate positive/negative caption pairs");
  gen_cmd->add_option("--config", gen.config, "Generation config JSON");
  gen_cmd->add_option("--tables", gen.tables, "Lookup table file from build-tables")->required();
  gen_cmd->add_option("--scenes", gen.scenes, "Scene-graph JSON file")->required();
  gen_cmd->add_option("--out", gen.out, "Output JSON-lines dataset")->required();
  gen_cmd->add_option("--workers", gen.workers, "Worker threads")->check(CLI::PositiveNumber);
  auto* seed_opt = gen_cmd->add_option("--seed", seed, "Global seed (overrides the config)");
  auto* regime_opt = gen_cmd->add_option("--regime", regime,
                                         "clean-strict, clean-relaxed, noisy-strict or noisy-relaxed");

  StatsOptions stats;
  auto* stats_cmd = app.add_subcommand("stats", "Summarize a generated dataset");
  stats_cmd->add_option("dataset", stats.dataset, "JSON-lines dataset")->required();
  stats_cmd->add_option("--out", stats.out, "Write the report as JSON");

  AuditOptions audit;
  auto* audit_cmd = app.add_subcommand("audit", "Text-only bias probe over one or more datasets");
  audit_cmd->add_option("dataset", audit.datasets, "JSON-lines dataset(s)")->required();
  audit_cmd->add_option("--out", audit.out, "Write the reports as JSON");
  audit_cmd->add_option("--seed", audit.seed, "Split and training seed");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, log, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (*build_cmd) return cmd_build_tables(build, log, err);
  if (*gen_cmd) {
    if (*seed_opt) gen.seed = seed;
    if (*regime_opt) gen.regime = regime;
    return cmd_generate(gen, log, err);
  }
  if (*stats_cmd) return cmd_stats(stats, log, err);
  if (*audit_cmd) return cmd_audit(audit, log, err);
  return kExitUsage;
}

}  // namespace foilgen::cli
