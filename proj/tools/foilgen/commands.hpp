#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace foilgen::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

struct BuildTablesOptions {
  std::vector<std::filesystem::path> scenes;
  std::filesystem::path out;
  unsigned workers = 1;
};

struct GenerateOptions {
  std::optional<std::filesystem::path> config;
  std::filesystem::path tables;
  std::filesystem::path scenes;
  std::filesystem::path out;
  unsigned workers = 1;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> regime;
};

struct StatsOptions {
  std::filesystem::path dataset;
  std::optional<std::filesystem::path> out;
};

struct AuditOptions {
  std::vector<std::filesystem::path> datasets;
  std::optional<std::filesystem::path> out;
  std::uint64_t seed = 0;
};

/// Writes the tables to `out` and a JSON build report to `<out>.report.json`.
int cmd_build_tables(const BuildTablesOptions& options, std::ostream& log, std::ostream& err);
/// Writes the dataset to `out`, plus `<out>.stats.json` and `<out>.generation.json`.
int cmd_generate(const GenerateOptions& options, std::ostream& log, std::ostream& err);
/// Prints the stats table; writes the JSON report to `out` when given.
int cmd_stats(const StatsOptions& options, std::ostream& log, std::ostream& err);
/// Prints the accuracy table; writes the JSON reports to `out` when given.
int cmd_audit(const AuditOptions& options, std::ostream& log, std::ostream& err);

/// Parses `args` (without the program name) and dispatches.
int run(const std::vector<std::string>& args, std::ostream& log, std::ostream& err);

}  // namespace foilgen::cli
