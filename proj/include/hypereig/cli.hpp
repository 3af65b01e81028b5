#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hypereig/hypermatrix.hpp"

namespace hypereig::cli {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitParameter = 1;
inline constexpr int kExitCapacity = 2;
inline constexpr int kExitSolver = 3;

/// Parses argv-style arguments (without the program name) and runs one
/// subcommand. Data goes to --out when given, otherwise to `out`; the
/// human-readable summary goes to `out` when --out is given, otherwise to
/// `err` so that piped data stays clean.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// ---------------------------------------------------------------------------
// Ensemble specifiers:
//   identity | ones | complete-gap | random-gap:p | sign | upper:p | file:PATH
// A bare argument that is none of the keywords is read as a file path.

enum class EnsembleKeyword { kIdentity, kOnes, kCompleteGap, kRandomGap, kSign, kUpper, kFile };

struct EnsembleChoice {
  EnsembleKeyword keyword = EnsembleKeyword::kIdentity;
  double p = 0.5;
  std::string path;
};

EnsembleChoice parse_ensemble(const std::string& text);
std::string format_ensemble(const EnsembleChoice& choice);

/// Builds the symmetric hypermatrix. Files ending in .json are read as the
/// JSON hypermatrix form; anything else as the hypergraph text format, whose
/// adjacency hypermatrix is returned (n and k then come from the file).
/// `upper` is rejected because U is not symmetric.
SymmetricHypermatrix build_ensemble(const EnsembleChoice& choice, int n, int k, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Run manifest, written as <out>.manifest.json next to every data file.

struct RunManifest {
  std::string subcommand;
  std::vector<std::string> argv;  // exact arguments, replayable
  nlohmann::json params = nlohmann::json::object();
  std::optional<std::uint64_t> seed;
  std::string version;
  std::string started_at;  // UTC, ISO 8601
  std::string finished_at;
  double wall_time_s = 0.0;
  std::vector<std::string> outputs;
};

nlohmann::json to_json(const RunManifest& m);
RunManifest manifest_from_json(const nlohmann::json& doc);
std::string manifest_path_for(const std::string& output_path);

/// Writes to a temporary sibling and renames it into place.
void write_file_atomic(const std::string& path, const std::string& contents);
RunManifest read_manifest(const std::string& path);

std::string utc_timestamp();
std::string version_string();

// ---------------------------------------------------------------------------
// SVG plots of tail and curve CSV files produced by this tool.

enum class PlotKind { kTail, kCurves };

PlotKind parse_plot_kind(const std::string& name);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& name) const;  // throws ParseError when absent
  double number(std::size_t row, std::size_t col) const;
};

CsvTable parse_csv(std::istream& in);
CsvTable read_csv_file(const std::string& path);

std::string render_tail_svg(const CsvTable& table);
std::string render_curves_svg(const CsvTable& table);

/// Reads csv_path, renders it, and writes svg_path atomically.
void plot_csv(const std::string& csv_path, PlotKind kind, const std::string& svg_path);

}  // namespace hypereig::cli
