#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>

#include <Eigen/Core>
#include <fmt/core.h>

#include "hypereig/cli.hpp"
#include "hypereig/error.hpp"
#include "hypereig/simd.hpp"

#ifndef HYPEREIG_VERSION
#define HYPEREIG_VERSION "0.0.0"
#endif

namespace hypereig::cli {

nlohmann::json to_json(const RunManifest& m) {
  nlohmann::json doc;
  doc["command"] = m.subcommand;
  doc["argv"] = m.argv;
  doc["params"] = m.params;
  doc["seed"] = m.seed ? nlohmann::json(*m.seed) : nlohmann::json(nullptr);
  doc["versions"] = {
      {"hypereig", m.version},
      {"eigen", fmt::format("{}.{}.{}", EIGEN_WORLD_VERSION, EIGEN_MAJOR_VERSION, EIGEN_MINOR_VERSION)},
      {"fmt", FMT_VERSION},
      {"simd_backend", std::string(simd::backend_name(simd::active_backend()))},
  };
  doc["started_at"] = m.started_at;
  doc["finished_at"] = m.finished_at;
  doc["wall_time"] = m.wall_time_s;
  doc["outputs"] = m.outputs;
  return doc;
}

RunManifest manifest_from_json(const nlohmann::json& doc) {
  RunManifest m;
  try {
    m.subcommand = doc.at("command").get<std::string>();
    m.argv = doc.at("argv").get<std::vector<std::string>>();
    m.params = doc.value("params", nlohmann::json::object());
    if (doc.contains("seed") && !doc["seed"].is_null()) m.seed = doc["seed"].get<std::uint64_t>();
    m.version = doc.at("versions").at("hypereig").get<std::string>();
    m.started_at = doc.value("started_at", "");
    m.finished_at = doc.value("finished_at", "");
    m.wall_time_s = doc.value("wall_time", 0.0);
    m.outputs = doc.value("outputs", std::vector<std::string>{});
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed manifest: ") + e.what());
  }
  return m;
}

std::string manifest_path_for(const std::string& output_path) { return output_path + ".manifest.json"; }

void write_file_atomic(const std::string& path, const std::string& contents) {
  const std::filesystem::path target(path);
  std::filesystem::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ParameterError("cannot write " + tmp.string());
    out << contents;
    out.flush();
    if (!out) throw ParameterError("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, target, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw ParameterError("cannot move " + tmp.string() + " to " + path + ": " + ec.message());
  }
}

RunManifest read_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open " + path);
  try {
    return manifest_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t secs = std::chrono::system_clock::to_time_t(now);
  const auto millis = std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count() % 1000;
  std::tm tm{};
  gmtime_r(&secs, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%S", &tm);
  return fmt::format("{}.{:03d}Z", buf, static_cast<int>(millis));
}

std::string version_string() { return HYPEREIG_VERSION; }

}  // namespace hypereig::cli
