#ifndef JDR_PERSISTENCE_HPP
#define JDR_PERSISTENCE_HPP

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "jdr/experiments.hpp"

namespace jdr {

namespace fs = std::filesystem;

inline constexpr const char* kResultsFile = "results.csv";
inline constexpr const char* kMetadataFile = "results.meta.json";

struct OutputPlan {
  fs::path dir;
  bool append = false;
  bool existing = false;
  std::size_t repetition_offset = 0;

  fs::path csv() const { return dir / kResultsFile; }
  fs::path metadata() const { return dir / kMetadataFile; }
};

inline std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Existing results are never overwritten: without `append` an existing
/// results file is an error; with it, new repetitions continue after the
/// largest index already on disk.
inline OutputPlan prepare_output(const fs::path& dir, bool append) {
  OutputPlan plan{dir, append, false, 0};
  if (!fs::exists(plan.csv())) return plan;
  if (!append)
    throw std::runtime_error("output " + plan.csv().string() + " already exists; pass --append to add repetitions");
  plan.existing = true;
  std::istringstream in(read_file(plan.csv()));
  std::string line;
  std::getline(in, line);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = parse_csv_line(line);
  if (header != sweep_columns()) throw std::runtime_error("existing " + plan.csv().string() + " has a different schema");
  std::size_t rep_col = 0;
  while (header[rep_col] != "repetition_index") ++rep_col;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = parse_csv_line(line);
    if (fields.size() != header.size()) throw std::runtime_error("malformed row in " + plan.csv().string());
    plan.repetition_offset = std::max<std::size_t>(plan.repetition_offset, std::stoull(fields[rep_col]) + 1);
  }
  return plan;
}

inline void write_results(const OutputPlan& plan, const std::vector<SweepResultRecord>& rows) {
  fs::create_directories(plan.dir);
  const bool add = plan.existing && plan.append;
  std::ofstream out(plan.csv(), std::ios::binary | (add ? std::ios::app : std::ios::trunc));
  if (!out) throw std::runtime_error("cannot write " + plan.csv().string());
  if (!add) out << csv_header();
  out << csv_body(rows);
  if (!out) throw std::runtime_error("write failed for " + plan.csv().string());
}

inline std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

/// Sidecar metadata: one entry per run with the full config, tool version
/// and timestamp. Appending runs extend the `runs` array.
inline void write_metadata(const OutputPlan& plan, const std::string& command, const ExperimentConfig& cfg,
                           const nlohmann::json& extra = nlohmann::json::object()) {
  nlohmann::json doc;
  if (plan.existing && plan.append && fs::exists(plan.metadata())) doc = nlohmann::json::parse(read_file(plan.metadata()));
  doc["tool"] = "jdrsim";
  doc["columns"] = sweep_columns();
  nlohmann::json run;
  run["command"] = command;
  run["version"] = std::string(kToolVersion);
  run["timestamp"] = utc_timestamp();
  run["repetition_offset"] = plan.repetition_offset;
  nlohmann::json config;
  for (const auto& [k, v] : config_entries(cfg)) config[k] = v;
  run["config"] = config;
  for (const auto& [k, v] : extra.items()) run[k] = v;
  doc["runs"].push_back(run);
  fs::create_directories(plan.dir);
  std::ofstream out(plan.metadata(), std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + plan.metadata().string());
  out << doc.dump(2) << '\n';
}

}  // namespace jdr

#endif  // JDR_PERSISTENCE_HPP
