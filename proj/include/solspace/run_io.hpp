#pragma once

// Run directory layout:
//   problem.json baseline.json box.json trace.json manifest.json
//   sections/section_<i>_<j>.{json,csv,svg}
// All JSON is written canonically (sorted keys, shortest round-trip floats,
// two-space indent, trailing newline) so identical inputs give identical bytes.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "solspace/baseline.hpp"
#include "solspace/box.hpp"
#include "solspace/sections.hpp"
#include "solspace/solver.hpp"

namespace solspace {

/// Contents of box.json.
struct BoxFile {
  Box box;
  double mu = 0.0;
  double purity = 1.0;
  std::size_t validation_samples = 0;
  std::uint64_t seed = 0;
  SolverParams params;
  std::vector<Requirement> requirements;

  friend bool operator==(const BoxFile&, const BoxFile&) = default;
};

nlohmann::json to_json(const BoxFile& b);
BoxFile box_file_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Requirement& r);
Requirement requirement_from_json(const nlohmann::json& j);

struct RunRecord {
  nlohmann::json problem;
  BaselineResult baseline;
  BoxFile box;
  SolverTrace trace;
  std::vector<SectionData> sections;

  friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

std::string canonical_json(const nlohmann::json& j);
std::string sha256_hex(std::string_view bytes);

/// Writes bytes to dir/relative, creating parent directories.
void write_run_file(const std::filesystem::path& dir, const std::filesystem::path& relative,
                    std::string_view bytes);

/// Writes the three section exports under dir/sections/.
void write_section_files(const std::filesystem::path& dir, const SectionData& section);

/// Rebuilds manifest.json from the files currently in the run directory:
/// tool version, seeds, and a sha256 per file. Returns the manifest.
nlohmann::json update_manifest(const std::filesystem::path& dir);

nlohmann::json persist_run(const std::filesystem::path& dir, const RunRecord& run);

/// Throws RunLoadError naming the offending file ("box.json absent",
/// "trace.json corrupt: ...").
RunRecord load_run(const std::filesystem::path& dir);

/// Reads and parses one JSON file of a run directory with the same errors.
nlohmann::json read_run_json(const std::filesystem::path& dir, std::string_view name);

}  // namespace solspace
