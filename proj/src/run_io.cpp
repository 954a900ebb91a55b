#include "solspace/run_io.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <fstream>
#include <sstream>

#include "solspace/errors.hpp"

namespace solspace {

namespace fs = std::filesystem;
using nlohmann::json;

nlohmann::json to_json(const Requirement& r) {
  return {{"id", r.id}, {"qoi", r.qoi}, {"comparator", to_string(r.comparator)}, {"threshold", r.threshold}};
}

Requirement requirement_from_json(const nlohmann::json& j) {
  return {j.at("id").get<std::string>(), j.at("qoi").get<std::string>(),
          parse_comparator(j.at("comparator").get<std::string>()), j.at("threshold").get<double>()};
}

nlohmann::json to_json(const BoxFile& b) {
  json reqs = json::array();
  for (const auto& r : b.requirements) reqs.push_back(to_json(r));
  return {{"intervals", to_json(b.box)},
          {"mu", b.mu},
          {"purity", b.purity},
          {"validation_samples", b.validation_samples},
          {"seed", b.seed},
          {"params", to_json(b.params)},
          {"requirements", std::move(reqs)}};
}

BoxFile box_file_from_json(const nlohmann::json& j) {
  BoxFile b;
  b.box = box_from_json(j.at("intervals"));
  b.mu = j.at("mu").get<double>();
  b.purity = j.at("purity").get<double>();
  b.validation_samples = j.value("validation_samples", std::size_t{0});
  b.seed = j.at("seed").get<std::uint64_t>();
  b.params = solver_params_from_json(j.at("params"));
  for (const auto& r : j.value("requirements", json::array())) b.requirements.push_back(requirement_from_json(r));
  return b;
}

std::string canonical_json(const nlohmann::json& j) { return j.dump(2) + "\n"; }

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr);
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xF];
  }
  return out;
}

void write_run_file(const fs::path& dir, const fs::path& relative, std::string_view bytes) {
  const fs::path target = dir / relative;
  fs::create_directories(target.parent_path());
  std::ofstream out(target, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + target.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

void write_section_files(const fs::path& dir, const SectionData& section) {
  const std::string stem = "sections/section_" + std::to_string(section.i) + "_" + std::to_string(section.j);
  write_run_file(dir, stem + ".json", export_section(section, SectionFormat::json));
  write_run_file(dir, stem + ".csv", export_section(section, SectionFormat::csv));
  write_run_file(dir, stem + ".svg", export_section(section, SectionFormat::svg));
}

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> run_files(const fs::path& dir) {
  std::vector<std::string> out;
  for (const char* name : {"problem.json", "baseline.json", "box.json", "trace.json", "box_tradeoff.json",
                           "trace_tradeoff.json", "validation.json"}) {
    if (fs::is_regular_file(dir / name)) out.emplace_back(name);
  }
  if (fs::is_directory(dir / "sections")) {
    std::vector<std::string> sec;
    for (const auto& e : fs::directory_iterator(dir / "sections")) {
      if (e.is_regular_file()) sec.push_back("sections/" + e.path().filename().string());
    }
    std::sort(sec.begin(), sec.end());
    out.insert(out.end(), sec.begin(), sec.end());
  }
  return out;
}

}  // namespace

nlohmann::json update_manifest(const fs::path& dir) {
  json files = json::array();
  json seeds = json::object();
  for (const auto& name : run_files(dir)) {
    const std::string bytes = slurp(dir / name);
    files.push_back({{"path", name}, {"sha256", sha256_hex(bytes)}});
    if (name.ends_with(".json") && name != "problem.json" && !name.starts_with("trace")) {
      json doc = json::parse(bytes, nullptr, false);
      if (doc.is_object() && doc.contains("seed")) seeds[name] = doc["seed"];
    }
  }
  json manifest = {{"tool", "solspace"},
                   {"version", SOLSPACE_VERSION},
                   {"problem_schema_version", kProblemSchemaVersion},
                   {"seeds", std::move(seeds)},
                   {"files", std::move(files)}};
  write_run_file(dir, "manifest.json", canonical_json(manifest));
  return manifest;
}

nlohmann::json persist_run(const fs::path& dir, const RunRecord& run) {
  write_run_file(dir, "problem.json", canonical_json(run.problem));
  write_run_file(dir, "baseline.json", canonical_json(to_json(run.baseline)));
  write_run_file(dir, "box.json", canonical_json(to_json(run.box)));
  write_run_file(dir, "trace.json", canonical_json(to_json(run.trace)));
  for (const auto& s : run.sections) write_section_files(dir, s);
  return update_manifest(dir);
}

nlohmann::json read_run_json(const fs::path& dir, std::string_view name) {
  const fs::path p = dir / name;
  if (!fs::is_regular_file(p)) throw RunLoadError(std::string(name) + " absent");
  try {
    return json::parse(slurp(p));
  } catch (const json::exception& e) {
    throw RunLoadError(std::string(name) + " corrupt: " + e.what());
  }
}

RunRecord load_run(const fs::path& dir) {
  RunRecord run;
  auto decode = [&](std::string_view name, auto&& fn) {
    json doc = read_run_json(dir, name);
    try {
      fn(doc);
    } catch (const std::exception& e) {
      throw RunLoadError(std::string(name) + " corrupt: " + e.what());
    }
  };
  decode("problem.json", [&](const json& j) { run.problem = j; });
  decode("baseline.json", [&](const json& j) { run.baseline = baseline_from_json(j); });
  decode("box.json", [&](const json& j) { run.box = box_file_from_json(j); });
  decode("trace.json", [&](const json& j) { run.trace = trace_from_json(j); });
  if (fs::is_directory(dir / "sections")) {
    std::vector<std::string> names;
    for (const auto& e : fs::directory_iterator(dir / "sections")) {
      const std::string n = e.path().filename().string();
      if (n.starts_with("section_") && n.ends_with(".json")) names.push_back(n);
    }
    std::sort(names.begin(), names.end());
    for (const auto& n : names) {
      decode("sections/" + n, [&](const json& j) { run.sections.push_back(section_from_json(j)); });
    }
  }
  return run;
}

}  // namespace solspace
