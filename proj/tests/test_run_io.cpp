#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "solspace/errors.hpp"
#include "solspace/run_io.hpp"
#include "solspace/workflow.hpp"
#include "support.hpp"

using namespace solspace;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("solspace_test_" + tag + "_" + std::to_string(::getpid()));
    fs::remove_all(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

RunRecord toy_run() {
  const auto p = testsupport::load("toy_sum.json");
  RunRecord run;
  run.problem = p.document();
  run.baseline = compute_baseline(p, 0);
  const auto bound = bind_requirements(p, run.baseline);
  SolverParams params;
  params.seed = 3;
  const auto r = solve_box(bound, run.baseline.x_baseline, params);
  run.box = summarize_box(bound, r.box, params, 500);
  run.trace = r.trace;
  run.sections.push_back(make_section(bound, r.box, 0, 1, 100, 0));
  run.sections.push_back(make_section(bound, r.box, 1, 0, 50, 1, Span::box));
  return run;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_SUITE("run_io") {
  TEST_CASE("save then load is the identity") {
    TempDir dir("roundtrip");
    const auto run = toy_run();
    persist_run(dir.path, run);
    CHECK(load_run(dir.path) == run);
  }

  TEST_CASE("manifest hashes every written file") {
    TempDir dir("manifest");
    const auto manifest = persist_run(dir.path, toy_run());
    CHECK(manifest.at("version") == SOLSPACE_VERSION);
    CHECK(manifest.at("seeds").at("box.json") == 3);
    std::set<std::string> listed;
    for (const auto& f : manifest.at("files")) {
      const std::string path = f.at("path");
      listed.insert(path);
      CHECK(f.at("sha256") == sha256_hex(slurp(dir.path / path)));
    }
    std::set<std::string> on_disk;
    for (const auto& e : fs::recursive_directory_iterator(dir.path)) {
      if (e.is_regular_file() && e.path().filename() != "manifest.json") {
        on_disk.insert(fs::relative(e.path(), dir.path).generic_string());
      }
    }
    CHECK(listed == on_disk);
    CHECK(listed.contains("sections/section_0_1.svg"));
    CHECK(listed.contains("sections/section_1_0.csv"));
  }

  TEST_CASE("rewriting gives identical bytes") {
    TempDir dir("bytes");
    const auto run = toy_run();
    persist_run(dir.path, run);
    const auto first = slurp(dir.path / "manifest.json");
    persist_run(dir.path, run);
    CHECK(slurp(dir.path / "manifest.json") == first);
  }

  TEST_CASE("missing and corrupt files are named") {
    TempDir dir("errors");
    persist_run(dir.path, toy_run());
    fs::remove(dir.path / "box.json");
    CHECK_THROWS_WITH_AS(load_run(dir.path), "box.json absent", RunLoadError);
    persist_run(dir.path, toy_run());
    std::ofstream(dir.path / "trace.json") << "{not json";
    CHECK_THROWS_WITH_AS(load_run(dir.path), doctest::Contains("trace.json corrupt"), RunLoadError);
    persist_run(dir.path, toy_run());
    std::ofstream(dir.path / "baseline.json") << "{\"x_baseline\": 3}";
    CHECK_THROWS_WITH_AS(load_run(dir.path), doctest::Contains("baseline.json corrupt"), RunLoadError);
  }

  TEST_CASE("canonical json and hashing") {
    CHECK(canonical_json(json{{"b", 1}, {"a", 0.1}}) == "{\n  \"a\": 0.1,\n  \"b\": 1\n}\n");
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  }
}
