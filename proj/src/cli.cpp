#include "solspace/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <ctime>
#include <filesystem>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "solspace/errors.hpp"
#include "solspace/run_io.hpp"
#include "solspace/sections.hpp"
#include "solspace/server.hpp"
#include "solspace/workflow.hpp"

namespace solspace {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

constexpr const char* kSchemaHelp = R"(Problem files use schema_version 1:
  {"schema_version": 1, "name", "description",
   "variables":    [{"name", "unit", "kind": control|actuation|geometry, "lower", "upper"}],
   "adg":          {"nodes": [{"name", "kind": dv|intermediate|qoi}],
                    "edges": [[from, to]], "mappings": {node: mapping}},
   "requirements": [{"id", "qoi", "comparator": less_equal|greater_equal, "threshold"}],
   "task", "constants", "baseline": {"weights", "budget", "x"}}
An empty requirement list means thresholds are derived from the baseline.
Exit codes: 0 success, 1 usage error, 2 domain failure.)";

struct Options {
  std::string problem;
  std::string out;
  std::uint64_t seed = 0;
  std::string box_file = "box.json";
};

std::string default_out_dir() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  localtime_r(&now, &tm);
  std::ostringstream ss;
  ss << "runs/" << std::put_time(&tm, "%Y%m%d-%H%M%S");
  return ss.str();
}

Problem load_problem(const Options& o) {
  if (!o.problem.empty()) return Problem::load(o.problem);
  if (fs::is_regular_file(fs::path(o.out) / "problem.json")) {
    return Problem::from_json(read_run_json(o.out, "problem.json"));
  }
  throw UsageError("--problem is required (no problem.json in " + o.out + ")");
}

BoxFile load_box(const Options& o) {
  json j = read_run_json(o.out, o.box_file);
  try {
    return box_file_from_json(j);
  } catch (const json::exception& e) {
    throw RunLoadError(o.box_file + " corrupt: " + e.what());
  }
}

Problem bind_to_box(const Problem& problem, const BoxFile& box) {
  if (box.box.dimension() != problem.dimension()) {
    throw DomainFailure("box dimension does not match the problem");
  }
  return box.requirements.empty() ? problem : problem.with_requirements(box.requirements);
}

std::vector<std::size_t> parse_dims(const std::string& text, const Problem& problem) {
  std::vector<std::size_t> dims;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (auto idx = problem.index_of(item)) {
      dims.push_back(*idx);
      continue;
    }
    std::size_t pos = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(item, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (item.empty() || pos != item.size()) throw UsageError("--dims: '" + item + "' is not an index or DV name");
    if (v >= problem.dimension()) throw UsageError("--dims: index " + item + " out of range");
    dims.push_back(v);
  }
  if (dims.empty() || dims.size() % 2 != 0) throw UsageError("--dims needs an even number of entries: i,j[,k,l...]");
  for (std::size_t k = 0; k < dims.size(); k += 2) {
    if (dims[k] == dims[k + 1]) throw UsageError("--dims: a section needs two different DVs");
  }
  return dims;
}

Interval parse_interval(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw UsageError("--interval must be a,b");
  try {
    std::size_t p1 = 0, p2 = 0;
    const std::string a = text.substr(0, comma), b = text.substr(comma + 1);
    Interval iv{std::stod(a, &p1), std::stod(b, &p2)};
    if (p1 != a.size() || p2 != b.size()) throw std::invalid_argument("trailing characters");
    return iv;
  } catch (const std::exception&) {
    throw UsageError("--interval must be two numbers a,b");
  }
}

void print(std::ostream& out, const json& summary) { out << summary.dump() << "\n"; }

void write_json(const Options& o, const std::string& name, const json& j) {
  write_run_file(o.out, name, canonical_json(j));
}

}  // namespace

int run_command(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Solution-space co-design: baseline, solution box, sections, trade-off"};
  app.footer(kSchemaHelp);
  app.require_subcommand(1);
  app.fallthrough();

  Options o;
  app.add_option("--problem", o.problem, "Problem file (default: <out>/problem.json)");
  app.add_option("--out", o.out, "Run directory (default: runs/<timestamp>)");
  app.add_option("--seed", o.seed, "Random seed")->capture_default_str();

  std::optional<std::size_t> budget;
  auto* baseline_cmd = app.add_subcommand("baseline", "Optimize the baseline design, write baseline.json");
  baseline_cmd->add_option("--budget", budget, "Evaluation budget (default: problem file)");

  std::size_t solve_n = SolverParams{}.n_samples;
  std::size_t solve_validate_n = kDefaultValidationSamples;
  auto* solve_cmd = app.add_subcommand("solve", "Compute the solution box, write box.json and trace.json");
  solve_cmd->add_option("--n", solve_n, "Samples per solver iteration")->capture_default_str();
  solve_cmd->add_option("--validate-n", solve_validate_n, "Samples for the recorded purity")->capture_default_str();

  std::string dims_text;
  std::size_t section_n = 1000;
  std::string span_text = "design_space";
  auto* sections_cmd = app.add_subcommand("sections", "Write design sections for DV pairs");
  sections_cmd->add_option("--dims", dims_text, "DV pairs i,j[,k,l...] (indices or names)")->required();
  sections_cmd->add_option("--n", section_n, "Points per section")->capture_default_str();
  sections_cmd->add_option("--span", span_text, "On-axis span: design_space or box")->capture_default_str();
  sections_cmd->add_option("--box", o.box_file, "Box file inside the run directory")->capture_default_str();

  std::size_t validate_n = 10000;
  auto* validate_cmd = app.add_subcommand("validate", "Monte Carlo purity of the box");
  validate_cmd->add_option("--n", validate_n, "Samples")->capture_default_str();
  validate_cmd->add_option("--box", o.box_file, "Box file inside the run directory")->capture_default_str();

  std::string dv;
  std::string interval_text;
  auto* tradeoff_cmd = app.add_subcommand("tradeoff", "Restrict one DV and re-solve the others");
  tradeoff_cmd->add_option("--dv", dv, "Design variable name")->required();
  tradeoff_cmd->add_option("--interval", interval_text, "New interval a,b nested in the current one")->required();
  tradeoff_cmd->add_option("--box", o.box_file, "Box file inside the run directory")->capture_default_str();

  std::string addr = "127.0.0.1:8080";
  std::string static_dir;
  auto* serve_cmd = app.add_subcommand("serve", "Serve the run over HTTP");
  serve_cmd->add_option("--addr", addr, "HOST:PORT")->capture_default_str();
  serve_cmd->add_option("--static", static_dir, "Directory with UI assets served at /");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  if (o.out.empty()) o.out = default_out_dir();

  try {
    if (baseline_cmd->parsed()) {
      const Problem problem = load_problem(o);
      const BaselineResult b = compute_baseline(problem, o.seed, budget);
      write_json(o, "problem.json", problem.document());
      write_json(o, "baseline.json", to_json(b));
      update_manifest(o.out);
      print(out, {{"x_baseline", b.x_baseline.vector()}, {"qois", b.qois}, {"objective", b.objective},
                  {"evaluations_used", b.evaluations_used}, {"out", o.out}});
    } else if (solve_cmd->parsed()) {
      const Problem problem = load_problem(o);
      BaselineResult b;
      if (fs::is_regular_file(fs::path(o.out) / "baseline.json")) {
        b = baseline_from_json(read_run_json(o.out, "baseline.json"));
        if (b.x_baseline.size() != problem.dimension()) {
          throw DomainFailure("baseline.json does not match the problem dimension");
        }
      } else if (problem.baseline_config().x) {
        b = compute_baseline(problem, o.seed);
        write_json(o, "baseline.json", to_json(b));
      } else {
        throw DomainFailure("no baseline: run `baseline` first or give baseline.x in the problem file");
      }
      const Problem bound = bind_requirements(problem, b);
      SolverParams params;
      params.n_samples = solve_n;
      params.seed = o.seed;
      params.check();
      const SolveResult r = solve_box(bound, b.x_baseline, params);
      const BoxFile box = summarize_box(bound, r.box, params, solve_validate_n);
      write_json(o, "problem.json", problem.document());
      write_json(o, "box.json", to_json(box));
      write_json(o, "trace.json", to_json(r.trace));
      update_manifest(o.out);
      print(out, {{"mu", box.mu}, {"purity", box.purity}, {"intervals", to_json(box.box)}, {"out", o.out}});
    } else if (sections_cmd->parsed()) {
      const Problem problem = load_problem(o);
      const BoxFile box = load_box(o);
      const Problem bound = bind_to_box(problem, box);
      const auto dims = parse_dims(dims_text, problem);
      Span span;
      try {
        span = parse_span(span_text);
      } catch (const std::exception& e) {
        throw UsageError(e.what());
      }
      json written = json::array();
      for (std::size_t k = 0; k < dims.size(); k += 2) {
        const SectionData s = make_section(bound, box.box, dims[k], dims[k + 1], section_n, o.seed, span);
        write_section_files(o.out, s);
        std::size_t good = 0;
        for (const auto& p : s.points) good += p.classification.good() ? 1 : 0;
        written.push_back({{"dims", {s.i, s.j}}, {"points", s.points.size()}, {"good", good}});
      }
      update_manifest(o.out);
      print(out, {{"sections", std::move(written)}, {"out", o.out}});
    } else if (validate_cmd->parsed()) {
      const Problem problem = load_problem(o);
      const BoxFile box = load_box(o);
      const Validation v = validate_box(bind_to_box(problem, box), box.box, validate_n, o.seed);
      const json summary = {{"box", o.box_file}, {"n", v.n}, {"good", v.good}, {"purity", v.purity},
                            {"seed", o.seed}};
      write_json(o, "validation.json", summary);
      update_manifest(o.out);
      print(out, summary);
    } else if (tradeoff_cmd->parsed()) {
      const Problem problem = load_problem(o);
      const BoxFile box = load_box(o);
      const Problem bound = bind_to_box(problem, box);
      const Interval iv = parse_interval(interval_text);
      const SolveResult r = restrict_and_resolve(bound, box.box, dv, iv, box.params);
      const BoxFile restricted = summarize_box(bound, r.box, box.params, box.validation_samples);
      write_json(o, "box_tradeoff.json", to_json(restricted));
      write_json(o, "trace_tradeoff.json", to_json(r.trace));
      update_manifest(o.out);
      print(out, {{"mu", restricted.mu}, {"purity", restricted.purity},
                  {"intervals", to_json(restricted.box)}, {"out", o.out}});
    } else if (serve_cmd->parsed()) {
      const auto colon = addr.rfind(':');
      int port = -1;
      try {
        if (colon != std::string::npos) port = std::stoi(addr.substr(colon + 1));
      } catch (const std::exception&) {
      }
      if (port < 0 || port > 65535) throw UsageError("--addr must be HOST:PORT");
      auto session = RunSession::from_run(load_run(o.out));
      HttpServer server(*session, static_dir.empty() ? std::nullopt : std::optional<fs::path>(static_dir));
      const int bound_port = server.bind(addr.substr(0, colon), port);
      out << "serving " << o.out << " on http://" << addr.substr(0, colon) << ":" << bound_port << std::endl;
      server.listen();
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomain;
  }
  return kExitOk;
}

}  // namespace solspace
