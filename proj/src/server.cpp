#include "solspace/server.hpp"

#include <charconv>
#include <mutex>

#include "solspace/errors.hpp"
#include "solspace/sections.hpp"
#include "solspace/workflow.hpp"

namespace solspace {

using nlohmann::json;

namespace {

constexpr std::size_t kMaxSectionPoints = 100000;

std::optional<std::uint64_t> parse_uint(const std::string& text) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) return std::nullopt;
  return v;
}

struct BadRequest {
  std::string message;
};

json parse_body(const std::string& body) {
  if (body.empty()) return json::object();
  json j = json::parse(body, nullptr, false);
  if (j.is_discarded()) throw BadRequest{"body is not valid JSON"};
  if (!j.is_object()) throw BadRequest{"body must be a JSON object"};
  return j;
}

double number_field(const json& j, const char* key) {
  if (!j.contains(key)) throw BadRequest{std::string("missing field '") + key + "'"};
  if (!j[key].is_number()) throw BadRequest{std::string("field '") + key + "' must be a number"};
  return j[key].get<double>();
}

std::optional<std::uint64_t> uint_field(const json& j, const char* key) {
  if (!j.contains(key)) return std::nullopt;
  if (!j[key].is_number_unsigned()) {
    throw BadRequest{std::string("field '") + key + "' must be a non-negative integer"};
  }
  return j[key].get<std::uint64_t>();
}

}  // namespace

RunSession::RunSession(Problem bound, BaselineResult baseline, BoxFile box, SolverTrace trace)
    : problem_(std::move(bound)), baseline_(std::move(baseline)) {
  state_.box = std::move(box);
  state_.trace = std::move(trace);
}

RunSession::~RunSession() = default;

std::unique_ptr<RunSession> RunSession::from_run(const RunRecord& run) {
  Problem p = Problem::from_json(run.problem);
  Problem bound = run.box.requirements.empty() ? bind_requirements(p, run.baseline)
                                               : p.with_requirements(run.box.requirements);
  return std::make_unique<RunSession>(std::move(bound), run.baseline, run.box, run.trace);
}

std::uint64_t RunSession::revision() const {
  std::shared_lock lock(mutex_);
  return state_.revision;
}

void RunSession::wait_idle() {
  if (worker_.joinable()) worker_.join();
}

RunSession::State RunSession::snapshot() const {
  std::shared_lock lock(mutex_);
  return state_;
}

ApiResponse RunSession::with_revision(int status, json body, std::uint64_t revision) const {
  body["revision"] = revision;
  return {status, std::move(body)};
}

ApiResponse RunSession::error(int status, std::string code, std::string message) const {
  return with_revision(status, {{"code", std::move(code)}, {"message", std::move(message)}}, revision());
}

std::optional<ApiResponse> RunSession::acquire_mutation(const json& body) {
  const auto expected = uint_field(body, "revision");
  if (busy_.exchange(true)) return error(409, "mutation_in_flight", "another mutation is in progress");
  if (expected && *expected != revision()) {
    busy_ = false;
    return error(409, "stale_revision",
                 "request made against revision " + std::to_string(*expected) + ", current is " +
                     std::to_string(revision()));
  }
  return std::nullopt;
}

void RunSession::commit(BoxFile box, SolverTrace trace) {
  std::unique_lock lock(mutex_);
  state_.box = std::move(box);
  state_.trace = std::move(trace);
  state_.last_error.reset();
  ++state_.revision;
}

ApiResponse RunSession::handle_request(const ApiRequest& request) {
  try {
    const auto& p = request.path;
    const bool get = request.method == "GET";
    const bool post = request.method == "POST";
    if (p == "/api/problem" && get) return get_problem();
    if (p == "/api/box" && get) return get_box();
    if (p == "/api/section" && get) return get_section(request);
    if (p == "/api/trace" && get) return get_trace();
    if (p == "/api/baseline" && get) return get_baseline();
    if (p == "/api/tradeoff" && post) return post_tradeoff(request);
    if (p == "/api/solve" && post) return post_solve(request);
    for (const char* known : {"/api/problem", "/api/box", "/api/section", "/api/trace", "/api/baseline",
                              "/api/tradeoff", "/api/solve"}) {
      if (p == known) return error(405, "method_not_allowed", request.method + " not allowed on " + p);
    }
    return error(404, "not_found", "no endpoint " + p);
  } catch (const BadRequest& e) {
    return error(400, "malformed_request", e.message);
  } catch (const std::exception& e) {
    return error(500, "internal", e.what());
  }
}

ApiResponse RunSession::get_problem() {
  json vars = json::array();
  for (const auto& v : problem_.variables()) {
    vars.push_back({{"name", v.name},
                    {"unit", v.unit},
                    {"kind", to_string(v.kind)},
                    {"lower", v.ds_lower},
                    {"upper", v.ds_upper}});
  }
  json reqs = json::array();
  for (const auto& r : problem_.requirements()) reqs.push_back(to_json(r));
  return with_revision(200,
                       {{"problem", problem_.document()},
                        {"variables", std::move(vars)},
                        {"requirements", std::move(reqs)},
                        {"qois", problem_.qoi_order()}},
                       revision());
}

ApiResponse RunSession::get_box() {
  State s = snapshot();
  json body = to_json(s.box);
  body["status"] = solving_ ? "solving" : "idle";
  if (s.last_error) body["last_error"] = *s.last_error;
  return with_revision(200, std::move(body), s.revision);
}

ApiResponse RunSession::get_section(const ApiRequest& request) {
  auto query_uint = [&](const char* key, std::optional<std::uint64_t> fallback) -> std::uint64_t {
    auto it = request.query.find(key);
    if (it == request.query.end()) {
      if (!fallback) throw BadRequest{std::string("missing query parameter '") + key + "'"};
      return *fallback;
    }
    auto v = parse_uint(it->second);
    if (!v) throw BadRequest{std::string("query parameter '") + key + "' must be a non-negative integer"};
    return *v;
  };
  const auto i = query_uint("i", std::nullopt);
  const auto j = query_uint("j", std::nullopt);
  const auto n = query_uint("n", 1000);
  const auto seed = query_uint("seed", 0);
  const auto d = problem_.dimension();
  if (i >= d || j >= d || i == j) throw BadRequest{"i and j must be distinct indices below " + std::to_string(d)};
  if (n > kMaxSectionPoints) throw BadRequest{"n must not exceed " + std::to_string(kMaxSectionPoints)};
  Span span = Span::design_space;
  if (auto it = request.query.find("span"); it != request.query.end()) {
    try {
      span = parse_span(it->second);
    } catch (const std::exception& e) {
      throw BadRequest{e.what()};
    }
  }
  State s = snapshot();
  SectionData section = make_section(problem_, s.box.box, i, j, n, seed, span);
  return with_revision(200, to_json(section), s.revision);
}

ApiResponse RunSession::get_trace() {
  State s = snapshot();
  return with_revision(200, {{"trace", to_json(s.trace)}}, s.revision);
}

ApiResponse RunSession::get_baseline() {
  return with_revision(200, {{"baseline", to_json(baseline_)}}, revision());
}

ApiResponse RunSession::post_tradeoff(const ApiRequest& request) {
  const json body = parse_body(request.body);
  if (!body.contains("dv") || !body["dv"].is_string()) throw BadRequest{"field 'dv' must be a string"};
  const std::string dv = body["dv"].get<std::string>();
  const double lower = number_field(body, "lower");
  const double upper = number_field(body, "upper");
  if (auto rejected = acquire_mutation(body)) return *rejected;
  try {
    State s = snapshot();
    SolveResult r = restrict_and_resolve(problem_, s.box.box, dv, {lower, upper}, s.box.params);
    BoxFile box = summarize_box(problem_, r.box, s.box.params, s.box.validation_samples);
    commit(std::move(box), std::move(r.trace));
    busy_ = false;
  } catch (const TradeoffError& e) {
    busy_ = false;
    return error(422, "tradeoff_rejected", e.what());
  } catch (...) {
    busy_ = false;
    throw;
  }
  return get_box();
}

ApiResponse RunSession::post_solve(const ApiRequest& request) {
  const json body = parse_body(request.body);
  const auto seed = uint_field(body, "seed");
  bool wait = false;
  if (body.contains("wait")) {
    if (!body["wait"].is_boolean()) throw BadRequest{"field 'wait' must be a boolean"};
    wait = body["wait"].get<bool>();
  }
  if (auto rejected = acquire_mutation(body)) return *rejected;
  if (worker_.joinable()) worker_.join();
  SolverParams params = snapshot().box.params;
  if (seed) params.seed = *seed;
  solving_ = true;
  const std::size_t n_validate = snapshot().box.validation_samples;
  worker_ = std::jthread([this, params, n_validate] {
    try {
      SolveResult r = solve_box(problem_, baseline_.x_baseline, params);
      commit(summarize_box(problem_, r.box, params, n_validate ? n_validate : kDefaultValidationSamples),
             std::move(r.trace));
    } catch (const std::exception& e) {
      std::unique_lock lock(mutex_);
      state_.last_error = e.what();
    }
    solving_ = false;
    busy_ = false;
  });
  if (!wait) return with_revision(202, {{"status", "solving"}}, revision());
  worker_.join();
  State s = snapshot();
  if (s.last_error) return error(422, "solve_failed", *s.last_error);
  return get_box();
}

}  // namespace solspace
