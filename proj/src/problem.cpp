#include "solspace/problem.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <set>
#include <stdexcept>

#include "solspace/errors.hpp"

namespace solspace {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, std::string_view where, std::initializer_list<std::string_view> allowed) {
  if (!obj.is_object()) throw ProblemError(std::string(where) + ": expected an object");
  for (const auto& [key, _] : obj.items()) {
    bool known = false;
    for (auto a : allowed) known = known || key == a;
    if (!known) throw ProblemError(std::string(where) + ": unknown field '" + key + "'");
  }
}

const json& require(const json& obj, std::string_view where, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ProblemError(std::string(where) + ": missing field '" + key + "'");
  return *it;
}

double real(const json& v, std::string_view what) {
  if (!v.is_number()) throw ProblemError(std::string(what) + ": expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ProblemError(std::string(what) + ": must be finite");
  return d;
}

std::string text(const json& v, std::string_view what) {
  if (!v.is_string()) throw ProblemError(std::string(what) + ": expected a string");
  return v.get<std::string>();
}

arm::Vec2 point2(const json& v, std::string_view what) {
  if (!v.is_array() || v.size() != 2) throw ProblemError(std::string(what) + ": expected [x, y]");
  return {real(v[0], what), real(v[1], what)};
}

arm::Task parse_task(const json& j) {
  reject_unknown(j, "task", {"pick", "place", "eps_pos", "omega_tol", "t_hold", "t_max"});
  arm::Task t;
  t.pick = point2(require(j, "task", "pick"), "task.pick");
  t.place = point2(require(j, "task", "place"), "task.place");
  if (j.contains("eps_pos")) t.eps_pos = real(j["eps_pos"], "task.eps_pos");
  if (j.contains("omega_tol")) t.omega_tol = real(j["omega_tol"], "task.omega_tol");
  if (j.contains("t_hold")) t.t_hold = real(j["t_hold"], "task.t_hold");
  if (j.contains("t_max")) t.t_max = real(j["t_max"], "task.t_max");
  if (!(t.eps_pos > 0.0) || t.t_hold < 0.0 || !(t.t_max > 0.0)) {
    throw ProblemError("task: need eps_pos > 0, t_hold >= 0, t_max > 0");
  }
  return t;
}

arm::Constants parse_constants(const json& j) {
  reject_unknown(j, "constants", {"rho", "payload", "gravity", "dt", "margin_ratio"});
  arm::Constants c;
  if (j.contains("rho")) c.rho = real(j["rho"], "constants.rho");
  if (j.contains("payload")) c.payload = real(j["payload"], "constants.payload");
  if (j.contains("gravity")) c.gravity = real(j["gravity"], "constants.gravity");
  if (j.contains("dt")) c.dt = real(j["dt"], "constants.dt");
  if (j.contains("margin_ratio")) c.margin_ratio = real(j["margin_ratio"], "constants.margin_ratio");
  if (!(c.rho > 0.0) || c.payload < 0.0 || !(c.dt > 0.0) || c.margin_ratio < 0.0) {
    throw ProblemError("constants: need rho > 0, payload >= 0, dt > 0, margin_ratio >= 0");
  }
  return c;
}

}  // namespace

arm::ArmParams arm_params_from(std::span<const double> v, const arm::Constants& constants) {
  arm::ArmParams p = arm::ArmParams::with_constants(constants);
  p.l1 = v[0];
  p.l2 = v[1];
  p.m_mot = v[2];
  p.r_mot = v[3];
  p.tau1_max = v[4];
  p.tau2_max = v[5];
  p.kp1 = v[6];
  p.kd1 = v[7];
  p.kp2 = v[8];
  p.kd2 = v[9];
  return p;
}

void register_arm_mappings(MappingRegistry& registry, const arm::Task& task,
                           const arm::Constants& constants) {
  registry.add("arm_cycle", {kArmDvOrder.size(), [task, constants](std::span<const NodeValue> in) {
                               std::array<double, kArmDvOrder.size()> v{};
                               for (std::size_t i = 0; i < v.size(); ++i) v[i] = in[i].at(0);
                               const arm::ArmParams p = arm_params_from(v, constants);
                               arm::SimOptions opts;
                               opts.dt = constants.dt;
                               opts.margin_ratio = constants.margin_ratio;
                               const arm::SimResult r = arm::simulate_cycle(p, task, opts);
                               if (!r.reachable) {
                                 return MappingOutput::fail(InfeasibleReason::unreachable_workspace);
                               }
                               if (!std::isfinite(r.L) || !std::isfinite(r.t_cyc)) {
                                 return MappingOutput::fail(InfeasibleReason::simulation_failed);
                               }
                               return MappingOutput{{r.t_cyc, r.L}, std::nullopt, r.timed_out};
                             }});
  registry.add("arm_t_cyc", {1, [](std::span<const NodeValue> in) {
                               return MappingOutput::scalar(in[0].at(0));
                             }});
  registry.add("arm_energy", {1, [](std::span<const NodeValue> in) {
                                return MappingOutput::scalar(in[0].at(1));
                              }});
}

Problem Problem::from_json(const json& doc) { return from_json(doc, MappingRegistry::builtins()); }

Problem Problem::from_json(const json& doc, MappingRegistry registry) {
  reject_unknown(doc, "problem",
                 {"schema_version", "name", "description", "variables", "adg", "requirements", "task",
                  "constants", "baseline"});
  if (doc.contains("schema_version") && doc["schema_version"] != kProblemSchemaVersion) {
    throw ProblemError("problem: unsupported schema_version");
  }
  Problem p;
  p.document_ = doc;

  const json& vars = require(doc, "problem", "variables");
  if (!vars.is_array() || vars.empty()) throw ProblemError("variables: expected a non-empty array");
  std::set<std::string> names;
  for (const auto& v : vars) {
    reject_unknown(v, "variable", {"name", "unit", "kind", "lower", "upper"});
    DesignVariable dv;
    dv.name = text(require(v, "variable", "name"), "variable.name");
    dv.unit = v.contains("unit") ? text(v["unit"], "variable.unit") : "";
    dv.kind = parse_dv_kind(text(require(v, "variable", "kind"), "variable.kind"));
    dv.ds_lower = real(require(v, "variable", "lower"), "variable.lower");
    dv.ds_upper = real(require(v, "variable", "upper"), "variable.upper");
    if (!(dv.ds_lower < dv.ds_upper)) {
      throw ProblemError("variable '" + dv.name + "': lower must be strictly below upper");
    }
    if (!names.insert(dv.name).second) throw ProblemError("duplicate variable '" + dv.name + "'");
    p.variables_.push_back(std::move(dv));
  }

  if (doc.contains("constants")) p.constants_ = parse_constants(doc["constants"]);
  if (doc.contains("task")) {
    p.task_ = parse_task(doc["task"]);
    register_arm_mappings(registry, *p.task_, p.constants_);
  }

  const json& adg = require(doc, "problem", "adg");
  reject_unknown(adg, "adg", {"nodes", "edges", "mappings"});
  for (const auto& n : require(adg, "adg", "nodes")) {
    reject_unknown(n, "adg node", {"name", "kind"});
    p.adg_.add_node(text(require(n, "adg node", "name"), "node.name"),
                    parse_node_kind(text(require(n, "adg node", "kind"), "node.kind")));
  }
  for (const auto& e : require(adg, "adg", "edges")) {
    if (!e.is_array() || e.size() != 2) throw ProblemError("adg edge: expected [from, to]");
    p.adg_.add_edge(text(e[0], "edge.from"), text(e[1], "edge.to"));
  }
  const json& mappings = require(adg, "adg", "mappings");
  if (!mappings.is_object()) throw ProblemError("adg.mappings: expected an object");
  for (const auto& [node, name] : mappings.items()) p.adg_.set_mapping(node, text(name, "mapping"));

  p.compiled_ = std::make_shared<const CompiledAdg>(p.adg_, registry, p.variables_);

  std::vector<Requirement> reqs;
  if (doc.contains("requirements")) {
    for (const auto& r : doc["requirements"]) {
      reject_unknown(r, "requirement", {"id", "qoi", "comparator", "threshold"});
      Requirement req;
      req.id = text(require(r, "requirement", "id"), "requirement.id");
      req.qoi = text(require(r, "requirement", "qoi"), "requirement.qoi");
      req.comparator = parse_comparator(text(require(r, "requirement", "comparator"), "requirement.comparator"));
      req.threshold = real(require(r, "requirement", "threshold"), "requirement.threshold");
      reqs.push_back(std::move(req));
    }
  }
  p = p.with_requirements(std::move(reqs));

  if (doc.contains("baseline")) {
    const json& b = doc["baseline"];
    reject_unknown(b, "baseline", {"weights", "budget", "x"});
    if (b.contains("weights")) {
      for (const auto& [qoi, w] : b["weights"].items()) {
        const double weight = real(w, "baseline.weights");
        if (weight < 0.0) throw ProblemError("baseline.weights: must be non-negative");
        p.baseline_.weights[qoi] = weight;
      }
    }
    if (b.contains("budget")) {
      if (!b["budget"].is_number_unsigned()) throw ProblemError("baseline.budget: expected a count");
      p.baseline_.budget = b["budget"].get<std::size_t>();
    }
    if (b.contains("x")) {
      std::vector<double> x;
      for (const auto& v : b["x"]) x.push_back(real(v, "baseline.x"));
      DesignPoint point(std::move(x));
      try {
        p.check_point(point);
      } catch (const std::invalid_argument& e) {
        throw ProblemError(std::string("baseline.x: ") + e.what());
      }
      p.baseline_.x = std::move(point);
    }
  }
  return p;
}

Problem Problem::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ProblemError("cannot open problem file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ProblemError(path.string() + ": " + e.what());
  }
  return from_json(doc);
}

std::optional<std::size_t> Problem::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < variables_.size(); ++i) {
    if (variables_[i].name == name) return i;
  }
  return std::nullopt;
}

std::vector<std::string> Problem::qoi_order() const {
  std::vector<std::string> out;
  for (const auto& n : adg_.nodes()) {
    if (n.kind == NodeKind::qoi) out.push_back(n.name);
  }
  return out;
}

Problem Problem::with_requirements(std::vector<Requirement> requirements) const {
  std::set<std::string> ids;
  const auto& qois = compiled_->qoi_names();
  for (const auto& r : requirements) {
    if (std::find(qois.begin(), qois.end(), r.qoi) == qois.end()) {
      throw ProblemError("requirement '" + r.id + "' refers to unknown QoI '" + r.qoi + "'");
    }
    if (!std::isfinite(r.threshold)) throw ProblemError("requirement '" + r.id + "': threshold must be finite");
    if (!ids.insert(r.id).second) throw ProblemError("duplicate requirement id '" + r.id + "'");
  }
  Problem copy = *this;
  copy.requirements_ = std::move(requirements);
  return copy;
}

void Problem::check_point(const DesignPoint& x) const {
  if (x.size() != variables_.size()) {
    throw std::invalid_argument("design point has " + std::to_string(x.size()) + " values, problem has " +
                                std::to_string(variables_.size()) + " variables");
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto& v = variables_[i];
    if (!(x[i] >= v.ds_lower && x[i] <= v.ds_upper)) {
      throw std::invalid_argument("value " + std::to_string(x[i]) + " of '" + v.name +
                                  "' is outside its design-space bounds");
    }
  }
}

Evaluation Problem::evaluate(const DesignPoint& x) const {
  check_point(x);
  return compiled_->evaluate(x);
}

Classification Problem::classify(const DesignPoint& x) const {
  return solspace::classify(evaluate(x), requirements_);
}

}  // namespace solspace
