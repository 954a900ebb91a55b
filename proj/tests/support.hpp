#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "solspace/problem.hpp"

namespace testsupport {

inline std::filesystem::path problem_path(const std::string& file) {
  return std::filesystem::path(SOLSPACE_PROBLEMS_DIR) / file;
}

inline solspace::Problem load(const std::string& file) { return solspace::Problem::load(problem_path(file)); }

struct QoiSpec {
  std::string name;
  std::string mapping;
  std::vector<std::string> parents;
};

inline nlohmann::json req(const std::string& id, const std::string& qoi, const std::string& cmp, double threshold) {
  return {{"id", id}, {"qoi", qoi}, {"comparator", cmp}, {"threshold", threshold}};
}

/// DVs on [lower, upper], each QoI fed directly by its parents.
inline nlohmann::json make_problem(const std::vector<std::string>& dvs, const std::vector<QoiSpec>& qois,
                                   nlohmann::json requirements, double lower = 0.0, double upper = 1.0) {
  nlohmann::json vars = nlohmann::json::array();
  nlohmann::json nodes = nlohmann::json::array();
  nlohmann::json edges = nlohmann::json::array();
  nlohmann::json mappings = nlohmann::json::object();
  for (const auto& dv : dvs) {
    vars.push_back({{"name", dv}, {"unit", "-"}, {"kind", "geometry"}, {"lower", lower}, {"upper", upper}});
    nodes.push_back({{"name", dv}, {"kind", "dv"}});
  }
  for (const auto& q : qois) {
    nodes.push_back({{"name", q.name}, {"kind", "qoi"}});
    for (const auto& p : q.parents) edges.push_back({p, q.name});
    mappings[q.name] = q.mapping;
  }
  return {{"schema_version", 1},
          {"name", "test"},
          {"variables", vars},
          {"adg", {{"nodes", nodes}, {"edges", edges}, {"mappings", mappings}}},
          {"requirements", requirements}};
}

/// The x1 + x2 <= 1 toy on the unit square.
inline solspace::Problem sum_toy() {
  return solspace::Problem::from_json(
      make_problem({"x1", "x2"}, {{"s", "sum", {"x1", "x2"}}}, {req("s", "s", "less_equal", 1.0)}));
}

/// x1 <= a and x2 <= b as independent requirements.
inline solspace::Problem separable_toy(double a, double b) {
  return solspace::Problem::from_json(
      make_problem({"x1", "x2"}, {{"q1", "identity", {"x1"}}, {"q2", "identity", {"x2"}}},
                   {req("q1", "q1", "less_equal", a), req("q2", "q2", "less_equal", b)}));
}

}  // namespace testsupport
