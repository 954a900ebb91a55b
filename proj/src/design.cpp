#include "solspace/design.hpp"

#include "solspace/errors.hpp"

namespace solspace {

std::string_view to_string(DvKind kind) {
  switch (kind) {
    case DvKind::control: return "control";
    case DvKind::actuation: return "actuation";
    case DvKind::geometry: return "geometry";
  }
  return "geometry";
}

DvKind parse_dv_kind(std::string_view text) {
  if (text == "control") return DvKind::control;
  if (text == "actuation") return DvKind::actuation;
  if (text == "geometry") return DvKind::geometry;
  throw ProblemError("unknown variable kind '" + std::string(text) + "'");
}

std::string_view to_string(Comparator c) {
  return c == Comparator::less_equal ? "less_equal" : "greater_equal";
}

Comparator parse_comparator(std::string_view text) {
  if (text == "less_equal" || text == "<=") return Comparator::less_equal;
  if (text == "greater_equal" || text == ">=") return Comparator::greater_equal;
  throw ProblemError("unknown comparator '" + std::string(text) + "'");
}

std::string_view to_string(InfeasibleReason reason) {
  return reason == InfeasibleReason::unreachable_workspace ? "unreachable_workspace"
                                                           : "simulation_failed";
}

InfeasibleReason parse_infeasible_reason(std::string_view text) {
  if (text == "unreachable_workspace") return InfeasibleReason::unreachable_workspace;
  if (text == "simulation_failed") return InfeasibleReason::simulation_failed;
  throw Error("unknown infeasible reason '" + std::string(text) + "'");
}

Classification classify(const Evaluation& evaluation, std::span<const Requirement> requirements) {
  Classification out;
  bool undefined_hit = false;
  for (const auto& req : requirements) {
    auto it = evaluation.qois.find(req.qoi);
    if (it == evaluation.qois.end() || !it->second) {
      out.violated.insert(req.id);
      undefined_hit = true;
    } else if (!req.satisfied_by(*it->second)) {
      out.violated.insert(req.id);
    }
  }
  if (undefined_hit) {
    out.infeasible_reason = evaluation.infeasible_reason.value_or(InfeasibleReason::simulation_failed);
  }
  return out;
}

}  // namespace solspace
