#pragma once

#include <cstddef>
#include <initializer_list>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace solspace {

/// Partition of design variables into sub-systems.
enum class DvKind { control, actuation, geometry };

std::string_view to_string(DvKind kind);
DvKind parse_dv_kind(std::string_view text);

struct DesignVariable {
  std::string name;
  std::string unit;
  DvKind kind = DvKind::geometry;
  double ds_lower = 0.0;
  double ds_upper = 1.0;

  double width() const { return ds_upper - ds_lower; }
};

/// One concrete design: a value per design variable, in problem order.
class DesignPoint {
 public:
  DesignPoint() = default;
  explicit DesignPoint(std::vector<double> values) : values_(std::move(values)) {}
  DesignPoint(std::initializer_list<double> values) : values_(values) {}

  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }
  std::span<const double> values() const { return values_; }
  const std::vector<double>& vector() const { return values_; }

  friend bool operator==(const DesignPoint&, const DesignPoint&) = default;

 private:
  std::vector<double> values_;
};

enum class Comparator { less_equal, greater_equal };

std::string_view to_string(Comparator c);
Comparator parse_comparator(std::string_view text);

struct Requirement {
  std::string id;
  std::string qoi;
  Comparator comparator = Comparator::less_equal;
  double threshold = 0.0;

  bool satisfied_by(double value) const {
    return comparator == Comparator::less_equal ? value <= threshold : value >= threshold;
  }

  friend bool operator==(const Requirement&, const Requirement&) = default;
};

enum class InfeasibleReason { unreachable_workspace, simulation_failed };

std::string_view to_string(InfeasibleReason reason);
InfeasibleReason parse_infeasible_reason(std::string_view text);

/// QoI values of one design. An absent value means the QoI is undefined
/// because some mapping upstream of it failed.
struct Evaluation {
  std::map<std::string, std::optional<double>> qois;
  std::optional<InfeasibleReason> infeasible_reason;
  bool timed_out = false;

  bool feasible() const { return !infeasible_reason && !timed_out; }
};

struct Classification {
  std::set<std::string> violated;
  std::optional<InfeasibleReason> infeasible_reason;

  bool good() const { return violated.empty(); }
  friend bool operator==(const Classification&, const Classification&) = default;
};

/// Violated = requirements whose comparator fails or whose QoI is undefined.
/// Requirements naming a QoI absent from the map are treated as undefined.
Classification classify(const Evaluation& evaluation, std::span<const Requirement> requirements);

}  // namespace solspace
