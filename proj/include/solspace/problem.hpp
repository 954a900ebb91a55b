#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "solspace/adg.hpp"
#include "solspace/arm.hpp"
#include "solspace/design.hpp"

namespace solspace {

inline constexpr int kProblemSchemaVersion = 1;

/// Optional "baseline" section of a problem file.
struct BaselineConfig {
  std::map<std::string, double> weights;
  std::size_t budget = 2000;
  std::optional<DesignPoint> x;  // literal baseline, bypasses the optimizer
};

/// Arm DVs in the parent order expected by the arm_cycle mapping.
inline constexpr std::array<const char*, 10> kArmDvOrder = {
    "l1", "l2", "m_mot", "r_mot", "tau1_max", "tau2_max", "kp1", "kd1", "kp2", "kd2"};

arm::ArmParams arm_params_from(std::span<const double> dv_values, const arm::Constants& constants);

/// Registers arm_cycle (10 parents -> record {t_cyc, L}), arm_t_cyc and
/// arm_energy (record -> scalar) bound to the given task and constants.
void register_arm_mappings(MappingRegistry& registry, const arm::Task& task,
                           const arm::Constants& constants);

/// A loaded, validated problem. Immutable after construction and cheap to copy.
class Problem {
 public:
  /// Throws ProblemError on schema violations, unknown fields, degenerate
  /// bounds or an invalid ADG.
  static Problem from_json(const nlohmann::json& doc);
  static Problem load(const std::filesystem::path& path);
  /// Same problem, built on a caller-supplied registry (extra mappings).
  static Problem from_json(const nlohmann::json& doc, MappingRegistry registry);

  const std::vector<DesignVariable>& variables() const { return variables_; }
  std::size_t dimension() const { return variables_.size(); }
  std::optional<std::size_t> index_of(std::string_view name) const;

  const Adg& adg() const { return adg_; }
  /// QoI node names in the order the problem file declares them.
  std::vector<std::string> qoi_order() const;
  const CompiledAdg& compiled() const { return *compiled_; }
  const std::vector<Requirement>& requirements() const { return requirements_; }
  const BaselineConfig& baseline_config() const { return baseline_; }
  const std::optional<arm::Task>& task() const { return task_; }
  const arm::Constants& constants() const { return constants_; }
  const nlohmann::json& document() const { return document_; }

  /// Same problem with a different requirement list (e.g. baseline-derived).
  Problem with_requirements(std::vector<Requirement> requirements) const;

  /// Throws std::invalid_argument on wrong length or out-of-bounds values.
  void check_point(const DesignPoint& x) const;

  /// Bounds-checked, pure, thread-safe.
  Evaluation evaluate(const DesignPoint& x) const;
  Classification classify(const DesignPoint& x) const;

 private:
  std::vector<DesignVariable> variables_;
  Adg adg_;
  std::shared_ptr<const CompiledAdg> compiled_;
  std::vector<Requirement> requirements_;
  BaselineConfig baseline_;
  std::optional<arm::Task> task_;
  arm::Constants constants_;
  nlohmann::json document_;
};

}  // namespace solspace
