#pragma once

// Attribute dependency graph: design variables flow through intermediate
// attributes into quantities of interest. Each non-DV node carries the name
// of a mapping registered in a MappingRegistry.

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "solspace/design.hpp"

namespace solspace {

enum class NodeKind { dv, intermediate, qoi };

std::string_view to_string(NodeKind kind);
NodeKind parse_node_kind(std::string_view text);

/// Intermediate nodes may carry a record of several reals; DV and QoI nodes
/// carry exactly one.
using NodeValue = std::vector<double>;

struct MappingOutput {
  NodeValue values;
  std::optional<InfeasibleReason> failure;
  bool timed_out = false;

  static MappingOutput scalar(double v) { return {{v}, std::nullopt, false}; }
  static MappingOutput fail(InfeasibleReason r) { return {{}, r, false}; }
};

/// Pure function of the parent values, in edge order.
struct Mapping {
  std::optional<std::size_t> arity;  // nullopt: any arity >= 1
  std::function<MappingOutput(std::span<const NodeValue>)> fn;
};

class MappingRegistry {
 public:
  /// identity, square, plus_one, negate, sum, product, sum_of_squares,
  /// centered_sum_of_squares.
  static MappingRegistry builtins();

  void add(std::string name, Mapping mapping);
  const Mapping* find(std::string_view name) const;
  std::vector<std::string> names() const;

 private:
  std::map<std::string, Mapping, std::less<>> mappings_;
};

struct AdgNode {
  std::string name;
  NodeKind kind = NodeKind::intermediate;
};

/// Mutable graph description, as read from a problem file.
class Adg {
 public:
  void add_node(std::string name, NodeKind kind);
  void add_edge(std::string from, std::string to);
  void set_mapping(std::string node, std::string mapping);

  const std::vector<AdgNode>& nodes() const { return nodes_; }
  const std::vector<std::pair<std::string, std::string>>& edges() const { return edges_; }
  const std::map<std::string, std::string>& mappings() const { return mappings_; }
  const AdgNode* node(std::string_view name) const;

 private:
  std::vector<AdgNode> nodes_;
  std::vector<std::pair<std::string, std::string>> edges_;
  std::map<std::string, std::string> mappings_;
};

struct AdgDefect {
  enum class Kind {
    cycle,
    dangling_edge,
    arity_mismatch,
    missing_mapping,
    unknown_mapping,
    degree_violation,
    duplicate_node,
  };
  Kind kind;
  std::vector<std::string> nodes;
  std::string message;
};

struct AdgValidation {
  std::vector<std::string> order;  // topological order when ok()
  std::vector<AdgDefect> defects;

  bool ok() const { return defects.empty(); }
};

/// Structural check. Defects are reported as data; nothing throws.
/// The order is deterministic: among ready nodes the lexicographically
/// smallest name goes first, so it does not depend on insertion order.
AdgValidation validate_adg(const Adg& adg, const MappingRegistry& registry);

/// Immutable, index-resolved form of a validated ADG bound to a variable list.
class CompiledAdg {
 public:
  /// Throws ProblemError on any structural defect or when a DV node does not
  /// name a design variable.
  CompiledAdg(const Adg& adg, const MappingRegistry& registry,
              std::span<const DesignVariable> variables);
  CompiledAdg(const CompiledAdg&) = delete;
  CompiledAdg& operator=(const CompiledAdg&) = delete;

  /// Thread-safe and pure. Does not check bounds; see Problem::evaluate.
  Evaluation evaluate(const DesignPoint& x) const;

  const std::vector<std::string>& order() const { return order_; }
  const std::vector<std::string>& qoi_names() const { return qoi_names_; }

 private:
  struct Step {
    std::string name;
    NodeKind kind;
    std::size_t dv_index = 0;            // dv nodes
    std::vector<std::size_t> parents;     // indices into the step list
    const Mapping* mapping = nullptr;
  };
  std::vector<Step> steps_;
  std::vector<std::string> order_;
  std::vector<std::string> qoi_names_;
  MappingRegistry registry_;  // owns the mappings the steps point into
};

}  // namespace solspace
