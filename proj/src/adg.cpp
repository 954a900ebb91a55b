#include "solspace/adg.hpp"

#include <algorithm>
#include <queue>
#include <set>
#include <unordered_map>

#include "solspace/errors.hpp"

namespace solspace {

std::string_view to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::dv: return "dv";
    case NodeKind::intermediate: return "intermediate";
    case NodeKind::qoi: return "qoi";
  }
  return "intermediate";
}

NodeKind parse_node_kind(std::string_view text) {
  if (text == "dv") return NodeKind::dv;
  if (text == "intermediate") return NodeKind::intermediate;
  if (text == "qoi") return NodeKind::qoi;
  throw ProblemError("unknown node kind '" + std::string(text) + "'");
}

namespace {

MappingOutput unary(std::span<const NodeValue> in, double (*f)(double)) {
  return MappingOutput::scalar(f(in[0].at(0)));
}

template <typename Fold>
Mapping variadic(Fold fold) {
  return {std::nullopt, [fold](std::span<const NodeValue> in) {
            double acc = fold.init;
            for (const auto& v : in) acc = fold(acc, v.at(0));
            return MappingOutput::scalar(acc);
          }};
}

struct SumFold {
  double init = 0.0;
  double operator()(double acc, double v) const { return acc + v; }
};
struct ProductFold {
  double init = 1.0;
  double operator()(double acc, double v) const { return acc * v; }
};
struct SquaresFold {
  double init = 0.0;
  double operator()(double acc, double v) const { return acc + v * v; }
};
struct CenteredSquaresFold {
  double init = 0.0;
  double operator()(double acc, double v) const { return acc + (v - 0.5) * (v - 0.5); }
};

}  // namespace

MappingRegistry MappingRegistry::builtins() {
  MappingRegistry r;
  r.add("identity", {1, [](auto in) { return unary(in, [](double v) { return v; }); }});
  r.add("square", {1, [](auto in) { return unary(in, [](double v) { return v * v; }); }});
  r.add("plus_one", {1, [](auto in) { return unary(in, [](double v) { return v + 1.0; }); }});
  r.add("negate", {1, [](auto in) { return unary(in, [](double v) { return -v; }); }});
  r.add("sum", variadic(SumFold{}));
  r.add("product", variadic(ProductFold{}));
  r.add("sum_of_squares", variadic(SquaresFold{}));
  // Sphere centred at 0.5 in every coordinate.
  r.add("centered_sum_of_squares", variadic(CenteredSquaresFold{}));
  return r;
}

void MappingRegistry::add(std::string name, Mapping mapping) {
  mappings_.insert_or_assign(std::move(name), std::move(mapping));
}

const Mapping* MappingRegistry::find(std::string_view name) const {
  auto it = mappings_.find(name);
  return it == mappings_.end() ? nullptr : &it->second;
}

std::vector<std::string> MappingRegistry::names() const {
  std::vector<std::string> out;
  for (const auto& [name, _] : mappings_) out.push_back(name);
  return out;
}

void Adg::add_node(std::string name, NodeKind kind) { nodes_.push_back({std::move(name), kind}); }

void Adg::add_edge(std::string from, std::string to) {
  edges_.emplace_back(std::move(from), std::move(to));
}

void Adg::set_mapping(std::string node, std::string mapping) {
  mappings_.insert_or_assign(std::move(node), std::move(mapping));
}

const AdgNode* Adg::node(std::string_view name) const {
  auto it = std::find_if(nodes_.begin(), nodes_.end(), [&](const AdgNode& n) { return n.name == name; });
  return it == nodes_.end() ? nullptr : &*it;
}

AdgValidation validate_adg(const Adg& adg, const MappingRegistry& registry) {
  AdgValidation report;
  auto defect = [&](AdgDefect::Kind kind, std::vector<std::string> nodes, std::string message) {
    report.defects.push_back({kind, std::move(nodes), std::move(message)});
  };

  std::map<std::string, NodeKind> kinds;
  for (const auto& n : adg.nodes()) {
    if (!kinds.emplace(n.name, n.kind).second) {
      defect(AdgDefect::Kind::duplicate_node, {n.name}, "duplicate node '" + n.name + "'");
    }
  }

  std::map<std::string, std::size_t> in_degree, out_degree;
  std::map<std::string, std::vector<std::string>> children;
  for (const auto& [name, _] : kinds) in_degree[name] = out_degree[name] = 0;
  for (const auto& [from, to] : adg.edges()) {
    if (!kinds.contains(from) || !kinds.contains(to)) {
      defect(AdgDefect::Kind::dangling_edge, {from, to},
             "dangling edge " + from + " -> " + to);
      continue;
    }
    ++in_degree[to];
    ++out_degree[from];
    children[from].push_back(to);
  }

  for (const auto& [name, kind] : kinds) {
    if (kind == NodeKind::dv && in_degree[name] != 0) {
      defect(AdgDefect::Kind::degree_violation, {name}, "dv node '" + name + "' has incoming edges");
    }
    if (kind == NodeKind::qoi && out_degree[name] != 0) {
      defect(AdgDefect::Kind::degree_violation, {name}, "qoi node '" + name + "' has outgoing edges");
    }
    if (kind == NodeKind::dv) {
      if (adg.mappings().contains(name)) {
        defect(AdgDefect::Kind::degree_violation, {name}, "dv node '" + name + "' must not have a mapping");
      }
      continue;
    }
    auto m = adg.mappings().find(name);
    if (m == adg.mappings().end()) {
      defect(AdgDefect::Kind::missing_mapping, {name}, "node '" + name + "' has no mapping");
      continue;
    }
    const Mapping* mapping = registry.find(m->second);
    if (mapping == nullptr) {
      defect(AdgDefect::Kind::unknown_mapping, {name},
             "node '" + name + "' refers to unknown mapping '" + m->second + "'");
      continue;
    }
    const std::size_t deg = in_degree[name];
    const bool arity_ok = mapping->arity ? *mapping->arity == deg : deg >= 1;
    if (!arity_ok) {
      defect(AdgDefect::Kind::arity_mismatch, {name},
             "arity mismatch at '" + name + "': in-degree " + std::to_string(deg) + ", mapping '" +
                 m->second + "' expects " +
                 (mapping->arity ? std::to_string(*mapping->arity) : std::string("at least 1")));
    }
  }
  for (const auto& [node, _] : adg.mappings()) {
    if (!kinds.contains(node)) {
      defect(AdgDefect::Kind::dangling_edge, {node}, "mapping for unknown node '" + node + "'");
    }
  }

  // Kahn with a sorted ready set.
  std::set<std::string> ready;
  auto remaining = in_degree;
  for (const auto& [name, deg] : remaining) {
    if (deg == 0) ready.insert(name);
  }
  std::vector<std::string> order;
  while (!ready.empty()) {
    std::string next = *ready.begin();
    ready.erase(ready.begin());
    order.push_back(next);
    for (const auto& child : children[next]) {
      if (--remaining[child] == 0) ready.insert(child);
    }
  }
  if (order.size() != kinds.size()) {
    std::vector<std::string> cyclic;
    for (const auto& [name, deg] : remaining) {
      if (deg > 0) cyclic.push_back(name);
    }
    std::string msg = "cycle {";
    for (std::size_t i = 0; i < cyclic.size(); ++i) msg += (i ? "," : "") + cyclic[i];
    msg += "}";
    defect(AdgDefect::Kind::cycle, cyclic, msg);
  }
  if (report.ok()) report.order = std::move(order);
  return report;
}

CompiledAdg::CompiledAdg(const Adg& adg, const MappingRegistry& registry,
                         std::span<const DesignVariable> variables)
    : registry_(registry) {
  AdgValidation report = validate_adg(adg, registry_);
  if (!report.ok()) {
    std::string msg = "invalid ADG:";
    for (const auto& d : report.defects) msg += " " + d.message + ";";
    throw ProblemError(msg);
  }
  order_ = report.order;

  std::unordered_map<std::string, std::size_t> position;
  for (std::size_t i = 0; i < order_.size(); ++i) position[order_[i]] = i;

  steps_.resize(order_.size());
  for (std::size_t i = 0; i < order_.size(); ++i) {
    Step& s = steps_[i];
    s.name = order_[i];
    s.kind = adg.node(s.name)->kind;
    if (s.kind == NodeKind::dv) {
      auto it = std::find_if(variables.begin(), variables.end(),
                             [&](const DesignVariable& v) { return v.name == s.name; });
      if (it == variables.end()) {
        throw ProblemError("dv node '" + s.name + "' does not name a design variable");
      }
      s.dv_index = static_cast<std::size_t>(it - variables.begin());
    } else {
      s.mapping = registry_.find(adg.mappings().at(s.name));
    }
    if (s.kind == NodeKind::qoi) qoi_names_.push_back(s.name);
  }
  // Parent order is the order edges into a node appear in the file.
  for (const auto& [from, to] : adg.edges()) {
    steps_[position.at(to)].parents.push_back(position.at(from));
  }
  for (const auto& v : variables) {
    const AdgNode* n = adg.node(v.name);
    if (n == nullptr || n->kind != NodeKind::dv) {
      throw ProblemError("design variable '" + v.name + "' has no dv node in the ADG");
    }
  }
}

Evaluation CompiledAdg::evaluate(const DesignPoint& x) const {
  std::vector<std::optional<NodeValue>> values(steps_.size());
  Evaluation out;
  std::vector<NodeValue> args;
  for (std::size_t i = 0; i < steps_.size(); ++i) {
    const Step& s = steps_[i];
    if (s.kind == NodeKind::dv) {
      values[i] = NodeValue{x[s.dv_index]};
    } else {
      args.clear();
      bool defined = true;
      for (std::size_t p : s.parents) {
        if (!values[p]) {
          defined = false;
          break;
        }
        args.push_back(*values[p]);
      }
      if (defined) {
        MappingOutput r = s.mapping->fn(args);
        out.timed_out = out.timed_out || r.timed_out;
        if (r.failure) {
          if (!out.infeasible_reason) out.infeasible_reason = r.failure;
        } else {
          values[i] = std::move(r.values);
        }
      }
    }
    if (s.kind == NodeKind::qoi) {
      if (values[i] && values[i]->size() == 1) {
        out.qois[s.name] = (*values[i])[0];
      } else {
        if (values[i] && !out.infeasible_reason) {
          out.infeasible_reason = InfeasibleReason::simulation_failed;
        }
        out.qois[s.name] = std::nullopt;
      }
    }
  }
  return out;
}

}  // namespace solspace
