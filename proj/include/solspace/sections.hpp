#pragma once

// Design sections: 2D views of the design space through the solution box.
// On-axis coordinates cover either the box projection or the full design
// range; every off-axis coordinate is drawn uniformly inside the box.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "solspace/box.hpp"
#include "solspace/problem.hpp"

namespace solspace {

enum class Span { box, design_space };
std::string_view to_string(Span span);
Span parse_span(std::string_view text);

enum class SectionFormat { json, csv, svg };

struct AxisInfo {
  std::string name;
  std::string unit;
  double ds_lower = 0.0;
  double ds_upper = 1.0;
  friend bool operator==(const AxisInfo&, const AxisInfo&) = default;
};

struct SectionPoint {
  DesignPoint design;  // full design, so any point can be re-evaluated
  Classification classification;
  friend bool operator==(const SectionPoint&, const SectionPoint&) = default;
};

struct SectionData {
  std::size_t i = 0;
  std::size_t j = 1;
  Span span = Span::design_space;
  std::uint64_t seed = 0;
  Interval rect_i;
  Interval rect_j;
  AxisInfo axis_i;
  AxisInfo axis_j;
  std::vector<std::string> requirement_ids;  // colour priority order
  std::string provenance;
  std::vector<SectionPoint> points;

  friend bool operator==(const SectionData&, const SectionData&) = default;
};

inline constexpr std::string_view kOffAxisProvenance = "off-axis coordinates uniform inside box";

/// Throws std::invalid_argument unless i != j and both are below the
/// problem dimension.
SectionData make_section(const Problem& problem, const Box& box, std::size_t i, std::size_t j,
                         std::size_t n, std::uint64_t seed, Span span = Span::design_space);

/// green for good; red when the first requirement is violated (this includes
/// every dual violation); blue otherwise.
std::string_view point_color(const Classification& c, std::span<const std::string> requirement_ids);

/// "good" or the violated requirement ids joined with '+'.
std::string point_label(const Classification& c);

std::string export_section(const SectionData& section, SectionFormat format);
nlohmann::json to_json(const SectionData& section);
SectionData section_from_json(const nlohmann::json& j);

}  // namespace solspace
