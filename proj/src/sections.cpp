#include "solspace/sections.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "solspace/parallel.hpp"
#include "solspace/rng.hpp"

namespace solspace {

namespace {

constexpr double kSvgWidth = 480.0;
constexpr double kSvgHeight = 480.0;
constexpr double kMarginLeft = 72.0;
constexpr double kMarginRight = 20.0;
constexpr double kMarginTop = 20.0;
constexpr double kMarginBottom = 60.0;

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string axis_title(const AxisInfo& a) {
  return a.unit.empty() ? a.name : a.name + " [" + a.unit + "]";
}

std::string render_svg(const SectionData& s) {
  const double plot_w = kSvgWidth - kMarginLeft - kMarginRight;
  const double plot_h = kSvgHeight - kMarginTop - kMarginBottom;
  auto px = [&](double v) {
    return kMarginLeft + (v - s.axis_i.ds_lower) / (s.axis_i.ds_upper - s.axis_i.ds_lower) * plot_w;
  };
  auto py = [&](double v) {
    return kMarginTop + plot_h - (v - s.axis_j.ds_lower) / (s.axis_j.ds_upper - s.axis_j.ds_lower) * plot_h;
  };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"480\" height=\"480\" viewBox=\"0 0 480 480\">\n";
  os << "<rect x=\"0\" y=\"0\" width=\"480\" height=\"480\" fill=\"white\"/>\n";
  // axes
  os << "<g stroke=\"#444444\" stroke-width=\"1\">\n";
  os << "<line x1=\"" << fmt("%.2f", kMarginLeft) << "\" y1=\"" << fmt("%.2f", kMarginTop + plot_h)
     << "\" x2=\"" << fmt("%.2f", kMarginLeft + plot_w) << "\" y2=\"" << fmt("%.2f", kMarginTop + plot_h)
     << "\"/>\n";
  os << "<line x1=\"" << fmt("%.2f", kMarginLeft) << "\" y1=\"" << fmt("%.2f", kMarginTop) << "\" x2=\""
     << fmt("%.2f", kMarginLeft) << "\" y2=\"" << fmt("%.2f", kMarginTop + plot_h) << "\"/>\n";
  os << "</g>\n";
  os << "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#222222\">\n";
  os << "<text x=\"" << fmt("%.2f", kMarginLeft) << "\" y=\"" << fmt("%.2f", kMarginTop + plot_h + 16)
     << "\" text-anchor=\"start\">" << fmt("%.4g", s.axis_i.ds_lower) << "</text>\n";
  os << "<text x=\"" << fmt("%.2f", kMarginLeft + plot_w) << "\" y=\""
     << fmt("%.2f", kMarginTop + plot_h + 16) << "\" text-anchor=\"end\">" << fmt("%.4g", s.axis_i.ds_upper)
     << "</text>\n";
  os << "<text x=\"" << fmt("%.2f", kMarginLeft - 6) << "\" y=\"" << fmt("%.2f", kMarginTop + plot_h)
     << "\" text-anchor=\"end\">" << fmt("%.4g", s.axis_j.ds_lower) << "</text>\n";
  os << "<text x=\"" << fmt("%.2f", kMarginLeft - 6) << "\" y=\"" << fmt("%.2f", kMarginTop + 10)
     << "\" text-anchor=\"end\">" << fmt("%.4g", s.axis_j.ds_upper) << "</text>\n";
  os << "<text x=\"" << fmt("%.2f", kMarginLeft + plot_w / 2) << "\" y=\"" << fmt("%.2f", kSvgHeight - 16)
     << "\" text-anchor=\"middle\" font-size=\"13\">" << xml_escape(axis_title(s.axis_i)) << "</text>\n";
  const double ylab_x = 20.0;
  const double ylab_y = kMarginTop + plot_h / 2;
  os << "<text x=\"" << fmt("%.2f", ylab_x) << "\" y=\"" << fmt("%.2f", ylab_y)
     << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 " << fmt("%.2f", ylab_x) << " "
     << fmt("%.2f", ylab_y) << ")\">" << xml_escape(axis_title(s.axis_j)) << "</text>\n";
  os << "</g>\n";
  // samples
  os << "<g stroke=\"none\">\n";
  for (const auto& p : s.points) {
    os << "<circle cx=\"" << fmt("%.2f", px(p.design[s.i])) << "\" cy=\"" << fmt("%.2f", py(p.design[s.j]))
       << "\" r=\"2.5\" fill=\"" << point_color(p.classification, s.requirement_ids) << "\"/>\n";
  }
  os << "</g>\n";
  // box projection
  const double x0 = px(s.rect_i.lower), x1 = px(s.rect_i.upper);
  const double y0 = py(s.rect_j.upper), y1 = py(s.rect_j.lower);
  os << "<rect x=\"" << fmt("%.2f", x0) << "\" y=\"" << fmt("%.2f", y0) << "\" width=\""
     << fmt("%.2f", x1 - x0) << "\" height=\"" << fmt("%.2f", y1 - y0)
     << "\" fill=\"none\" stroke=\"black\" stroke-width=\"2\"/>\n";
  os << "</svg>\n";
  return os.str();
}

std::string render_csv(const SectionData& s) {
  std::ostringstream os;
  os << "xi,xj,label\n";
  for (const auto& p : s.points) {
    os << fmt("%.17g", p.design[s.i]) << ',' << fmt("%.17g", p.design[s.j]) << ','
       << point_label(p.classification) << '\n';
  }
  return os.str();
}

}  // namespace

std::string_view to_string(Span span) { return span == Span::box ? "box" : "design_space"; }

Span parse_span(std::string_view text) {
  if (text == "box") return Span::box;
  if (text == "design_space") return Span::design_space;
  throw std::invalid_argument("unknown span '" + std::string(text) + "'");
}

SectionData make_section(const Problem& problem, const Box& box, std::size_t i, std::size_t j,
                         std::size_t n, std::uint64_t seed, Span span) {
  const std::size_t d = problem.dimension();
  if (i == j || i >= d || j >= d) throw std::invalid_argument("section dims must be distinct and in range");
  const auto& vars = problem.variables();

  SectionData s;
  s.i = i;
  s.j = j;
  s.span = span;
  s.seed = seed;
  s.rect_i = box[i];
  s.rect_j = box[j];
  s.axis_i = {vars[i].name, vars[i].unit, vars[i].ds_lower, vars[i].ds_upper};
  s.axis_j = {vars[j].name, vars[j].unit, vars[j].ds_lower, vars[j].ds_upper};
  for (const auto& r : problem.requirements()) s.requirement_ids.push_back(r.id);
  s.provenance = kOffAxisProvenance;

  Box draw = box;
  if (span == Span::design_space) {
    draw[i] = {vars[i].ds_lower, vars[i].ds_upper};
    draw[j] = {vars[j].ds_lower, vars[j].ds_upper};
  }
  Rng rng(seed);
  std::vector<DesignPoint> designs = sample_uniform(draw, n, rng);
  s.points.resize(n);
  parallel_for(n, [&](std::size_t k) {
    s.points[k].classification = problem.classify(designs[k]);
    s.points[k].design = std::move(designs[k]);
  });
  return s;
}

std::string_view point_color(const Classification& c, std::span<const std::string> requirement_ids) {
  if (c.good()) return "green";
  if (!requirement_ids.empty() && c.violated.contains(requirement_ids.front())) return "red";
  return "blue";
}

std::string point_label(const Classification& c) {
  if (c.good()) return "good";
  std::string out;
  for (const auto& id : c.violated) out += (out.empty() ? "" : "+") + id;
  return out;
}

std::string export_section(const SectionData& section, SectionFormat format) {
  switch (format) {
    case SectionFormat::json: return to_json(section).dump(2) + "\n";
    case SectionFormat::csv: return render_csv(section);
    case SectionFormat::svg: return render_svg(section);
  }
  return {};
}

nlohmann::json to_json(const SectionData& s) {
  using nlohmann::json;
  auto axis = [](const AxisInfo& a) {
    return json{{"name", a.name}, {"unit", a.unit}, {"lower", a.ds_lower}, {"upper", a.ds_upper}};
  };
  json points = json::array();
  for (const auto& p : s.points) {
    json reason = nullptr;
    if (p.classification.infeasible_reason) reason = to_string(*p.classification.infeasible_reason);
    points.push_back({{"xi", p.design[s.i]},
                      {"xj", p.design[s.j]},
                      {"violated", p.classification.violated},
                      {"infeasible_reason", reason},
                      {"design", p.design.vector()}});
  }
  return {{"dims", {s.i, s.j}},
          {"span", to_string(s.span)},
          {"seed", s.seed},
          {"box_rect", {{s.rect_i.lower, s.rect_i.upper}, {s.rect_j.lower, s.rect_j.upper}}},
          {"axes", {axis(s.axis_i), axis(s.axis_j)}},
          {"requirements", s.requirement_ids},
          {"provenance", s.provenance},
          {"points", std::move(points)}};
}

SectionData section_from_json(const nlohmann::json& j) {
  SectionData s;
  s.i = j.at("dims").at(0).get<std::size_t>();
  s.j = j.at("dims").at(1).get<std::size_t>();
  s.span = parse_span(j.at("span").get<std::string>());
  s.seed = j.at("seed").get<std::uint64_t>();
  const auto& rect = j.at("box_rect");
  s.rect_i = {rect.at(0).at(0).get<double>(), rect.at(0).at(1).get<double>()};
  s.rect_j = {rect.at(1).at(0).get<double>(), rect.at(1).at(1).get<double>()};
  auto axis = [](const nlohmann::json& a) {
    return AxisInfo{a.at("name").get<std::string>(), a.at("unit").get<std::string>(),
                    a.at("lower").get<double>(), a.at("upper").get<double>()};
  };
  s.axis_i = axis(j.at("axes").at(0));
  s.axis_j = axis(j.at("axes").at(1));
  s.requirement_ids = j.at("requirements").get<std::vector<std::string>>();
  s.provenance = j.at("provenance").get<std::string>();
  for (const auto& p : j.at("points")) {
    SectionPoint sp;
    sp.design = DesignPoint(p.at("design").get<std::vector<double>>());
    sp.classification.violated = p.at("violated").get<std::set<std::string>>();
    if (!p.at("infeasible_reason").is_null()) {
      sp.classification.infeasible_reason = parse_infeasible_reason(p["infeasible_reason"].get<std::string>());
    }
    s.points.push_back(std::move(sp));
  }
  return s;
}

}  // namespace solspace
