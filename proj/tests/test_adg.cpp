#include <doctest.h>

#include <algorithm>
#include <random>

#include "solspace/adg.hpp"
#include "solspace/errors.hpp"
#include "solspace/problem.hpp"
#include "support.hpp"

using namespace solspace;
using nlohmann::json;
using testsupport::make_problem;
using testsupport::req;

namespace {

bool has_defect(const AdgValidation& v, AdgDefect::Kind kind) {
  return std::any_of(v.defects.begin(), v.defects.end(), [&](const AdgDefect& d) { return d.kind == kind; });
}

const AdgDefect* find_defect(const AdgValidation& v, AdgDefect::Kind kind) {
  for (const auto& d : v.defects) {
    if (d.kind == kind) return &d;
  }
  return nullptr;
}

// a, b, c -> i1 = a + b, i2 = c^2, i3 = i1 * i2 -> q1 = i3 + 1, q2 = a^2 + i2^2
json layered_problem() {
  json nodes = json::array({{{"name", "a"}, {"kind", "dv"}},
                            {{"name", "b"}, {"kind", "dv"}},
                            {{"name", "c"}, {"kind", "dv"}},
                            {{"name", "i1"}, {"kind", "intermediate"}},
                            {{"name", "i2"}, {"kind", "intermediate"}},
                            {{"name", "i3"}, {"kind", "intermediate"}},
                            {{"name", "q1"}, {"kind", "qoi"}},
                            {{"name", "q2"}, {"kind", "qoi"}}});
  json edges = json::array({{"a", "i1"}, {"b", "i1"}, {"c", "i2"}, {"i1", "i3"}, {"i2", "i3"}, {"i3", "q1"},
                            {"a", "q2"}, {"i2", "q2"}});
  json mappings = {{"i1", "sum"}, {"i2", "square"}, {"i3", "product"}, {"q1", "plus_one"}, {"q2", "sum_of_squares"}};
  json vars = json::array();
  for (const char* n : {"a", "b", "c"}) {
    vars.push_back({{"name", n}, {"unit", "m"}, {"kind", "geometry"}, {"lower", -2.0}, {"upper", 2.0}});
  }
  return {{"schema_version", 1},
          {"name", "layered"},
          {"variables", vars},
          {"adg", {{"nodes", nodes}, {"edges", edges}, {"mappings", mappings}}},
          {"requirements", json::array({req("r1", "q1", "less_equal", 3.0), req("r2", "q2", "less_equal", 5.0)})}};
}

}  // namespace

TEST_SUITE("adg") {
  TEST_CASE("smallest valid graph orders dv before qoi") {
    Adg g;
    g.add_node("x", NodeKind::dv);
    g.add_node("q", NodeKind::qoi);
    g.add_edge("x", "q");
    g.set_mapping("q", "identity");
    const auto v = validate_adg(g, MappingRegistry::builtins());
    CHECK(v.ok());
    CHECK(v.order == std::vector<std::string>{"x", "q"});
  }

  TEST_CASE("two-node cycle is reported") {
    Adg g;
    g.add_node("a", NodeKind::intermediate);
    g.add_node("b", NodeKind::intermediate);
    g.add_edge("a", "b");
    g.add_edge("b", "a");
    g.set_mapping("a", "identity");
    g.set_mapping("b", "identity");
    const auto v = validate_adg(g, MappingRegistry::builtins());
    REQUIRE_FALSE(v.ok());
    const auto* d = find_defect(v, AdgDefect::Kind::cycle);
    REQUIRE(d != nullptr);
    CHECK(d->message == "cycle {a,b}");
  }

  TEST_CASE("binary fan-in on a unary mapping is an arity mismatch") {
    Adg g;
    g.add_node("x", NodeKind::dv);
    g.add_node("y", NodeKind::dv);
    g.add_node("q", NodeKind::qoi);
    g.add_edge("x", "q");
    g.add_edge("y", "q");
    g.set_mapping("q", "identity");
    const auto v = validate_adg(g, MappingRegistry::builtins());
    const auto* d = find_defect(v, AdgDefect::Kind::arity_mismatch);
    REQUIRE(d != nullptr);
    CHECK(d->message.find("arity mismatch") != std::string::npos);
  }

  TEST_CASE("structural defects") {
    const auto reg = MappingRegistry::builtins();
    SUBCASE("dangling edge") {
      Adg g;
      g.add_node("x", NodeKind::dv);
      g.add_edge("x", "nowhere");
      CHECK(has_defect(validate_adg(g, reg), AdgDefect::Kind::dangling_edge));
    }
    SUBCASE("missing and unknown mappings") {
      Adg g;
      g.add_node("x", NodeKind::dv);
      g.add_node("q", NodeKind::qoi);
      g.add_node("r", NodeKind::qoi);
      g.add_edge("x", "q");
      g.add_edge("x", "r");
      g.set_mapping("r", "no_such_mapping");
      const auto v = validate_adg(g, reg);
      CHECK(has_defect(v, AdgDefect::Kind::missing_mapping));
      CHECK(has_defect(v, AdgDefect::Kind::unknown_mapping));
    }
    SUBCASE("dv with a parent and qoi with a child") {
      Adg g;
      g.add_node("x", NodeKind::dv);
      g.add_node("y", NodeKind::dv);
      g.add_node("q", NodeKind::qoi);
      g.add_node("r", NodeKind::qoi);
      g.add_edge("x", "y");
      g.add_edge("x", "q");
      g.add_edge("q", "r");
      g.set_mapping("q", "identity");
      g.set_mapping("r", "identity");
      CHECK(has_defect(validate_adg(g, reg), AdgDefect::Kind::degree_violation));
    }
    SUBCASE("duplicate node") {
      Adg g;
      g.add_node("x", NodeKind::dv);
      g.add_node("x", NodeKind::dv);
      CHECK(has_defect(validate_adg(g, reg), AdgDefect::Kind::duplicate_node));
    }
  }

  TEST_CASE("identity and chained mappings") {
    auto p = Problem::from_json(make_problem({"x"}, {{"q", "identity", {"x"}}}, json::array()));
    CHECK(*p.evaluate(DesignPoint({0.7})).qois.at("q") == 0.7);

    json doc = make_problem({"x"}, {}, json::array(), 0.0, 5.0);
    doc["adg"]["nodes"].push_back({{"name", "sq"}, {"kind", "intermediate"}});
    doc["adg"]["nodes"].push_back({{"name", "q"}, {"kind", "qoi"}});
    doc["adg"]["edges"] = json::array({{"x", "sq"}, {"sq", "q"}});
    doc["adg"]["mappings"] = {{"sq", "square"}, {"q", "plus_one"}};
    auto chain = Problem::from_json(doc);
    CHECK(*chain.evaluate(DesignPoint({3.0})).qois.at("q") == 10.0);
  }

  TEST_CASE("arm graph with an unreachable pick point") {
    const auto p = testsupport::load("arm.json");
    // l1 = l2 = 0.25 cannot reach the pick point at 0.52 m.
    const DesignPoint x({0.25, 0.25, 0.5, 0.5, 20.0, 8.0, 150.0, 15.0, 80.0, 6.0});
    const auto e = p.evaluate(x);
    CHECK_FALSE(e.qois.at("t_cyc").has_value());
    CHECK_FALSE(e.qois.at("L").has_value());
    REQUIRE(e.infeasible_reason.has_value());
    CHECK(*e.infeasible_reason == InfeasibleReason::unreachable_workspace);
  }

  TEST_CASE("evaluation ignores node insertion order") {
    const json base = layered_problem();
    const auto reference = Problem::from_json(base);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    std::vector<DesignPoint> points;
    for (int k = 0; k < 50; ++k) points.emplace_back(std::vector<double>{u(rng), u(rng), u(rng)});
    for (int perm = 0; perm < 20; ++perm) {
      json doc = base;
      auto& nodes = doc["adg"]["nodes"];
      std::vector<json> shuffled(nodes.begin(), nodes.end());
      std::shuffle(shuffled.begin(), shuffled.end(), rng);
      nodes = shuffled;
      const auto p = Problem::from_json(doc);
      CHECK(p.compiled().order() == reference.compiled().order());
      for (const auto& x : points) CHECK(p.evaluate(x).qois == reference.evaluate(x).qois);
    }
  }

  TEST_CASE("layered graph values match a hand composition") {
    const auto p = Problem::from_json(layered_problem());
    const double a = 0.5, b = -1.25, c = 1.5;
    const auto e = p.evaluate(DesignPoint({a, b, c}));
    CHECK(*e.qois.at("q1") == (a + b) * (c * c) + 1.0);
    CHECK(*e.qois.at("q2") == a * a + (c * c) * (c * c));
  }

  TEST_CASE("evaluation is pure") {
    const auto p = testsupport::load("arm_reference.json");
    const DesignPoint x({0.35, 0.3, 0.5, 0.5, 20.0, 8.0, 150.0, 15.0, 80.0, 6.0});
    const auto first = p.evaluate(x);
    const auto second = p.evaluate(x);
    CHECK(first.qois == second.qois);
    CHECK(first.timed_out == second.timed_out);
  }

  TEST_CASE("out-of-bounds points are rejected before evaluation") {
    const auto p = testsupport::sum_toy();
    CHECK_THROWS_AS(p.evaluate(DesignPoint({1.1, 0.0})), std::invalid_argument);
    CHECK_THROWS_AS(p.evaluate(DesignPoint({0.5})), std::invalid_argument);
  }
}

TEST_SUITE("classify") {
  const std::vector<Requirement> arm_reqs = {{"t_cyc", "t_cyc", Comparator::less_equal, 3.05},
                                               {"L", "L", Comparator::less_equal, 6800.0}};

  TEST_CASE("requirement examples") {
    Evaluation ok;
    ok.qois = {{"t_cyc", 2.9}, {"L", 6000.0}};
    CHECK(classify(ok, arm_reqs).good());

    Evaluation slow;
    slow.qois = {{"t_cyc", 3.2}, {"L", 6000.0}};
    CHECK(classify(slow, arm_reqs).violated == std::set<std::string>{"t_cyc"});

    CHECK(classify(slow, {}).good());
  }

  TEST_CASE("undefined qois violate every requirement on them") {
    Evaluation e;
    e.qois = {{"t_cyc", std::nullopt}, {"L", std::nullopt}};
    e.infeasible_reason = InfeasibleReason::unreachable_workspace;
    const auto c = classify(e, arm_reqs);
    CHECK(c.violated == std::set<std::string>{"L", "t_cyc"});
    CHECK(c.infeasible_reason == InfeasibleReason::unreachable_workspace);
  }

  TEST_CASE("raising a less_equal threshold never adds a violation") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 10.0);
    for (int k = 0; k < 2000; ++k) {
      Evaluation e;
      e.qois = {{"a", u(rng)}, {"b", u(rng)}};
      const double ta = u(rng), tb = u(rng), raise = u(rng);
      std::vector<Requirement> low = {{"ra", "a", Comparator::less_equal, ta}, {"rb", "b", Comparator::less_equal, tb}};
      std::vector<Requirement> high = {{"ra", "a", Comparator::less_equal, ta + raise},
                                       {"rb", "b", Comparator::less_equal, tb}};
      const auto before = classify(e, low).violated;
      const auto after = classify(e, high).violated;
      CHECK(std::includes(before.begin(), before.end(), after.begin(), after.end()));
    }
  }

  TEST_CASE("greater_equal comparator") {
    Evaluation e;
    e.qois = {{"a", 2.0}};
    CHECK(classify(e, std::vector<Requirement>{{"r", "a", Comparator::greater_equal, 2.0}}).good());
    CHECK_FALSE(classify(e, std::vector<Requirement>{{"r", "a", Comparator::greater_equal, 2.5}}).good());
  }
}

TEST_SUITE("problem file") {
  TEST_CASE("unknown fields are rejected") {
    json doc = make_problem({"x"}, {{"q", "identity", {"x"}}}, json::array());
    doc["extra"] = 1;
    CHECK_THROWS_AS(Problem::from_json(doc), ProblemError);
    json var_doc = make_problem({"x"}, {{"q", "identity", {"x"}}}, json::array());
    var_doc["variables"][0]["colour"] = "red";
    CHECK_THROWS_AS(Problem::from_json(var_doc), ProblemError);
  }

  TEST_CASE("degenerate bounds and duplicate names are rejected") {
    CHECK_THROWS_AS(Problem::from_json(make_problem({"x"}, {{"q", "identity", {"x"}}}, json::array(), 1.0, 1.0)),
                    ProblemError);
    CHECK_THROWS_AS(
        Problem::from_json(make_problem({"x", "x"}, {{"q", "identity", {"x"}}}, json::array())), ProblemError);
  }

  TEST_CASE("requirements must name an existing qoi with a finite threshold") {
    CHECK_THROWS_AS(Problem::from_json(make_problem({"x"}, {{"q", "identity", {"x"}}},
                                                    json::array({req("r", "missing", "less_equal", 1.0)}))),
                    ProblemError);
    const auto p = Problem::from_json(make_problem({"x"}, {{"q", "identity", {"x"}}}, json::array()));
    CHECK_THROWS_AS(p.with_requirements({{"r", "q", Comparator::less_equal, std::nan("")}}), ProblemError);
  }

  TEST_CASE("cyclic graph in a file is rejected") {
    json doc = make_problem({"x"}, {}, json::array());
    doc["adg"]["nodes"].push_back({{"name", "a"}, {"kind", "intermediate"}});
    doc["adg"]["nodes"].push_back({{"name", "b"}, {"kind", "intermediate"}});
    doc["adg"]["nodes"].push_back({{"name", "q"}, {"kind", "qoi"}});
    doc["adg"]["edges"] = json::array({{"x", "a"}, {"b", "a"}, {"a", "b"}, {"b", "q"}});
    doc["adg"]["mappings"] = {{"a", "sum"}, {"b", "identity"}, {"q", "identity"}};
    CHECK_THROWS_AS(Problem::from_json(doc), ProblemError);
  }

  TEST_CASE("shipped problems load") {
    for (const char* f : {"toy_sum.json", "toy_separable.json", "toy_1d.json", "arm.json", "arm_reference.json"}) {
      CAPTURE(f);
      CHECK_NOTHROW(testsupport::load(f));
    }
    const auto arm = testsupport::load("arm.json");
    CHECK(arm.dimension() == 10);
    CHECK(arm.qoi_order() == std::vector<std::string>{"t_cyc", "L"});
  }
}
