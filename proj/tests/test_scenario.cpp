#include "doctest.h"

#include <algorithm>

#include "agodd/scenario.hpp"
#include "fixtures.hpp"

using namespace agodd;

namespace {

bool has_code(const std::vector<Diagnostic>& diags, const std::string& code,
              Severity severity) {
    return std::any_of(diags.begin(), diags.end(), [&](const Diagnostic& d) {
        return d.code == code && d.severity == severity;
    });
}

// Two width-like dimensions sharing the metre, told apart by which paths
// constrain them.
AgOdd two_metre_odd() {
    AgOdd odd;
    odd.name = "yard";
    odd.dimensions = {
        {"width", "m", Interval{0, 100}},
        {"height", "m", Interval{0, 50}},
    };
    auto& scenery = odd.category(CategoryKind::scenery);
    scenery.children.push_back(fixtures::attr(
        "W", Mode::permissive, 0, {fixtures::le("width", 30, "m")}));
    scenery.children.push_back(fixtures::attr(
        "H", Mode::permissive, 0, {fixtures::le("height", 20, "m")}));
    scenery.children.push_back(fixtures::attr(
        "WH", Mode::permissive, 0,
        {fixtures::le("width", 30, "m"), fixtures::le("height", 20, "m")}));
    return odd;
}

ScenarioBinding value_binding(int layer, AttrPath path, BindingValue value) {
    ScenarioBinding b;
    b.layer = layer;
    b.path = std::move(path);
    b.value = std::move(value);
    return b;
}

BindingValue quantity(double v, std::string unit) {
    BindingValue value;
    value.kind = BindingValue::Kind::quantity;
    value.quantity = {v, std::move(unit)};
    return value;
}

BindingValue range(double lo, double hi, std::string unit) {
    BindingValue value;
    value.kind = BindingValue::Kind::range;
    value.range = {lo, hi};
    value.unit = std::move(unit);
    return value;
}

BindingValue label(std::string l) {
    BindingValue value;
    value.kind = BindingValue::Kind::label;
    value.label = std::move(l);
    return value;
}

}  // namespace

TEST_CASE("a path constraint picks the dimension among unit twins") {
    AgOdd odd = two_metre_odd();
    ScenarioBinding b = value_binding(1, {"scenery", "W"}, quantity(10, "m"));
    const DimensionDecl* dim = binding_dimension(b, odd);
    REQUIRE(dim != nullptr);
    CHECK(dim->name == "width");

    ScenarioBinding h = value_binding(1, {"scenery", "H"}, quantity(10, "m"));
    REQUIRE(binding_dimension(h, odd) != nullptr);
    CHECK(binding_dimension(h, odd)->name == "height");
}

TEST_CASE("unit twins without a deciding constraint are ambiguous") {
    AgOdd odd = two_metre_odd();
    ScenarioBinding bare = value_binding(1, {"scenery"}, quantity(10, "m"));
    CHECK(binding_dimension(bare, odd) == nullptr);

    ScenarioBinding both = value_binding(1, {"scenery", "WH"}, quantity(10, "m"));
    CHECK(binding_dimension(both, odd) == nullptr);

    Scenario s;
    s.name = "s";
    s.bindings = {bare, both};
    auto diags = validate_scenario(s, odd);
    CHECK(std::count_if(diags.begin(), diags.end(), [](const Diagnostic& d) {
              return d.code == "ambiguous-binding" &&
                     d.severity == Severity::error;
          }) == 2);
}

TEST_CASE("unique units and labels resolve without a constraint") {
    AgOdd odd = fixtures::tillage_odd();
    ScenarioBinding b =
        value_binding(1, {"scenery", "Fields"}, quantity(50, "%"));
    REQUIRE(binding_dimension(b, odd) != nullptr);
    CHECK(binding_dimension(b, odd)->name == "slope");

    ScenarioBinding l = value_binding(5, {"environment"}, label("wet"));
    REQUIRE(binding_dimension(l, odd) != nullptr);
    CHECK(binding_dimension(l, odd)->name == "surface");

    ScenarioBinding none = value_binding(1, {"scenery"}, quantity(1, "furlong"));
    CHECK(binding_dimension(none, odd) == nullptr);
}

TEST_CASE("scenario validation reports layer and reference faults") {
    AgOdd odd = fixtures::tillage_odd();
    Scenario s;
    s.name = "faulty";
    s.bindings.push_back(value_binding(0, {"scenery", "Fields"}, quantity(5, "%")));
    s.bindings.push_back(value_binding(3, {"weather"}, quantity(5, "%")));
    ScenarioBinding empty_range =
        value_binding(1, {"scenery", "Fields"}, range(5, 2, "%"));
    s.bindings.push_back(empty_range);
    ScenarioBinding untagged;
    untagged.layer = 7;
    untagged.path = {"scenery", "Fields"};
    s.bindings.push_back(untagged);
    s.bindings.push_back(
        value_binding(1, {"scenery", "Fields"}, quantity(1, "furlong")));
    s.processes = {{3, "tilling"}, {7, "unknown job"}};

    auto diags = validate_scenario(s, odd);
    CHECK(has_code(diags, "invalid-layer", Severity::error));
    CHECK(has_code(diags, "unknown-category", Severity::error));
    CHECK(has_code(diags, "invalid-interval", Severity::error));
    CHECK(has_code(diags, "layer-misuse", Severity::warning));
    CHECK(has_code(diags, "unbindable-value", Severity::warning));
    CHECK(has_code(diags, "unknown-process", Severity::error));
}

TEST_CASE("a clean scenario validates quietly") {
    AgOdd odd = fixtures::tillage_odd();
    Scenario s;
    s.name = "smooth";
    s.bindings.push_back(value_binding(
        1, {"scenery", "Fields", "Slope ≤ 10 %"}, range(0, 5, "%")));
    ScenarioBinding tagged;
    tagged.layer = 7;
    tagged.path = {"scenery", "Tillage"};
    s.bindings.push_back(tagged);
    CHECK(validate_scenario(s, odd).empty());
}

TEST_CASE("scenario regions clamp bindings to path and model bounds") {
    AgOdd odd = fixtures::tillage_odd();
    Scenario s;
    s.name = "clamped";
    s.bindings.push_back(value_binding(
        1, {"scenery", "Fields", "Slope ≤ 10 %"}, range(5, 60, "%")));
    ScenarioRegion region = scenario_region(s, odd);
    CHECK(region.bound_dimensions ==
          std::set<std::string>{"slope"});
    // Raw [5, 60] ∩ path bound [0, 10] ∩ model region [0, 10] ∪ [30, 40].
    CHECK(region.dimensions.at("slope").intervals ==
          std::vector<Interval>{{5, 10}});
    // Unbound dimensions stay at the model's admissible region.
    CHECK(region.dimensions.at("depth").intervals ==
          std::vector<Interval>{{0, 15}});
    CHECK(region.dimensions.at("surface").labels ==
          std::vector<std::string>{"dry"});
    REQUIRE(region.instantiated.size() == 1);
    CHECK(region.instantiated[0] ==
          AttrPath{"scenery", "Fields", "Slope ≤ 10 %"});
}

TEST_CASE("bindings on one dimension intersect") {
    AgOdd odd = fixtures::tillage_odd();
    Scenario s;
    s.name = "narrowed";
    s.bindings.push_back(
        value_binding(1, {"scenery", "Fields"}, range(0, 8, "%")));
    s.bindings.push_back(
        value_binding(1, {"scenery", "Fields"}, range(4, 60, "%")));
    ScenarioRegion region = scenario_region(s, odd);
    CHECK(region.dimensions.at("slope").intervals ==
          std::vector<Interval>{{4, 8}});
}

TEST_CASE("a binding past the listed tree clamps to the resolved prefix") {
    AgOdd odd = fixtures::tillage_odd();
    Scenario s;
    s.name = "probing";
    // "Terraced" is not listed under the slope node; values are still
    // judged at the deepest resolved prefix, which carries the 10 % bound.
    s.bindings.push_back(value_binding(
        1, {"scenery", "Fields", "Slope ≤ 10 %", "Terraced"}, range(0, 50, "%")));
    ScenarioRegion region = scenario_region(s, odd);
    CHECK(region.dimensions.at("slope").intervals ==
          std::vector<Interval>{{0, 10}});
}

TEST_CASE("corpus scenario sets validate against their models") {
    struct Pair {
        const char* odd;
        const char* scenarios;
    };
    const Pair pairs[] = {
        {"cultivation_iter1.agodd", "cultivation_iter1.agsc"},
        {"cultivation_iter2.agodd", "cultivation_iter2.agsc"},
        {"wheat.agodd", "wheat_iter1.agsc"},
        {"fig5.agodd", "fig5_iter1.agsc"},
        {"fig5.agodd", "fig5_iter2.agsc"},
        {"fig5.agodd", "fig5_iter3.agsc"},
        {"fig5.agodd", "fig5_iter4.agsc"},
    };
    for (const auto& pair : pairs) {
        CAPTURE(pair.scenarios);
        AgOdd odd = fixtures::load_corpus_odd(pair.odd);
        auto scenarios = fixtures::load_corpus_scenarios(pair.scenarios);
        CHECK(!scenarios.empty());
        for (const auto& s : scenarios) {
            CAPTURE(s.name);
            auto diags = validate_scenario(s, odd);
            for (const auto& d : diags) {
                CAPTURE(d.message);
                CHECK(d.severity != Severity::error);
            }
        }
    }
}
