#pragma once

// Hand-built models and corpus loading shared by the unit tests.

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "agodd/dsl.hpp"
#include "agodd/model.hpp"

namespace fixtures {

using namespace agodd;

inline std::string corpus_path(const std::string& name) {
    return std::string(AGODD_CORPUS_DIR) + "/" + name;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline AgOdd load_corpus_odd(const std::string& name) {
    auto result = parse_odd(read_file(corpus_path(name)), name);
    REQUIRE(result.ok());
    return result.take();
}

inline std::vector<Scenario> load_corpus_scenarios(const std::string& name) {
    auto result = parse_scenarios(read_file(corpus_path(name)), name);
    REQUIRE(result.ok());
    return result.take();
}

inline Constraint le(std::string dim, double bound, std::string unit) {
    Constraint c;
    c.dimension = std::move(dim);
    c.rel = Relation::le;
    c.bound = {bound, std::move(unit)};
    return c;
}

inline Constraint ge(std::string dim, double bound, std::string unit) {
    Constraint c;
    c.dimension = std::move(dim);
    c.rel = Relation::ge;
    c.bound = {bound, std::move(unit)};
    return c;
}

inline Constraint between(std::string dim, double lo, double hi,
                          std::string unit) {
    Constraint c;
    c.dimension = std::move(dim);
    c.rel = Relation::in_interval;
    c.interval = {lo, hi};
    c.unit = std::move(unit);
    return c;
}

inline Constraint oneof(std::string dim, std::vector<std::string> labels) {
    Constraint c;
    c.dimension = std::move(dim);
    c.rel = Relation::in_set;
    c.labels = std::move(labels);
    return c;
}

inline AttributeNode attr(std::string name, Mode mode, int lod,
                          std::vector<Constraint> constraints = {},
                          std::vector<AttributeNode> children = {}) {
    AttributeNode node;
    node.name = std::move(name);
    node.mode = mode;
    node.lod = lod;
    node.constraints = std::move(constraints);
    node.children = std::move(children);
    return node;
}

// Small tillage model with a two-piece slope region:
//   slope admissible on [0, 10] ∪ [30, 40]
//   depth admissible on [0, 15]
//   surface admissible on {"dry"}
inline AgOdd tillage_odd() {
    AgOdd odd;
    odd.name = "tillage";
    odd.dimensions = {
        {"slope", "%", Interval{0, 100}},
        {"depth", "cm", Interval{0, 50}},
        {"surface", "unitless", std::vector<std::string>{"dry", "wet", "icy"}},
    };
    auto& scenery = odd.category(CategoryKind::scenery);
    scenery.children.push_back(attr(
        "Fields", Mode::restrictive, 0, {},
        {attr("Slope ≤ 10 %", Mode::permissive, 1, {le("slope", 10, "%")}),
         attr("Steep block", Mode::permissive, 1,
              {between("slope", 30, 40, "%")})}));
    AttributeNode tillage =
        attr("Tillage", Mode::restrictive, 0, {le("depth", 15, "cm")});
    tillage.tags.insert(CdvTag{CdvTag::Role::start, 1, std::nullopt});
    scenery.children.push_back(tillage);
    odd.category(CategoryKind::environment)
        .children.push_back(attr("Dry conditions", Mode::restrictive, 0,
                                 {oneof("surface", {"dry"})}));
    odd.category(CategoryKind::dynamic_objects)
        .children.push_back(attr("Machines", Mode::permissive, 0, {},
                                 {attr("Tractor", Mode::restrictive, 1)}));
    return odd;
}

}  // namespace fixtures
