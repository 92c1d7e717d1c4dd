#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "agodd/model.hpp"
#include "agodd/semantics.hpp"

// Logical scenarios over the seven-layer structure: each binding pins an
// attribute path (and optionally a value or value range) to one layer,
// layer 7 references processes by name.

namespace agodd {

// Layer numbers follow the established model: 1 road/field geometry,
// 2 infrastructure, 3 temporary changes, 4 dynamic objects, 5 environment,
// 6 digital information, 7 process.
inline constexpr int kMinLayer = 1;
inline constexpr int kMaxLayer = 7;

struct BindingValue {
    enum class Kind { quantity, label, range };
    Kind kind = Kind::quantity;
    Quantity quantity;  // quantity
    std::string label;  // label
    Interval range;     // range
    std::string unit;   // unit of range bounds

    bool operator==(const BindingValue&) const = default;
};

struct ScenarioBinding {
    int layer = 1;
    AttrPath path;
    std::optional<BindingValue> value;

    bool operator==(const ScenarioBinding&) const = default;
};

struct Scenario {
    std::string name;
    std::vector<ScenarioBinding> bindings;
    std::vector<std::pair<int, std::string>> processes;  // (layer, name)

    bool operator==(const Scenario&) const = default;
};

// What a scenario occupies, per dimension, for the coverage machinery.
// Dimensions the scenario never binds keep their full ODD region;
// `bound_dimensions` records which ones were pinned explicitly.
struct ScenarioRegion {
    std::map<std::string, Region1D> dimensions;
    std::set<std::string> bound_dimensions;
    std::vector<AttrPath> instantiated;
};

// Structural checks of one scenario against an ODD: layer numbers in
// range, process names declared, paths rooted at a category, bindable
// values. Sorted like validate_model output.
std::vector<Diagnostic> validate_scenario(const Scenario& scenario,
                                          const AgOdd& odd);

// Region the scenario occupies inside the declared dimension space. Value
// bindings intersect the effective domain at their path; the result is
// clamped to the ODD region of each dimension.
ScenarioRegion scenario_region(const Scenario& scenario, const AgOdd& odd);

// Dimension a binding value refers to, by unit compatibility at the
// binding's path. Returns nullptr when no declared dimension fits.
const DimensionDecl* binding_dimension(const ScenarioBinding& binding,
                                       const AgOdd& odd);

}  // namespace agodd
