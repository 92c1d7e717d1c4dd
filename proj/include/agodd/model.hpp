#pragma once

#include <array>
#include <compare>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

// Core domain model for agricultural operational design domains (Ag-ODDs):
// attribute trees with permissive/restrictive modes and level-of-detail
// nesting, measurable dimensions, and condition-dependent process
// definitions. All types are plain values, immutable by convention after
// construction; validation never mutates.

namespace agodd {

// Thrown by operations whose contract names a hard error (unknown-tag,
// unit-mismatch, ...). Recoverable findings are Diagnostics instead.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}
    const std::string& code() const { return code_; }

private:
    std::string code_;
};

enum class Mode { permissive, restrictive };

// Rendered as the set symbols used throughout reports: union for
// permissive, intersection for restrictive.
std::string mode_symbol(Mode m);
std::string mode_name(Mode m);

enum class CategoryKind { scenery, environment, dynamic_objects };

inline constexpr std::array<CategoryKind, 3> kAllCategories = {
    CategoryKind::scenery, CategoryKind::environment,
    CategoryKind::dynamic_objects};

std::string category_name(CategoryKind k);
std::optional<CategoryKind> category_from_name(const std::string& name);

// Condition-dependent variable tag: SA<i> (start), EA<i> (end) or
// C<i>[.<j>] (triggering condition). Ordering follows the rendered form,
// conditions first, so sorted containers print canonically.
struct CdvTag {
    enum class Role { condition, end, start };
    Role role = Role::start;
    int index = 0;
    std::optional<int> sub_index;  // only conditions carry one (C2.1)

    auto operator<=>(const CdvTag&) const = default;
};

std::string render_tag(const CdvTag& tag);
std::optional<CdvTag> parse_tag(const std::string& text);

struct Quantity {
    double value = 0.0;
    std::string unit;  // symbolic, never converted; "unitless" allowed

    bool operator==(const Quantity&) const = default;
};

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    bool operator==(const Interval&) const = default;
};

// A measurable quantity every numeric or enumerated constraint refers to.
// The domain bounds the values a dimension can take anywhere in the ODD.
struct DimensionDecl {
    std::string name;  // identifier, lower_snake
    std::string unit;
    std::variant<Interval, std::vector<std::string>> domain;

    bool is_numeric() const { return domain.index() == 0; }
    bool operator==(const DimensionDecl&) const = default;
};

enum class Relation { le, ge, lt, gt, eq, in_interval, in_set };

std::string relation_symbol(Relation r);

// One restriction on a dimension. The payload kind follows the relation:
// comparisons carry a Quantity, in_interval an Interval, in_set labels.
struct Constraint {
    std::string dimension;
    Relation rel = Relation::le;
    Quantity bound;                   // le/ge/lt/gt/eq
    Interval interval;                // in_interval
    std::string unit;                 // unit of interval bounds
    std::vector<std::string> labels;  // in_set

    bool operator==(const Constraint&) const = default;
};

// One attribute at one level of detail. Children refine the attribute one
// LoD deeper; a mentioned attribute defaults to permissive.
struct AttributeNode {
    std::string name;
    Mode mode = Mode::permissive;
    int lod = 0;
    std::vector<Constraint> constraints;
    std::set<CdvTag> tags;
    std::optional<int> iteration;  // verification iteration that introduced it
    std::vector<AttributeNode> children;

    bool operator==(const AttributeNode&) const = default;
};

// Top-level categories are restrictive by default: anything not listed is
// excluded from the ODD.
struct CategoryNode {
    CategoryKind kind = CategoryKind::scenery;
    Mode mode = Mode::restrictive;
    std::vector<AttributeNode> children;

    bool operator==(const CategoryNode&) const = default;
};

// Opaque derivation inputs, carried verbatim into reports.
struct FramingLimitations {
    std::vector<std::string> functional_requirements;
    std::vector<std::string> system_capabilities;
    std::vector<std::string> hara_results;

    bool empty() const {
        return functional_requirements.empty() && system_capabilities.empty() &&
               hara_results.empty();
    }
    bool operator==(const FramingLimitations&) const = default;
};

struct InteractionTrigger {
    std::vector<CdvTag> tags;  // one or more condition tags; any of them fires

    bool operator==(const InteractionTrigger&) const = default;
};

struct RelativeTimeTrigger {
    double duration = 0.0;
    std::string unit;

    bool operator==(const RelativeTimeTrigger&) const = default;
};

struct StateChangeTrigger {
    std::string dimension;
    Relation rel = Relation::le;
    double value = 0.0;

    bool operator==(const StateChangeTrigger&) const = default;
};

using Trigger =
    std::variant<InteractionTrigger, RelativeTimeTrigger, StateChangeTrigger>;

// Explicit post-state value for one dimension; overrides the default
// nearest-point projection when a process fires.
struct EndValueOverride {
    std::string dimension;
    std::variant<Quantity, std::string> value;  // quantity or label

    bool operator==(const EndValueOverride&) const = default;
};

// Condition-dependent variable: start attributes describe the state before
// the process, end attributes the state after, the trigger links them. A
// process may also be declared with all three parts absent.
struct ProcessDef {
    std::string name;
    std::vector<CdvTag> start_tags;
    std::optional<Trigger> trigger;
    std::vector<CdvTag> end_tags;
    std::vector<EndValueOverride> end_values;

    bool all_absent() const {
        return start_tags.empty() && !trigger.has_value() && end_tags.empty();
    }
    bool operator==(const ProcessDef&) const = default;
};

struct SourceSpan {
    std::string file;
    int line = 1;    // 1-based
    int column = 1;  // 1-based

    auto operator<=>(const SourceSpan&) const = default;
};

enum class Severity { error, warning, info };

std::string severity_name(Severity s);

struct Diagnostic {
    Severity severity = Severity::error;
    std::string code;
    std::string message;
    std::optional<SourceSpan> location;
};

// Path of node names from a category root, e.g.
// {"scenery", "Fields in Europe", "Slope ≤ 10 %"}.
using AttrPath = std::vector<std::string>;

std::string render_path(const AttrPath& path);

struct AgOdd {
    std::string name;
    FramingLimitations framing;
    std::vector<DimensionDecl> dimensions;
    std::array<CategoryNode, 3> categories = {
        CategoryNode{CategoryKind::scenery, Mode::restrictive, {}},
        CategoryNode{CategoryKind::environment, Mode::restrictive, {}},
        CategoryNode{CategoryKind::dynamic_objects, Mode::restrictive, {}}};
    std::vector<ProcessDef> processes;

    const CategoryNode& category(CategoryKind k) const {
        return categories[static_cast<size_t>(k)];
    }
    CategoryNode& category(CategoryKind k) {
        return categories[static_cast<size_t>(k)];
    }
    const DimensionDecl* find_dimension(const std::string& name) const;

    bool operator==(const AgOdd&) const = default;
};

// Joint automation bands over the driving and working axes.
enum class AutomationBand {
    manual,
    partially_automated,
    semi_autonomous,
    autonomous
};

std::string automation_band_name(AutomationBand b);

// --- Operations ---------------------------------------------------------

// Checks every structural invariant and returns the findings sorted by
// (severity, location, code, message). An empty list means well-formed;
// errors make downstream verification refuse the model.
std::vector<Diagnostic> validate_model(const AgOdd& odd);

// Path of the unique node carrying `tag`. Throws Error("unknown-tag") when
// no node does. Requires a model without duplicate tags.
AttrPath resolve_tag(const AgOdd& odd, const CdvTag& tag);

// Looks a node up by path; nullptr when the path does not resolve. The
// first path element must be a category name.
const AttributeNode* find_node(const AgOdd& odd, const AttrPath& path);

// Band of the joint automation level. The two axes combine by minimum:
// the nested-band reading of the automation plane. Levels outside 0..5
// throw Error("out-of-range-level").
AutomationBand classify_automation(int driving_level, int working_level);

// Canonical number rendering shared by the DSL serializer and reports:
// integers without a decimal point, otherwise the shortest digit string
// that round-trips.
std::string format_number(double value);

}  // namespace agodd
