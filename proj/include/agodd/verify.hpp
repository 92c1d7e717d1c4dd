#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "agodd/model.hpp"
#include "agodd/scenario.hpp"
#include "agodd/semantics.hpp"

// The iterative verification loop: hold a scenario set against an ODD,
// report boundary violations and coverage over a uniform grid, and diff
// ODD revisions between iterations.

namespace agodd {

// One scenario element crossing an ODD boundary. Only restrictive_hard
// crossings demand an ODD revision; permissive_open ones are informative.
struct Violation {
    std::string scenario;
    AttrPath path;
    std::string dimension;  // empty for instance-edge crossings
    BoundaryKind kind = BoundaryKind::restrictive_hard;
    std::string cause;  // "numeric-bound", "restrictive-enumeration", ...
    std::string detail;
};

struct CoverageReport {
    double overall = 0.0;
    std::map<std::string, double> per_dimension;
    int grid = 0;
};

// Axis-aligned box of uncovered ODD space, one extent per declared
// dimension, in declaration order.
struct GapExtent {
    std::string dimension;
    bool numeric = true;
    Interval range;                   // numeric
    std::vector<std::string> labels;  // enumerated
};

struct GapRegion {
    std::vector<GapExtent> extents;
};

enum class Verdict { verified, needs_odd_revision, needs_scenarios };

std::string verdict_name(Verdict v);

struct VerifyConfig {
    int grid = 100;
    double coverage_threshold = 1.0;
    int iteration = 1;
};

struct IterationReport {
    int iteration = 1;
    Verdict verdict = Verdict::needs_scenarios;
    std::vector<Violation> violations;  // hard crossings only
    CoverageReport coverage;
    std::vector<GapRegion> gaps;
};

// --- ODD diffing ----------------------------------------------------------

struct NodeAddition {
    AttrPath parent;
    size_t index = 0;  // position among the parent's children
    AttributeNode node;  // whole added subtree
};

struct NodeRemoval {
    AttrPath path;
};

struct ModeChange {
    AttrPath path;
    Mode from = Mode::permissive;
    Mode to = Mode::permissive;
};

struct ConstraintChange {
    AttrPath path;
    std::vector<Constraint> from;
    std::vector<Constraint> to;
};

struct TagChange {
    AttrPath path;
    std::set<CdvTag> from;
    std::set<CdvTag> to;
};

struct IterationMarkChange {
    AttrPath path;
    std::optional<int> from;
    std::optional<int> to;
};

struct OddDiff {
    std::vector<NodeRemoval> removals;
    std::vector<NodeAddition> additions;
    std::vector<ModeChange> mode_changes;
    std::vector<ConstraintChange> constraint_changes;
    std::vector<TagChange> tag_changes;
    std::vector<IterationMarkChange> iteration_changes;
    // Differences outside the category trees (name, dimensions, framing,
    // processes), described but not applicable.
    std::vector<std::string> other_changes;

    bool empty() const {
        return removals.empty() && additions.empty() && mode_changes.empty() &&
               constraint_changes.empty() && tag_changes.empty() &&
               iteration_changes.empty() && other_changes.empty();
    }
};

// --- Operations -----------------------------------------------------------

// Every boundary crossing of every scenario, hard and informative, sorted
// by (scenario, path, dimension). Crossings are judged on explicitly bound
// values and instantiated paths only.
std::vector<Violation> detect_violations(const AgOdd& odd,
                                         const std::vector<Scenario>& scenarios);

// Fraction of in-ODD grid cells some scenario covers, overall and
// projected per dimension. Cells belong to a region when their center
// does. Throws Error("unbounded-dimension") for non-finite declared
// ranges and Error("invalid-grid") for grid < 1.
CoverageReport coverage(const AgOdd& odd, const std::vector<Scenario>& scenarios,
                        int grid);

// Uncovered in-ODD space as disjoint boxes; the boxes plus the covered
// cells tile the in-ODD cell set exactly.
std::vector<GapRegion> find_gaps(const AgOdd& odd,
                                 const std::vector<Scenario>& scenarios,
                                 int grid);

// One loop turn: violations, coverage and gaps rolled into a verdict.
// Any hard violation demands an ODD revision; otherwise coverage at or
// above the threshold verifies the ODD, below it demands more scenarios.
IterationReport verify_iteration(const AgOdd& odd,
                                 const std::vector<Scenario>& scenarios,
                                 const VerifyConfig& config = {});

// Structural difference of the category trees, matching nodes by name.
// Renames surface as removal plus addition of the whole subtree.
OddDiff diff_odds(const AgOdd& before, const AgOdd& after);

// Applies a diff produced by diff_odds. Patch law: for ODDs agreeing
// outside the category trees, apply_diff(a, diff_odds(a, b)) == b.
AgOdd apply_diff(const AgOdd& base, const OddDiff& diff);

// JSON form of a report (schema agodd-report/1), indented, deterministic.
std::string report_json(const IterationReport& report, int indent = 2);

// Human-readable form of a report, one finding per line.
std::string report_text(const IterationReport& report);

std::string render_gap(const GapRegion& gap);

}  // namespace agodd
