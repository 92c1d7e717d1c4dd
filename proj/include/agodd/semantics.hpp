#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

#include "agodd/model.hpp"

// Boundary semantics: what a permissive or restrictive attribute admits,
// which facets of a node are hard limits, and whether a concrete world
// sample falls inside an ODD.

namespace agodd {

// Admissible set of one dimension: disjoint, sorted, closed intervals for
// numeric dimensions or a label subset (in declaration order) for
// enumerated ones. Empty parts mean nothing is admissible.
struct Region1D {
    std::string dimension;
    bool numeric = true;
    std::vector<Interval> intervals;
    std::vector<std::string> labels;

    bool empty() const { return numeric ? intervals.empty() : labels.empty(); }
    bool contains_value(double v) const;
    bool contains_label(const std::string& l) const;

    bool operator==(const Region1D&) const = default;
};

// Entire declared domain of a dimension as a region.
Region1D full_region(const DimensionDecl& dim);

Region1D intersect(const Region1D& a, const Region1D& b);
Region1D unite(const Region1D& a, const Region1D& b);

// Applies one constraint to a region (clipping to it). The constraint must
// refer to the region's dimension.
Region1D apply_constraint(const Region1D& region, const Constraint& c);

enum class BoundaryKind { permissive_open, restrictive_hard };

std::string boundary_kind_name(BoundaryKind k);

// The two ways a node bounds the world: a numeric limit on one dimension,
// or the edge of its instance enumeration (whether unlisted children count
// as inside).
struct Facet {
    enum class Kind { numeric_bound, instance_edge };
    Kind kind = Kind::instance_edge;
    std::string dimension;  // numeric_bound only

    bool operator==(const Facet&) const = default;
};

// A concrete world, as far as the model cares: which object classes are
// present and which measured values hold where.
struct SampleBinding {
    AttrPath path;
    std::variant<Quantity, std::string> value;

    bool operator==(const SampleBinding&) const = default;
};

struct WorldSample {
    std::vector<AttrPath> objects;
    std::vector<SampleBinding> bindings;

    bool operator==(const WorldSample&) const = default;
};

struct MembershipReason {
    AttrPath path;
    std::string cause;  // e.g. "restrictive-enumeration", "numeric-bound"
    std::string detail;
};

struct Membership {
    bool included = true;
    std::vector<MembershipReason> reasons;  // why excluded; empty if included
};

// --- Operations ---------------------------------------------------------

// Values of `dimension` admitted at `path`: the declared domain clipped by
// every constraint on that dimension along the path, root to node.
// Unconstrained dimensions keep their full domain. Throws
// Error("unknown-path") when the path does not resolve and
// Error("unknown-dimension") for undeclared dimensions.
Region1D effective_domain(const AgOdd& odd, const AttrPath& path,
                          const std::string& dimension);

// Hardness of one facet of the node at `path`. Numeric bounds are hard
// limits regardless of the node's mode; instance edges follow the mode of
// the node whose enumeration they are.
BoundaryKind boundary_kind(const AgOdd& odd, const AttrPath& path,
                           const Facet& facet);

// Membership of a concrete sample. Object paths must resolve against the
// category trees or reach an unlisted name only below permissive nodes;
// bound values must fall in the effective domain at their path.
Membership contains(const AgOdd& odd, const WorldSample& sample);

// Deepest prefix of `path` that resolves to a node (or just the category
// root). Second element: number of resolved elements.
std::pair<const AttributeNode*, size_t> resolve_prefix(const AgOdd& odd,
                                                       const AttrPath& path);

// Union of the admissible values of `dimension` anywhere in the ODD: the
// union of effective domains over all deepest nodes constraining it, or
// the full declared domain when no node does.
Region1D odd_region(const AgOdd& odd, const std::string& dimension);

std::string render_region(const Region1D& region);

}  // namespace agodd
