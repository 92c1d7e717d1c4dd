#pragma once

// Brute-force reference implementations the tests cross-check the library
// against. Everything here recomputes results from first principles on
// small inputs: direct predicate evaluation per grid cell, no region
// algebra, no run compression, no pruning. Kept deliberately dumb.
//
// Conventions mirrored on purpose (they are semantic choices, not
// mechanism): strict comparisons clip like their closed counterparts, and
// grid cells belong to a set when their center does, with centers computed
// as lo + (i + 0.5) * width in exactly that expression order.

#include <cassert>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "agodd/model.hpp"
#include "agodd/scenario.hpp"
#include "agodd/semantics.hpp"
#include "agodd/verify.hpp"

namespace oracle {

using agodd::AgOdd;
using agodd::AttrPath;
using agodd::AttributeNode;
using agodd::Constraint;
using agodd::DimensionDecl;
using agodd::GapRegion;
using agodd::Interval;
using agodd::Mode;
using agodd::Relation;
using agodd::Scenario;
using agodd::WorldSample;

// One concrete grid point: a numeric value or a label per dimension.
struct PointValue {
    bool numeric = true;
    double value = 0.0;
    std::string label;
};
using Point = std::map<std::string, PointValue>;

inline bool satisfies_numeric(const Constraint& c, double v) {
    switch (c.rel) {
        case Relation::le: return v <= c.bound.value;
        case Relation::ge: return v >= c.bound.value;
        case Relation::lt: return v <= c.bound.value;
        case Relation::gt: return v >= c.bound.value;
        case Relation::eq: return v == c.bound.value;
        case Relation::in_interval:
            return c.interval.lo <= v && v <= c.interval.hi;
        case Relation::in_set: return false;
    }
    return false;
}

inline bool satisfies_label(const Constraint& c, const std::string& l) {
    if (c.rel != Relation::in_set) return false;
    for (const auto& x : c.labels)
        if (x == l) return true;
    return false;
}

inline bool satisfies(const Constraint& c, const PointValue& v) {
    return v.numeric ? satisfies_numeric(c, v.value) : satisfies_label(c, v.label);
}

inline bool in_declared_domain(const DimensionDecl& d, const PointValue& v) {
    if (const auto* iv = std::get_if<Interval>(&d.domain))
        return v.numeric && iv->lo <= v.value && v.value <= iv->hi;
    if (v.numeric) return false;
    for (const auto& l : std::get<std::vector<std::string>>(d.domain))
        if (l == v.label) return true;
    return false;
}

// Does the value sit inside every constraint on `dimension` along the
// resolved part of `path`, walking the tree by name from the category root?
inline bool path_constraints_hold(const AgOdd& odd, const AttrPath& path,
                                  const std::string& dimension,
                                  const PointValue& v) {
    if (path.empty()) return true;
    auto kind = agodd::category_from_name(path[0]);
    if (!kind) return true;
    const std::vector<AttributeNode>* level = &odd.category(*kind).children;
    for (size_t i = 1; i < path.size(); ++i) {
        const AttributeNode* step = nullptr;
        for (const auto& child : *level)
            if (child.name == path[i]) {
                step = &child;
                break;
            }
        if (!step) break;  // unresolved suffix: only the prefix judges values
        for (const auto& c : step->constraints)
            if (c.dimension == dimension && !satisfies(c, v)) return false;
        level = &step->children;
    }
    return true;
}

// Admissibility of one value for one dimension under the whole ODD:
// deepest-refinement-wins union over all constraint-carrying nodes, full
// declared domain when no node constrains the dimension.
namespace detail {

inline bool subtree_constrains(const AttributeNode& node,
                               const std::string& dimension) {
    for (const auto& c : node.constraints)
        if (c.dimension == dimension) return true;
    for (const auto& child : node.children)
        if (subtree_constrains(child, dimension)) return true;
    return false;
}

inline void admissible_walk(const AgOdd& odd, const AttributeNode& node,
                            AttrPath& path, const std::string& dimension,
                            const PointValue& v, bool& found_any,
                            bool& admitted) {
    path.push_back(node.name);
    bool self = false;
    for (const auto& c : node.constraints)
        if (c.dimension == dimension) self = true;
    bool below = false;
    for (const auto& child : node.children)
        if (subtree_constrains(child, dimension)) below = true;
    if (self && !below) {
        found_any = true;
        if (path_constraints_hold(odd, path, dimension, v)) admitted = true;
    }
    for (const auto& child : node.children)
        admissible_walk(odd, child, path, dimension, v, found_any, admitted);
    path.pop_back();
}

}  // namespace detail

inline bool odd_admits(const AgOdd& odd, const std::string& dimension,
                       const PointValue& v) {
    const DimensionDecl* dim = odd.find_dimension(dimension);
    assert(dim);
    if (!in_declared_domain(*dim, v)) return false;
    bool found_any = false;
    bool admitted = false;
    for (agodd::CategoryKind kind : agodd::kAllCategories) {
        AttrPath path{agodd::category_name(kind)};
        for (const auto& child : odd.category(kind).children)
            detail::admissible_walk(odd, child, path, dimension, v, found_any,
                                    admitted);
    }
    return found_any ? admitted : true;
}

// --- membership -----------------------------------------------------------

// The generators give every dimension a unique unit and globally unique
// labels, so a value names its dimension on its own.
inline const DimensionDecl* dim_for_quantity(const AgOdd& odd,
                                             const std::string& unit) {
    const DimensionDecl* found = nullptr;
    for (const auto& d : odd.dimensions)
        if (d.is_numeric() && d.unit == unit) {
            assert(!found && "oracle needs unique units");
            found = &d;
        }
    return found;
}

inline const DimensionDecl* dim_for_label(const AgOdd& odd,
                                          const std::string& label) {
    const DimensionDecl* found = nullptr;
    for (const auto& d : odd.dimensions) {
        if (d.is_numeric()) continue;
        for (const auto& l : std::get<std::vector<std::string>>(d.domain))
            if (l == label) {
                assert(!found && "oracle needs unique labels");
                found = &d;
            }
    }
    return found;
}

// True when the path resolves fully; otherwise reports whether the deepest
// resolved edge is permissive.
inline bool object_inside(const AgOdd& odd, const AttrPath& object) {
    if (object.empty()) return false;
    auto kind = agodd::category_from_name(object[0]);
    if (!kind) return false;
    const std::vector<AttributeNode>* level = &odd.category(*kind).children;
    Mode edge = odd.category(*kind).mode;
    for (size_t i = 1; i < object.size(); ++i) {
        const AttributeNode* next = nullptr;
        for (const auto& child : *level)
            if (child.name == object[i]) {
                next = &child;
                break;
            }
        if (!next) return edge == Mode::permissive;
        edge = next->mode;
        level = &next->children;
    }
    return true;
}

inline bool contains_sample(const AgOdd& odd, const WorldSample& sample) {
    for (const auto& object : sample.objects)
        if (!object_inside(odd, object)) return false;
    for (const auto& binding : sample.bindings) {
        if (binding.path.empty() ||
            !agodd::category_from_name(binding.path[0]))
            return false;
        if (const auto* q = std::get_if<agodd::Quantity>(&binding.value)) {
            const DimensionDecl* dim = dim_for_quantity(odd, q->unit);
            if (!dim) continue;  // nothing measures this unit
            PointValue v{true, q->value, ""};
            if (!in_declared_domain(*dim, v)) return false;
            if (!path_constraints_hold(odd, binding.path, dim->name, v))
                return false;
        } else {
            const auto& label = std::get<std::string>(binding.value);
            const DimensionDecl* dim = dim_for_label(odd, label);
            if (!dim) continue;  // label appears in no declared domain
            PointValue v{false, 0.0, label};
            if (!path_constraints_hold(odd, binding.path, dim->name, v))
                return false;
        }
    }
    return true;
}

// --- grid coverage --------------------------------------------------------

struct GridShape {
    std::vector<const DimensionDecl*> dims;
    std::vector<int> counts;
    long long total = 1;
};

inline GridShape grid_shape(const AgOdd& odd, int grid) {
    GridShape shape;
    for (const auto& d : odd.dimensions) {
        shape.dims.push_back(&d);
        int n = d.is_numeric()
                    ? grid
                    : static_cast<int>(
                          std::get<std::vector<std::string>>(d.domain).size());
        shape.counts.push_back(n);
        shape.total *= n;
    }
    return shape;
}

inline PointValue cell_value(const DimensionDecl& d, int i, int grid) {
    PointValue v;
    if (const auto* iv = std::get_if<Interval>(&d.domain)) {
        v.numeric = true;
        double width = (iv->hi - iv->lo) / grid;
        v.value = iv->lo + (i + 0.5) * width;
    } else {
        v.numeric = false;
        v.label = std::get<std::vector<std::string>>(d.domain)[i];
    }
    return v;
}

// Scenario coverage of one dimension value: every value binding that the
// unique-unit rule maps to this dimension must admit the value, clamped by
// the binding's raw set, its path constraints, and overall admissibility.
inline bool scenario_admits(const AgOdd& odd, const Scenario& scenario,
                            const std::string& dimension, const PointValue& v) {
    if (!odd_admits(odd, dimension, v)) return false;
    for (const auto& b : scenario.bindings) {
        if (!b.value) continue;
        const DimensionDecl* dim = nullptr;
        bool raw_ok = true;
        switch (b.value->kind) {
            case agodd::BindingValue::Kind::quantity:
                dim = dim_for_quantity(odd, b.value->quantity.unit);
                raw_ok = v.numeric && v.value == b.value->quantity.value;
                break;
            case agodd::BindingValue::Kind::range:
                dim = dim_for_quantity(odd, b.value->unit);
                raw_ok = v.numeric && b.value->range.lo <= v.value &&
                         v.value <= b.value->range.hi;
                break;
            case agodd::BindingValue::Kind::label:
                dim = dim_for_label(odd, b.value->label);
                raw_ok = !v.numeric && v.label == b.value->label;
                break;
        }
        if (!dim || dim->name != dimension) continue;
        if (!raw_ok) return false;
        if (!path_constraints_hold(odd, b.path, dimension, v)) return false;
    }
    return true;
}

struct CoverageCounts {
    long long in_odd = 0;
    long long covered = 0;
    std::map<std::string, std::pair<long long, long long>> per_dimension;
    std::set<std::vector<int>> uncovered;  // in-ODD, no scenario covers
};

inline CoverageCounts enumerate_cells(const AgOdd& odd,
                                      const std::vector<Scenario>& scenarios,
                                      int grid) {
    GridShape shape = grid_shape(odd, grid);
    size_t D = shape.dims.size();
    CoverageCounts counts;

    // Memoized 1-D verdicts; each entry is still a direct per-center
    // predicate evaluation, just computed once.
    std::vector<std::vector<char>> in_odd_1d(D);
    std::vector<std::vector<std::vector<char>>> cov_1d(
        D, std::vector<std::vector<char>>(scenarios.size()));
    for (size_t d = 0; d < D; ++d) {
        const DimensionDecl& decl = *shape.dims[d];
        in_odd_1d[d].resize(shape.counts[d]);
        for (size_t s = 0; s < scenarios.size(); ++s)
            cov_1d[d][s].resize(shape.counts[d]);
        for (int i = 0; i < shape.counts[d]; ++i) {
            PointValue v = cell_value(decl, i, grid);
            in_odd_1d[d][i] = odd_admits(odd, decl.name, v) ? 1 : 0;
            for (size_t s = 0; s < scenarios.size(); ++s)
                cov_1d[d][s][i] =
                    scenario_admits(odd, scenarios[s], decl.name, v) ? 1 : 0;
        }
        long long dim_in = 0, dim_cov = 0;
        for (int i = 0; i < shape.counts[d]; ++i) {
            if (!in_odd_1d[d][i]) continue;
            ++dim_in;
            for (size_t s = 0; s < scenarios.size(); ++s)
                if (cov_1d[d][s][i]) {
                    ++dim_cov;
                    break;
                }
        }
        counts.per_dimension[decl.name] = {dim_in, dim_cov};
    }

    if (D == 0) {
        // The empty product has exactly one point; any scenario covers it.
        counts.in_odd = 1;
        if (!scenarios.empty())
            counts.covered = 1;
        else
            counts.uncovered.insert({});
        return counts;
    }
    std::vector<int> idx(D, 0);
    for (;;) {
        bool io = true;
        for (size_t d = 0; d < D; ++d) io = io && in_odd_1d[d][idx[d]];
        if (io) {
            ++counts.in_odd;
            bool any = false;
            for (size_t s = 0; s < scenarios.size() && !any; ++s) {
                bool all = true;
                for (size_t d = 0; d < D; ++d) all = all && cov_1d[d][s][idx[d]];
                any = all;
            }
            if (any)
                ++counts.covered;
            else
                counts.uncovered.insert(idx);
        }
        size_t d = 0;
        while (d < D && ++idx[d] == shape.counts[d]) idx[d++] = 0;
        if (d == D) break;
    }
    return counts;
}

// --- gap partition --------------------------------------------------------

// Expands reported gap boxes back into cell index tuples and checks the
// partition property: boxes are disjoint, every box cell is in-ODD and
// uncovered, and together they hold exactly the uncovered in-ODD cells.
inline bool gaps_partition_uncovered(const AgOdd& odd,
                                     const std::vector<Scenario>& scenarios,
                                     int grid,
                                     const std::vector<GapRegion>& gaps,
                                     std::string* why = nullptr) {
    CoverageCounts counts = enumerate_cells(odd, scenarios, grid);
    GridShape shape = grid_shape(odd, grid);
    size_t D = shape.dims.size();
    std::set<std::vector<int>> seen;
    for (const auto& gap : gaps) {
        if (gap.extents.size() != D) {
            if (why) *why = "gap with wrong extent count";
            return false;
        }
        std::vector<std::vector<int>> per_dim_indices(D);
        for (size_t d = 0; d < D; ++d) {
            const auto& extent = gap.extents[d];
            const DimensionDecl& decl = *shape.dims[d];
            if (extent.dimension != decl.name) {
                if (why) *why = "gap extents out of declaration order";
                return false;
            }
            for (int i = 0; i < shape.counts[d]; ++i) {
                PointValue v = cell_value(decl, i, grid);
                bool inside;
                if (extent.numeric)
                    inside = v.numeric && extent.range.lo <= v.value &&
                             v.value <= extent.range.hi;
                else {
                    inside = false;
                    for (const auto& l : extent.labels)
                        if (l == v.label) inside = true;
                }
                if (inside) per_dim_indices[d].push_back(i);
            }
            if (per_dim_indices[d].empty()) {
                if (why) *why = "gap extent holds no cell";
                return false;
            }
        }
        std::vector<size_t> pos(D, 0);
        for (;;) {
            std::vector<int> cell(D);
            for (size_t d = 0; d < D; ++d) cell[d] = per_dim_indices[d][pos[d]];
            if (!seen.insert(cell).second) {
                if (why) *why = "gap boxes overlap";
                return false;
            }
            if (!counts.uncovered.count(cell)) {
                if (why) *why = "gap cell is covered or outside the ODD";
                return false;
            }
            size_t d = 0;
            while (d < D && ++pos[d] == per_dim_indices[d].size()) pos[d++] = 0;
            if (d == D) break;
        }
    }
    if (seen.size() != counts.uncovered.size()) {
        if (why) *why = "gaps miss uncovered cells";
        return false;
    }
    return true;
}

}  // namespace oracle
