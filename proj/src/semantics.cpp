#include "agodd/semantics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace agodd {

bool Region1D::contains_value(double v) const {
    if (!numeric) return false;
    for (const auto& iv : intervals)
        if (iv.lo <= v && v <= iv.hi) return true;
    return false;
}

bool Region1D::contains_label(const std::string& l) const {
    if (numeric) return false;
    return std::find(labels.begin(), labels.end(), l) != labels.end();
}

Region1D full_region(const DimensionDecl& dim) {
    Region1D r;
    r.dimension = dim.name;
    if (const auto* iv = std::get_if<Interval>(&dim.domain)) {
        r.numeric = true;
        if (iv->lo <= iv->hi) r.intervals.push_back(*iv);
    } else {
        r.numeric = false;
        r.labels = std::get<std::vector<std::string>>(dim.domain);
    }
    return r;
}

namespace {

// Sorts and merges overlapping or touching intervals in place.
void normalize(std::vector<Interval>& ivs) {
    std::sort(ivs.begin(), ivs.end(), [](const Interval& a, const Interval& b) {
        return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi);
    });
    std::vector<Interval> out;
    for (const auto& iv : ivs) {
        if (iv.lo > iv.hi) continue;
        if (!out.empty() && iv.lo <= out.back().hi)
            out.back().hi = std::max(out.back().hi, iv.hi);
        else
            out.push_back(iv);
    }
    ivs = std::move(out);
}

}  // namespace

Region1D intersect(const Region1D& a, const Region1D& b) {
    Region1D r;
    r.dimension = a.dimension;
    r.numeric = a.numeric;
    if (a.numeric) {
        for (const auto& x : a.intervals)
            for (const auto& y : b.intervals) {
                Interval iv{std::max(x.lo, y.lo), std::min(x.hi, y.hi)};
                if (iv.lo <= iv.hi) r.intervals.push_back(iv);
            }
        normalize(r.intervals);
    } else {
        for (const auto& l : a.labels)
            if (b.contains_label(l)) r.labels.push_back(l);
    }
    return r;
}

Region1D unite(const Region1D& a, const Region1D& b) {
    Region1D r;
    r.dimension = a.dimension;
    r.numeric = a.numeric;
    if (a.numeric) {
        r.intervals = a.intervals;
        r.intervals.insert(r.intervals.end(), b.intervals.begin(),
                           b.intervals.end());
        normalize(r.intervals);
    } else {
        r.labels = a.labels;
        for (const auto& l : b.labels)
            if (!r.contains_label(l)) r.labels.push_back(l);
    }
    return r;
}

Region1D apply_constraint(const Region1D& region, const Constraint& c) {
    Region1D clip;
    clip.dimension = region.dimension;
    clip.numeric = region.numeric;
    constexpr double inf = std::numeric_limits<double>::infinity();
    switch (c.rel) {
        case Relation::le:
            clip.intervals.push_back({-inf, c.bound.value});
            break;
        case Relation::ge:
            clip.intervals.push_back({c.bound.value, inf});
            break;
        // The grid machinery samples cell centers, so treating strict
        // bounds as closed costs nothing measurable; it keeps regions in
        // one representation.
        case Relation::lt:
            clip.intervals.push_back({-inf, c.bound.value});
            break;
        case Relation::gt:
            clip.intervals.push_back({c.bound.value, inf});
            break;
        case Relation::eq:
            clip.intervals.push_back({c.bound.value, c.bound.value});
            break;
        case Relation::in_interval:
            if (c.interval.lo <= c.interval.hi) clip.intervals.push_back(c.interval);
            break;
        case Relation::in_set:
            clip.labels = c.labels;
            break;
    }
    return intersect(region, clip);
}

std::string boundary_kind_name(BoundaryKind k) {
    return k == BoundaryKind::permissive_open ? "permissive_open"
                                              : "restrictive_hard";
}

std::pair<const AttributeNode*, size_t> resolve_prefix(const AgOdd& odd,
                                                       const AttrPath& path) {
    if (path.empty()) return {nullptr, 0};
    auto kind = category_from_name(path[0]);
    if (!kind) return {nullptr, 0};
    const std::vector<AttributeNode>* level = &odd.category(*kind).children;
    const AttributeNode* node = nullptr;
    size_t resolved = 1;
    for (size_t i = 1; i < path.size(); ++i) {
        const AttributeNode* next = nullptr;
        for (const auto& child : *level)
            if (child.name == path[i]) {
                next = &child;
                break;
            }
        if (!next) break;
        node = next;
        level = &node->children;
        resolved = i + 1;
    }
    return {node, resolved};
}

Region1D effective_domain(const AgOdd& odd, const AttrPath& path,
                          const std::string& dimension) {
    const DimensionDecl* dim = odd.find_dimension(dimension);
    if (!dim)
        throw Error("unknown-dimension",
                    "dimension '" + dimension + "' is not declared");
    auto [node, resolved] = resolve_prefix(odd, path);
    if (resolved != path.size() || path.empty())
        throw Error("unknown-path",
                    "path " + render_path(path) + " does not resolve");
    Region1D region = full_region(*dim);
    if (path.size() == 1) return region;
    auto kind = category_from_name(path[0]);
    const std::vector<AttributeNode>* level = &odd.category(*kind).children;
    for (size_t i = 1; i < path.size(); ++i) {
        const AttributeNode* step = nullptr;
        for (const auto& child : *level)
            if (child.name == path[i]) {
                step = &child;
                break;
            }
        for (const auto& c : step->constraints)
            if (c.dimension == dimension) region = apply_constraint(region, c);
        level = &step->children;
    }
    return region;
}

BoundaryKind boundary_kind(const AgOdd& odd, const AttrPath& path,
                           const Facet& facet) {
    // Numeric limits exclude what lies beyond them no matter how open the
    // attribute is to unlisted instances.
    if (facet.kind == Facet::Kind::numeric_bound)
        return BoundaryKind::restrictive_hard;
    if (path.empty())
        throw Error("unknown-path", "empty path has no boundary");
    auto kind = category_from_name(path[0]);
    if (!kind)
        throw Error("unknown-path",
                    "path " + render_path(path) + " does not resolve");
    if (path.size() == 1)
        return odd.category(*kind).mode == Mode::permissive
                   ? BoundaryKind::permissive_open
                   : BoundaryKind::restrictive_hard;
    const AttributeNode* node = find_node(odd, path);
    if (!node)
        throw Error("unknown-path",
                    "path " + render_path(path) + " does not resolve");
    return node->mode == Mode::permissive ? BoundaryKind::permissive_open
                                          : BoundaryKind::restrictive_hard;
}

namespace {

void exclude(Membership& m, AttrPath path, std::string cause,
             std::string detail) {
    m.included = false;
    m.reasons.push_back({std::move(path), std::move(cause), std::move(detail)});
}

}  // namespace

Membership contains(const AgOdd& odd, const WorldSample& sample) {
    Membership m;
    for (const auto& object : sample.objects) {
        if (object.empty() || !category_from_name(object[0])) {
            exclude(m, object, "unknown-category",
                    "path must start at scenery, environment or "
                    "dynamic_objects");
            continue;
        }
        auto [node, resolved] = resolve_prefix(odd, object);
        if (resolved == object.size()) continue;  // listed explicitly
        Mode edge = node ? node->mode : odd.category(*category_from_name(object[0])).mode;
        if (edge == Mode::permissive) continue;  // open enumeration
        AttrPath at(object.begin(), object.begin() + resolved);
        if (node)
            exclude(m, object, "restrictive-enumeration",
                    "\"" + object[resolved] + "\" is not among the listed "
                    "refinements of " + render_path(at));
        else
            exclude(m, object, "unmentioned-attribute",
                    "\"" + object[resolved] + "\" is not a listed attribute of " +
                        render_path(at));
    }
    for (const auto& binding : sample.bindings) {
        if (binding.path.empty() || !category_from_name(binding.path[0])) {
            exclude(m, binding.path, "unknown-category",
                    "value bound outside the category trees");
            continue;
        }
        auto [node, resolved] = resolve_prefix(odd, binding.path);
        (void)node;
        // Values are judged at the deepest listed node along the path; an
        // unresolved suffix is the object-presence question handled above.
        AttrPath at(binding.path.begin(), binding.path.begin() + resolved);
        if (const auto* q = std::get_if<Quantity>(&binding.value)) {
            // The unit picks the dimension; prefer one the path constrains.
            const DimensionDecl* dim = nullptr;
            for (const auto& d : odd.dimensions) {
                if (!d.is_numeric() || d.unit != q->unit) continue;
                if (!dim) dim = &d;
                if (effective_domain(odd, at, d.name) != full_region(d)) {
                    dim = &d;
                    break;
                }
            }
            if (!dim) continue;  // no declared dimension measures this unit
            Region1D eff = effective_domain(odd, at, dim->name);
            if (!eff.contains_value(q->value))
                exclude(m, binding.path, "numeric-bound",
                        dim->name + " = " + format_number(q->value) + " " +
                            q->unit + " lies outside " + render_region(eff));
        } else {
            const auto& label = std::get<std::string>(binding.value);
            for (const auto& d : odd.dimensions) {
                if (d.is_numeric()) continue;
                if (!full_region(d).contains_label(label)) continue;
                Region1D eff = effective_domain(odd, at, d.name);
                if (!eff.contains_label(label))
                    exclude(m, binding.path, "value-enumeration",
                            d.name + " = \"" + label + "\" lies outside " +
                                render_region(eff));
                break;
            }
        }
    }
    return m;
}

namespace {

// Deepest-refinement collection: a node contributes its effective domain
// unless a descendant constrains the dimension again (the refinement then
// holds the boundary).
void collect_regions(const AgOdd& odd, const AttributeNode& node,
                     AttrPath& path, const std::string& dimension,
                     bool& any, Region1D& acc) {
    path.push_back(node.name);
    bool self = std::any_of(node.constraints.begin(), node.constraints.end(),
                            [&](const Constraint& c) {
                                return c.dimension == dimension;
                            });
    bool below = false;
    std::function<bool(const AttributeNode&)> descendant_constrains =
        [&](const AttributeNode& n) {
            for (const auto& child : n.children) {
                for (const auto& c : child.constraints)
                    if (c.dimension == dimension) return true;
                if (descendant_constrains(child)) return true;
            }
            return false;
        };
    below = descendant_constrains(node);
    if (self && !below) {
        Region1D eff = effective_domain(odd, path, dimension);
        acc = any ? unite(acc, eff) : eff;
        any = true;
    }
    for (const auto& child : node.children)
        collect_regions(odd, child, path, dimension, any, acc);
    path.pop_back();
}

}  // namespace

Region1D odd_region(const AgOdd& odd, const std::string& dimension) {
    const DimensionDecl* dim = odd.find_dimension(dimension);
    if (!dim)
        throw Error("unknown-dimension",
                    "dimension '" + dimension + "' is not declared");
    bool any = false;
    Region1D acc;
    for (CategoryKind kind : kAllCategories) {
        AttrPath path{category_name(kind)};
        for (const auto& child : odd.category(kind).children)
            collect_regions(odd, child, path, dimension, any, acc);
    }
    return any ? acc : full_region(*dim);
}

std::string render_region(const Region1D& region) {
    std::string out;
    if (region.numeric) {
        if (region.intervals.empty()) return "{}";
        for (size_t i = 0; i < region.intervals.size(); ++i) {
            if (i) out += " ∪ ";
            out += "[" + format_number(region.intervals[i].lo) + ", " +
                   format_number(region.intervals[i].hi) + "]";
        }
    } else {
        out = "{";
        for (size_t i = 0; i < region.labels.size(); ++i) {
            if (i) out += ", ";
            out += "\"" + region.labels[i] + "\"";
        }
        out += "}";
    }
    return out;
}

}  // namespace agodd
