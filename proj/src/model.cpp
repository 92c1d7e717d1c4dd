#include "agodd/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <sstream>

namespace agodd {

std::string mode_symbol(Mode m) {
    return m == Mode::permissive ? "∪" : "∩";
}

std::string mode_name(Mode m) {
    return m == Mode::permissive ? "permissive" : "restrictive";
}

std::string category_name(CategoryKind k) {
    switch (k) {
        case CategoryKind::scenery: return "scenery";
        case CategoryKind::environment: return "environment";
        case CategoryKind::dynamic_objects: return "dynamic_objects";
    }
    return "?";
}

std::optional<CategoryKind> category_from_name(const std::string& name) {
    for (CategoryKind k : kAllCategories)
        if (category_name(k) == name) return k;
    return std::nullopt;
}

std::string render_tag(const CdvTag& tag) {
    std::string out;
    switch (tag.role) {
        case CdvTag::Role::condition: out = "C"; break;
        case CdvTag::Role::end: out = "EA"; break;
        case CdvTag::Role::start: out = "SA"; break;
    }
    out += std::to_string(tag.index);
    if (tag.sub_index) {
        out += '.';
        out += std::to_string(*tag.sub_index);
    }
    return out;
}

std::optional<CdvTag> parse_tag(const std::string& text) {
    CdvTag tag;
    size_t i = 0;
    if (text.rfind("SA", 0) == 0) {
        tag.role = CdvTag::Role::start;
        i = 2;
    } else if (text.rfind("EA", 0) == 0) {
        tag.role = CdvTag::Role::end;
        i = 2;
    } else if (!text.empty() && text[0] == 'C') {
        tag.role = CdvTag::Role::condition;
        i = 1;
    } else {
        return std::nullopt;
    }
    auto read_int = [&](int& out) {
        size_t start = i;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])))
            ++i;
        if (i == start || i - start > 9) return false;
        out = std::atoi(text.substr(start, i - start).c_str());
        return true;
    };
    if (!read_int(tag.index)) return std::nullopt;
    if (i < text.size() && text[i] == '.') {
        if (tag.role != CdvTag::Role::condition) return std::nullopt;
        ++i;
        int sub = 0;
        if (!read_int(sub)) return std::nullopt;
        tag.sub_index = sub;
    }
    if (i != text.size()) return std::nullopt;
    return tag;
}

std::string relation_symbol(Relation r) {
    switch (r) {
        case Relation::le: return "<=";
        case Relation::ge: return ">=";
        case Relation::lt: return "<";
        case Relation::gt: return ">";
        case Relation::eq: return "=";
        case Relation::in_interval: return "in";
        case Relation::in_set: return "oneof";
    }
    return "?";
}

std::string severity_name(Severity s) {
    switch (s) {
        case Severity::error: return "error";
        case Severity::warning: return "warning";
        case Severity::info: return "info";
    }
    return "?";
}

std::string render_path(const AttrPath& path) {
    std::string out;
    for (size_t i = 0; i < path.size(); ++i) {
        if (i) out += '/';
        out += path[i];
    }
    return out;
}

std::string automation_band_name(AutomationBand b) {
    switch (b) {
        case AutomationBand::manual: return "manual";
        case AutomationBand::partially_automated: return "partially_automated";
        case AutomationBand::semi_autonomous: return "semi_autonomous";
        case AutomationBand::autonomous: return "autonomous";
    }
    return "?";
}

const DimensionDecl* AgOdd::find_dimension(const std::string& name) const {
    for (const auto& d : dimensions)
        if (d.name == name) return &d;
    return nullptr;
}

const AttributeNode* find_node(const AgOdd& odd, const AttrPath& path) {
    if (path.empty()) return nullptr;
    auto kind = category_from_name(path[0]);
    if (!kind) return nullptr;
    const std::vector<AttributeNode>* level = &odd.category(*kind).children;
    const AttributeNode* node = nullptr;
    for (size_t i = 1; i < path.size(); ++i) {
        node = nullptr;
        for (const auto& child : *level) {
            if (child.name == path[i]) {
                node = &child;
                break;
            }
        }
        if (!node) return nullptr;
        level = &node->children;
    }
    return node;
}

AutomationBand classify_automation(int driving_level, int working_level) {
    if (driving_level < 0 || driving_level > 5 || working_level < 0 ||
        working_level > 5)
        throw Error("out-of-range-level",
                    "automation levels must lie in 0..5, got driving=" +
                        std::to_string(driving_level) +
                        " working=" + std::to_string(working_level));
    int joint = std::min(driving_level, working_level);
    if (joint == 0) return AutomationBand::manual;
    if (joint <= 2) return AutomationBand::partially_automated;
    if (joint <= 4) return AutomationBand::semi_autonomous;
    return AutomationBand::autonomous;
}

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    double rounded = std::round(value);
    if (value == rounded && std::abs(value) < 1e15) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.0f", value);
        return buf;
    }
    // Shortest decimal form that parses back to the same double.
    for (int precision = 1; precision <= 17; ++precision) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.*g", precision, value);
        if (std::strtod(buf, nullptr) == value) return buf;
    }
    return "0";
}

namespace {

struct Validator {
    const AgOdd& odd;
    std::vector<Diagnostic> out;

    void error(std::string code, std::string message) {
        out.push_back({Severity::error, std::move(code), std::move(message),
                       std::nullopt});
    }
    void warning(std::string code, std::string message) {
        out.push_back({Severity::warning, std::move(code), std::move(message),
                       std::nullopt});
    }

    void check_dimension_decls() {
        std::map<std::string, int> seen;
        for (const auto& d : odd.dimensions) {
            if (++seen[d.name] == 2)
                error("duplicate-dimension",
                      "dimension '" + d.name + "' is declared more than once");
            if (const auto* iv = std::get_if<Interval>(&d.domain)) {
                if (!(iv->lo <= iv->hi))
                    error("invalid-domain", "dimension '" + d.name +
                                                "' has an empty range [" +
                                                format_number(iv->lo) + ", " +
                                                format_number(iv->hi) + "]");
            } else {
                const auto& labels = std::get<std::vector<std::string>>(d.domain);
                if (labels.empty())
                    error("invalid-domain", "dimension '" + d.name +
                                                "' enumerates no values");
                std::map<std::string, int> labels_seen;
                for (const auto& l : labels)
                    if (++labels_seen[l] == 2)
                        error("invalid-domain", "dimension '" + d.name +
                                                    "' lists value \"" + l +
                                                    "\" more than once");
            }
        }
    }

    void check_constraint(const Constraint& c, const AttrPath& path) {
        const DimensionDecl* dim = odd.find_dimension(c.dimension);
        if (!dim) {
            error("unknown-dimension", render_path(path) +
                                           ": constraint refers to undeclared "
                                           "dimension '" +
                                           c.dimension + "'");
            return;
        }
        auto check_unit = [&](const std::string& unit) {
            if (!unit.empty() && unit != dim->unit)
                error("unit-mismatch", render_path(path) + ": dimension '" +
                                           c.dimension + "' is declared in " +
                                           dim->unit + " but constrained in " +
                                           unit);
        };
        switch (c.rel) {
            case Relation::le:
            case Relation::ge:
            case Relation::lt:
            case Relation::gt:
            case Relation::eq:
                if (!dim->is_numeric())
                    error("unit-mismatch",
                          render_path(path) + ": dimension '" + c.dimension +
                              "' enumerates values and admits no numeric bound");
                check_unit(c.bound.unit);
                break;
            case Relation::in_interval:
                if (!dim->is_numeric())
                    error("unit-mismatch",
                          render_path(path) + ": dimension '" + c.dimension +
                              "' enumerates values and admits no numeric bound");
                check_unit(c.unit);
                if (!(c.interval.lo <= c.interval.hi))
                    error("invalid-interval",
                          render_path(path) + ": empty interval [" +
                              format_number(c.interval.lo) + ", " +
                              format_number(c.interval.hi) + "] on '" +
                              c.dimension + "'");
                break;
            case Relation::in_set: {
                if (dim->is_numeric()) {
                    error("unit-mismatch", render_path(path) + ": dimension '" +
                                               c.dimension +
                                               "' is numeric and admits no "
                                               "value enumeration");
                    break;
                }
                if (c.labels.empty())
                    error("empty-enumeration", render_path(path) +
                                                   ": constraint on '" +
                                                   c.dimension +
                                                   "' enumerates no values");
                const auto& domain = std::get<std::vector<std::string>>(dim->domain);
                for (const auto& l : c.labels)
                    if (std::find(domain.begin(), domain.end(), l) == domain.end())
                        error("unknown-value", render_path(path) + ": value \"" +
                                                   l + "\" is not in the domain "
                                                       "of '" +
                                                   c.dimension + "'");
                break;
            }
        }
    }

    void check_node(const AttributeNode& node, AttrPath& path, int depth,
                    std::map<CdvTag, AttrPath>& tag_sites) {
        path.push_back(node.name);
        if (node.name.empty())
            error("empty-name", render_path(path) + ": attribute without a name");
        if (node.lod != depth)
            error("lod-mismatch",
                  render_path(path) + ": node records level of detail " +
                      std::to_string(node.lod) + " but sits at depth " +
                      std::to_string(depth));
        for (const auto& c : node.constraints) check_constraint(c, path);
        bool dynamic = !path.empty() &&
                       path.front() == category_name(CategoryKind::dynamic_objects);
        for (const auto& tag : node.tags) {
            auto [it, fresh] = tag_sites.emplace(tag, path);
            if (!fresh)
                error("duplicate-cdv-tag",
                      "tag " + render_tag(tag) + " is attached to both " +
                          render_path(it->second) + " and " + render_path(path));
            if (tag.role == CdvTag::Role::condition && !dynamic)
                error("condition-not-dynamic-object",
                      render_path(path) + ": condition tag " + render_tag(tag) +
                          " must sit in the dynamic_objects tree");
            if (tag.sub_index && tag.role != CdvTag::Role::condition)
                error("invalid-tag", render_path(path) + ": tag " +
                                         render_tag(tag) +
                                         " carries a sub-index but is not a "
                                         "condition");
        }
        std::map<std::string, int> names;
        for (const auto& child : node.children)
            if (++names[child.name] == 2)
                error("duplicate-sibling", render_path(path) +
                                               ": two children share the name \"" +
                                               child.name + "\"");
        if (node.mode == Mode::permissive && node.children.size() == 1 &&
            node.children[0].mode == Mode::restrictive &&
            !node.children[0].constraints.empty())
            warning("permissive-single-constrained-child",
                    render_path(path) +
                        ": permissive attribute whose only child is a "
                        "restrictive bound; unlisted instances bypass the bound");
        for (const auto& child : node.children)
            check_node(child, path, depth + 1, tag_sites);
        path.pop_back();
    }

    void check_processes_wellformed(const std::map<CdvTag, AttrPath>& tag_sites) {
        std::map<std::string, int> names;
        for (const auto& p : odd.processes) {
            if (++names[p.name] == 2)
                error("duplicate-process",
                      "process \"" + p.name + "\" is declared more than once");
            bool all = !p.start_tags.empty() && p.trigger.has_value() &&
                       !p.end_tags.empty();
            if (!all && !p.all_absent())
                error("incomplete-process",
                      "process \"" + p.name +
                          "\": start, trigger and end must be given together "
                          "or all be absent");
            auto require = [&](const CdvTag& tag, CdvTag::Role role,
                               const char* where) {
                if (tag.role != role)
                    error("wrong-tag-role", "process \"" + p.name + "\": " +
                                                render_tag(tag) +
                                                " cannot appear as " + where);
                if (!tag_sites.count(tag))
                    error("unknown-tag", "process \"" + p.name + "\": tag " +
                                             render_tag(tag) +
                                             " resolves to no attribute");
            };
            for (const auto& t : p.start_tags)
                require(t, CdvTag::Role::start, "a start attribute");
            for (const auto& t : p.end_tags)
                require(t, CdvTag::Role::end, "an end attribute");
            if (p.trigger) {
                if (const auto* it = std::get_if<InteractionTrigger>(&*p.trigger)) {
                    if (it->tags.empty())
                        error("incomplete-process",
                              "process \"" + p.name +
                                  "\": interaction trigger lists no condition");
                    for (const auto& t : it->tags)
                        require(t, CdvTag::Role::condition, "a trigger");
                } else if (const auto* st =
                               std::get_if<StateChangeTrigger>(&*p.trigger)) {
                    if (!odd.find_dimension(st->dimension))
                        error("unknown-dimension",
                              "process \"" + p.name +
                                  "\": trigger watches undeclared dimension '" +
                                  st->dimension + "'");
                }
            }
            for (const auto& ev : p.end_values) {
                if (!odd.find_dimension(ev.dimension))
                    error("unknown-dimension",
                          "process \"" + p.name +
                              "\": end value names undeclared dimension '" +
                              ev.dimension + "'");
            }
        }
    }

    std::vector<Diagnostic> run() {
        check_dimension_decls();
        std::map<CdvTag, AttrPath> tag_sites;
        for (CategoryKind kind : kAllCategories) {
            AttrPath path{category_name(kind)};
            const auto& cat = odd.category(kind);
            if (cat.kind != kind)
                error("category-order",
                      "category slot " + category_name(kind) + " holds " +
                          category_name(cat.kind));
            std::map<std::string, int> names;
            for (const auto& child : cat.children)
                if (++names[child.name] == 2)
                    error("duplicate-sibling",
                          render_path(path) +
                              ": two children share the name \"" + child.name +
                              "\"");
            for (const auto& child : cat.children)
                check_node(child, path, 0, tag_sites);
        }
        check_processes_wellformed(tag_sites);
        auto rank = [](const Diagnostic& d) {
            return std::tuple<int, std::string, std::string>(
                static_cast<int>(d.severity), d.code, d.message);
        };
        std::stable_sort(out.begin(), out.end(),
                         [&](const Diagnostic& a, const Diagnostic& b) {
                             return rank(a) < rank(b);
                         });
        return std::move(out);
    }
};

void collect_tag(const AttributeNode& node, AttrPath& path, const CdvTag& tag,
                 std::vector<AttrPath>& hits) {
    path.push_back(node.name);
    if (node.tags.count(tag)) hits.push_back(path);
    for (const auto& child : node.children) collect_tag(child, path, tag, hits);
    path.pop_back();
}

}  // namespace

std::vector<Diagnostic> validate_model(const AgOdd& odd) {
    return Validator{odd, {}}.run();
}

AttrPath resolve_tag(const AgOdd& odd, const CdvTag& tag) {
    std::vector<AttrPath> hits;
    for (CategoryKind kind : kAllCategories) {
        AttrPath path{category_name(kind)};
        for (const auto& child : odd.category(kind).children)
            collect_tag(child, path, tag, hits);
    }
    if (hits.empty())
        throw Error("unknown-tag", "tag " + render_tag(tag) +
                                       " resolves to no attribute in ODD \"" +
                                       odd.name + "\"");
    return hits.front();
}

}  // namespace agodd
