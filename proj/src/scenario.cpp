#include "agodd/scenario.hpp"

#include <algorithm>

namespace agodd {

namespace {

// Candidate dimensions for a value binding, in declaration order.
std::vector<const DimensionDecl*> candidates(const ScenarioBinding& binding,
                                             const AgOdd& odd) {
    std::vector<const DimensionDecl*> out;
    const BindingValue& v = *binding.value;
    for (const auto& d : odd.dimensions) {
        if (v.kind == BindingValue::Kind::label) {
            if (!d.is_numeric()) {
                const auto& labels = std::get<std::vector<std::string>>(d.domain);
                if (std::find(labels.begin(), labels.end(), v.label) !=
                    labels.end())
                    out.push_back(&d);
            }
            continue;
        }
        if (!d.is_numeric()) continue;
        const std::string& unit =
            v.kind == BindingValue::Kind::quantity ? v.quantity.unit : v.unit;
        if (unit.empty() || unit == d.unit) out.push_back(&d);
    }
    return out;
}

// Candidates the binding's path actually constrains.
std::vector<const DimensionDecl*> constrained_candidates(
    const std::vector<const DimensionDecl*>& cands, const ScenarioBinding& binding,
    const AgOdd& odd) {
    std::vector<const DimensionDecl*> out;
    auto [node, resolved] = resolve_prefix(odd, binding.path);
    (void)node;
    if (resolved == 0) return out;
    AttrPath at(binding.path.begin(), binding.path.begin() + resolved);
    for (const auto* d : cands)
        if (effective_domain(odd, at, d->name) != full_region(*d))
            out.push_back(d);
    return out;
}

}  // namespace

const DimensionDecl* binding_dimension(const ScenarioBinding& binding,
                                       const AgOdd& odd) {
    if (!binding.value) return nullptr;
    auto cands = candidates(binding, odd);
    if (cands.empty()) return nullptr;
    auto constrained = constrained_candidates(cands, binding, odd);
    if (constrained.size() == 1) return constrained.front();
    if (!constrained.empty()) return nullptr;
    if (cands.size() == 1) return cands.front();
    return nullptr;
}

std::vector<Diagnostic> validate_scenario(const Scenario& scenario,
                                          const AgOdd& odd) {
    std::vector<Diagnostic> out;
    auto error = [&](std::string code, std::string message) {
        out.push_back({Severity::error, std::move(code), std::move(message),
                       std::nullopt});
    };
    auto warning = [&](std::string code, std::string message) {
        out.push_back({Severity::warning, std::move(code), std::move(message),
                       std::nullopt});
    };
    std::string who = "scenario \"" + scenario.name + "\"";
    for (const auto& b : scenario.bindings) {
        if (b.layer < kMinLayer || b.layer > kMaxLayer)
            error("invalid-layer", who + ": layer " + std::to_string(b.layer) +
                                       " is outside 1..7");
        if (b.path.empty() || !category_from_name(b.path[0])) {
            error("unknown-category",
                  who + ": path " + render_path(b.path) +
                      " must start at scenery, environment or dynamic_objects");
            continue;
        }
        if (b.layer == 7) {
            const AttributeNode* node = find_node(odd, b.path);
            if (!node || node->tags.empty())
                warning("layer-misuse",
                        who + ": layer 7 binds " + render_path(b.path) +
                            ", which carries no process tag");
        }
        if (b.value) {
            if (b.value->kind == BindingValue::Kind::range &&
                !(b.value->range.lo <= b.value->range.hi))
                error("invalid-interval",
                      who + ": empty interval [" +
                          format_number(b.value->range.lo) + ", " +
                          format_number(b.value->range.hi) + "] on " +
                          render_path(b.path));
            auto cands = candidates(b, odd);
            auto constrained = constrained_candidates(cands, b, odd);
            const auto& pool = constrained.empty() ? cands : constrained;
            if (cands.empty())
                warning("unbindable-value",
                        who + ": no declared dimension accepts the value bound "
                              "at " +
                            render_path(b.path));
            else if (pool.size() > 1) {
                std::string names;
                for (const auto* d : pool) {
                    if (!names.empty()) names += ", ";
                    names += d->name;
                }
                error("ambiguous-binding",
                      who + ": value at " + render_path(b.path) +
                          " could bind any of: " + names);
            }
        }
    }
    for (const auto& [layer, name] : scenario.processes) {
        if (layer != 7)
            warning("layer-misuse", who + ": process \"" + name +
                                        "\" referenced on layer " +
                                        std::to_string(layer) +
                                        " rather than layer 7");
        bool known = std::any_of(odd.processes.begin(), odd.processes.end(),
                                 [&](const ProcessDef& p) {
                                     return p.name == name;
                                 });
        if (!known)
            error("unknown-process",
                  who + ": process \"" + name + "\" is not declared in the ODD");
    }
    auto rank = [](const Diagnostic& d) {
        return std::tuple<int, std::string, std::string>(
            static_cast<int>(d.severity), d.code, d.message);
    };
    std::stable_sort(out.begin(), out.end(),
                     [&](const Diagnostic& a, const Diagnostic& b) {
                         return rank(a) < rank(b);
                     });
    return out;
}

ScenarioRegion scenario_region(const Scenario& scenario, const AgOdd& odd) {
    ScenarioRegion out;
    for (const auto& d : odd.dimensions)
        out.dimensions[d.name] = odd_region(odd, d.name);
    for (const auto& b : scenario.bindings) {
        out.instantiated.push_back(b.path);
        if (!b.value) continue;
        const DimensionDecl* dim = binding_dimension(b, odd);
        if (!dim) continue;
        Region1D r;
        r.dimension = dim->name;
        r.numeric = dim->is_numeric();
        switch (b.value->kind) {
            case BindingValue::Kind::quantity:
                r.intervals.push_back(
                    {b.value->quantity.value, b.value->quantity.value});
                break;
            case BindingValue::Kind::range:
                if (b.value->range.lo <= b.value->range.hi)
                    r.intervals.push_back(b.value->range);
                break;
            case BindingValue::Kind::label:
                r.labels.push_back(b.value->label);
                break;
        }
        auto [node, resolved] = resolve_prefix(odd, b.path);
        (void)node;
        if (resolved > 0) {
            AttrPath at(b.path.begin(), b.path.begin() + resolved);
            r = intersect(r, effective_domain(odd, at, dim->name));
        }
        out.dimensions[dim->name] = intersect(out.dimensions[dim->name], r);
        out.bound_dimensions.insert(dim->name);
    }
    return out;
}

}  // namespace agodd
