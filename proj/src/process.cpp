#include "agodd/process.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

#include "agodd/semantics.hpp"

namespace agodd {

namespace {

struct TagSite {
    AttrPath path;
    std::vector<std::string> dimensions;  // constrained from root to node
};

// Tag -> node path plus the dimensions constrained along it.
std::map<CdvTag, TagSite> tag_sites(const AgOdd& odd) {
    std::map<CdvTag, TagSite> out;
    std::function<void(const AttributeNode&, AttrPath&, std::vector<std::string>&)>
        walk = [&](const AttributeNode& node, AttrPath& path,
                   std::vector<std::string>& dims) {
            path.push_back(node.name);
            size_t added = 0;
            for (const auto& c : node.constraints) {
                if (std::find(dims.begin(), dims.end(), c.dimension) ==
                    dims.end()) {
                    dims.push_back(c.dimension);
                    ++added;
                }
            }
            for (const auto& tag : node.tags)
                out.emplace(tag, TagSite{path, dims});
            for (const auto& child : node.children) walk(child, path, dims);
            dims.resize(dims.size() - added);
            path.pop_back();
        };
    for (CategoryKind kind : kAllCategories) {
        AttrPath path{category_name(kind)};
        std::vector<std::string> dims;
        for (const auto& child : odd.category(kind).children)
            walk(child, path, dims);
    }
    return out;
}

bool state_satisfies(const WorldState& state, const AgOdd& odd,
                     const TagSite& site) {
    for (const auto& dim_name : site.dimensions) {
        const DimensionDecl* dim = odd.find_dimension(dim_name);
        if (!dim) return false;
        auto it = state.values.find(dim_name);
        if (it == state.values.end()) return false;
        Region1D eff = effective_domain(odd, site.path, dim_name);
        if (const auto* q = std::get_if<Quantity>(&it->second)) {
            if (!dim->is_numeric()) return false;
            if (!q->unit.empty() && q->unit != dim->unit) return false;
            if (!eff.contains_value(q->value)) return false;
        } else {
            const auto& label = std::get<std::string>(it->second);
            if (dim->is_numeric()) return false;
            if (!eff.contains_label(label)) return false;
        }
    }
    return true;
}

}  // namespace

std::set<CdvTag> satisfied_tags(const WorldState& state, const AgOdd& odd) {
    std::set<CdvTag> out;
    for (const auto& [tag, site] : tag_sites(odd)) {
        if (tag.role == CdvTag::Role::condition) continue;
        if (state_satisfies(state, odd, site)) out.insert(tag);
    }
    return out;
}

std::vector<Diagnostic> check_processes(const AgOdd& odd) {
    std::vector<Diagnostic> out;
    auto error = [&](std::string code, std::string message) {
        out.push_back({Severity::error, std::move(code), std::move(message),
                       std::nullopt});
    };
    auto warning = [&](std::string code, std::string message) {
        out.push_back({Severity::warning, std::move(code), std::move(message),
                       std::nullopt});
    };
    auto sites = tag_sites(odd);
    for (const auto& p : odd.processes) {
        std::string who = "process \"" + p.name + "\"";
        bool all = !p.start_tags.empty() && p.trigger.has_value() &&
                   !p.end_tags.empty();
        if (!all && !p.all_absent())
            error("incomplete-process",
                  who + ": start, trigger and end must be given together or "
                        "all be absent");
        auto site_of = [&](const CdvTag& tag, CdvTag::Role role,
                           const char* where) -> const TagSite* {
            if (tag.role != role) {
                error("wrong-tag-role", who + ": " + render_tag(tag) +
                                            " cannot appear as " + where);
                return nullptr;
            }
            auto it = sites.find(tag);
            if (it == sites.end()) {
                error("unknown-tag", who + ": tag " + render_tag(tag) +
                                         " resolves to no attribute");
                return nullptr;
            }
            return &it->second;
        };
        std::vector<const TagSite*> start_sites, end_sites;
        for (const auto& t : p.start_tags)
            if (const auto* s = site_of(t, CdvTag::Role::start, "a start attribute")) {
                start_sites.push_back(s);
                for (const auto& d : s->dimensions)
                    if (effective_domain(odd, s->path, d).empty())
                        warning("unsatisfiable-start",
                                who + ": start state " + render_tag(t) +
                                    " admits no value of '" + d + "'");
            }
        for (const auto& t : p.end_tags)
            if (const auto* s = site_of(t, CdvTag::Role::end, "an end attribute")) {
                end_sites.push_back(s);
                for (const auto& d : s->dimensions)
                    if (effective_domain(odd, s->path, d).empty())
                        error("empty-end-domain",
                              who + ": end state " + render_tag(t) +
                                  " admits no value of '" + d +
                                  "', nothing to project onto");
            }
        // A dimension both sides constrain must be measured the same way.
        auto unit_on = [&](const TagSite& site, const std::string& dim) {
            const AttributeNode* node = find_node(odd, site.path);
            std::string unit;
            if (node)
                for (const auto& c : node->constraints)
                    if (c.dimension == dim)
                        unit = c.rel == Relation::in_interval ? c.unit
                                                              : c.bound.unit;
            return unit;
        };
        for (const auto* ss : start_sites)
            for (const auto& d : ss->dimensions)
                for (const auto* es : end_sites)
                    if (std::find(es->dimensions.begin(), es->dimensions.end(),
                                  d) != es->dimensions.end()) {
                        std::string su = unit_on(*ss, d), eu = unit_on(*es, d);
                        if (!su.empty() && !eu.empty() && su != eu)
                            error("incompatible-start-end",
                                  who + ": '" + d + "' is bounded in " + su +
                                      " at the start but " + eu + " at the end");
                    }
        if (p.trigger) {
            if (const auto* it = std::get_if<InteractionTrigger>(&*p.trigger)) {
                if (it->tags.empty())
                    error("incomplete-process",
                          who + ": interaction trigger lists no condition");
                for (const auto& t : it->tags) {
                    if (const auto* s =
                            site_of(t, CdvTag::Role::condition, "a trigger")) {
                        if (s->path.empty() ||
                            s->path[0] !=
                                category_name(CategoryKind::dynamic_objects))
                            error("condition-not-dynamic-object",
                                  who + ": condition " + render_tag(t) +
                                      " sits at " + render_path(s->path) +
                                      ", outside the dynamic_objects tree");
                    }
                }
            } else if (const auto* st =
                           std::get_if<StateChangeTrigger>(&*p.trigger)) {
                if (!odd.find_dimension(st->dimension))
                    error("unknown-dimension",
                          who + ": trigger watches undeclared dimension '" +
                              st->dimension + "'");
            } else if (const auto* rt =
                           std::get_if<RelativeTimeTrigger>(&*p.trigger)) {
                if (!(rt->duration > 0))
                    warning("nonpositive-duration",
                            who + ": time trigger fires after " +
                                format_number(rt->duration) + " " + rt->unit);
            }
        }
        for (const auto& ev : p.end_values) {
            const DimensionDecl* dim = odd.find_dimension(ev.dimension);
            if (!dim) {
                error("unknown-dimension",
                      who + ": end value names undeclared dimension '" +
                          ev.dimension + "'");
                continue;
            }
            if (const auto* q = std::get_if<Quantity>(&ev.value)) {
                if (!dim->is_numeric()) {
                    error("unit-mismatch", who + ": end value for '" +
                                               ev.dimension +
                                               "' must be one of its values");
                    continue;
                }
                if (!q->unit.empty() && q->unit != dim->unit)
                    error("unit-mismatch",
                          who + ": end value for '" + ev.dimension + "' is in " +
                              q->unit + " but the dimension is declared in " +
                              dim->unit);
                if (!full_region(*dim).contains_value(q->value))
                    warning("end-value-outside-domain",
                            who + ": end value " + format_number(q->value) +
                                " lies outside the domain of '" + ev.dimension +
                                "'");
            } else {
                const auto& label = std::get<std::string>(ev.value);
                if (dim->is_numeric()) {
                    error("unit-mismatch", who + ": end value for '" +
                                               ev.dimension +
                                               "' must be a number");
                    continue;
                }
                if (!full_region(*dim).contains_label(label))
                    warning("end-value-outside-domain",
                            who + ": end value \"" + label +
                                "\" lies outside the domain of '" +
                                ev.dimension + "'");
            }
        }
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

namespace {

bool trigger_matches(const WorldState& state, const Trigger& trigger,
                     const ProcessEvent& event, std::string& detail) {
    if (const auto* it = std::get_if<InteractionTrigger>(&trigger)) {
        const auto* ev = std::get_if<InteractionEvent>(&event);
        if (!ev) {
            detail = "interaction trigger, non-interaction event";
            return false;
        }
        for (const auto& tag : it->tags)
            if (tag == ev->tag) return true;
        detail = "condition " + render_tag(ev->tag) + " is not listed";
        return false;
    }
    if (const auto* rt = std::get_if<RelativeTimeTrigger>(&trigger)) {
        const auto* ev = std::get_if<ElapsedEvent>(&event);
        if (!ev) {
            detail = "time trigger, non-elapsed event";
            return false;
        }
        if (ev->unit != rt->unit) {
            detail = "elapsed time is counted in " + ev->unit + ", trigger in " +
                     rt->unit;
            return false;
        }
        auto it = state.elapsed.find(rt->unit);
        double total = it == state.elapsed.end() ? 0.0 : it->second;
        if (total >= rt->duration) return true;
        detail = format_number(total) + " " + rt->unit + " of " +
                 format_number(rt->duration) + " elapsed";
        return false;
    }
    const auto& st = std::get<StateChangeTrigger>(trigger);
    const auto* ev = std::get_if<MeasuredEvent>(&event);
    if (!ev) {
        detail = "state trigger, non-measured event";
        return false;
    }
    if (ev->dimension != st.dimension) {
        detail = "watches '" + st.dimension + "', event measured '" +
                 ev->dimension + "'";
        return false;
    }
    auto it = state.values.find(st.dimension);
    const auto* q =
        it == state.values.end() ? nullptr : std::get_if<Quantity>(&it->second);
    if (!q) {
        detail = "no measured value for '" + st.dimension + "'";
        return false;
    }
    double v = q->value;
    bool ok = false;
    switch (st.rel) {
        case Relation::le: ok = v <= st.value; break;
        case Relation::ge: ok = v >= st.value; break;
        case Relation::lt: ok = v < st.value; break;
        case Relation::gt: ok = v > st.value; break;
        case Relation::eq: ok = v == st.value; break;
        default: ok = false;
    }
    if (!ok)
        detail = st.dimension + " = " + format_number(v) + " does not satisfy " +
                 relation_symbol(st.rel) + " " + format_number(st.value);
    return ok;
}

double project_value(double v, const std::vector<Interval>& intervals) {
    double best = intervals.front().lo;
    double best_dist = std::numeric_limits<double>::infinity();
    for (const auto& iv : intervals) {
        double candidate = std::min(std::max(v, iv.lo), iv.hi);
        double dist = std::abs(v - candidate);
        if (dist < best_dist || (dist == best_dist && candidate < best)) {
            best = candidate;
            best_dist = dist;
        }
    }
    return best;
}

}  // namespace

std::variant<WorldState, NoFire> fire_trigger(const WorldState& state,
                                              const ProcessDef& process,
                                              const ProcessEvent& event,
                                              const AgOdd& odd) {
    if (!process.trigger)
        return NoFire{"trigger-mismatch",
                      "process \"" + process.name + "\" declares no trigger"};
    std::string detail;
    if (!trigger_matches(state, *process.trigger, event, detail))
        return NoFire{"trigger-mismatch", detail};
    auto sites = tag_sites(odd);
    for (const auto& tag : process.start_tags) {
        auto it = sites.find(tag);
        if (it == sites.end())
            return NoFire{"start-unsatisfied", "tag " + render_tag(tag) +
                                                   " resolves to no attribute"};
        if (!state_satisfies(state, odd, it->second))
            return NoFire{"start-unsatisfied",
                          "state does not satisfy " + render_tag(tag) + " at " +
                              render_path(it->second.path)};
    }
    WorldState next = state;
    // The end attributes pull every dimension they constrain to the nearest
    // admissible point; explicit end values then override.
    for (const auto& tag : process.end_tags) {
        auto it = sites.find(tag);
        if (it == sites.end()) continue;
        const TagSite& site = it->second;
        for (const auto& dim_name : site.dimensions) {
            const DimensionDecl* dim = odd.find_dimension(dim_name);
            if (!dim) continue;
            Region1D eff = effective_domain(odd, site.path, dim_name);
            if (eff.empty())
                throw Error("empty-end-domain",
                            "process \"" + process.name + "\": end state " +
                                render_tag(tag) + " admits no value of '" +
                                dim_name + "'");
            auto cur = next.values.find(dim_name);
            if (eff.numeric) {
                double v;
                if (cur != next.values.end()) {
                    const auto* q = std::get_if<Quantity>(&cur->second);
                    if (q && !q->unit.empty() && q->unit != dim->unit)
                        throw Error("unit-mismatch",
                                    "'" + dim_name + "' carries " + q->unit +
                                        " but is declared in " + dim->unit);
                    v = q ? q->value : eff.intervals.front().lo;
                } else {
                    v = eff.intervals.front().lo;
                }
                next.values[dim_name] =
                    Quantity{project_value(v, eff.intervals), dim->unit};
            } else {
                std::string label;
                const std::string* cur_label =
                    cur == next.values.end()
                        ? nullptr
                        : std::get_if<std::string>(&cur->second);
                if (cur_label && eff.contains_label(*cur_label))
                    label = *cur_label;
                else
                    label = eff.labels.front();
                next.values[dim_name] = label;
            }
        }
    }
    for (const auto& ev : process.end_values) {
        const DimensionDecl* dim = odd.find_dimension(ev.dimension);
        if (const auto* q = std::get_if<Quantity>(&ev.value)) {
            if (dim && !q->unit.empty() && q->unit != dim->unit)
                throw Error("unit-mismatch",
                            "end value for '" + ev.dimension + "' is in " +
                                q->unit + " but the dimension is declared in " +
                                dim->unit);
            next.values[ev.dimension] =
                Quantity{q->value, dim ? dim->unit : q->unit};
        } else {
            next.values[ev.dimension] = std::get<std::string>(ev.value);
        }
    }
    // A fired time trigger restarts its clock.
    if (std::holds_alternative<RelativeTimeTrigger>(*process.trigger))
        next.elapsed[std::get<RelativeTimeTrigger>(*process.trigger).unit] = 0.0;
    return next;
}

SimulationTrace simulate(const WorldState& initial, const AgOdd& odd,
                         const std::vector<ProcessEvent>& events) {
    SimulationTrace trace;
    trace.initial = initial;
    WorldState state = initial;
    for (const auto& event : events) {
        if (const auto* me = std::get_if<MeasuredEvent>(&event)) {
            const DimensionDecl* dim = odd.find_dimension(me->dimension);
            if (!dim)
                throw Error("unknown-dimension",
                            "measured event names undeclared dimension '" +
                                me->dimension + "'");
            if (!me->value.unit.empty() && me->value.unit != dim->unit)
                throw Error("unit-mismatch",
                            "'" + me->dimension + "' is declared in " +
                                dim->unit + " but measured in " +
                                me->value.unit);
            state.values[me->dimension] = Quantity{me->value.value, dim->unit};
        } else if (const auto* ee = std::get_if<ElapsedEvent>(&event)) {
            state.elapsed[ee->unit] += ee->duration;
        }
        SimulationStep step;
        step.event = event;
        for (const auto& p : odd.processes) {
            auto result = fire_trigger(state, p, event, odd);
            if (auto* fired = std::get_if<WorldState>(&result)) {
                state = std::move(*fired);
                step.fired.push_back(p.name);
            }
        }
        step.state = state;
        trace.steps.push_back(std::move(step));
    }
    return trace;
}

std::string render_event(const ProcessEvent& event) {
    if (const auto* ie = std::get_if<InteractionEvent>(&event))
        return "interaction " + render_tag(ie->tag);
    if (const auto* ee = std::get_if<ElapsedEvent>(&event))
        return "elapsed " + format_number(ee->duration) + " " + ee->unit;
    const auto& me = std::get<MeasuredEvent>(event);
    return "measured " + me.dimension + " " + format_number(me.value.value) +
           " " + me.value.unit;
}

}  // namespace agodd
