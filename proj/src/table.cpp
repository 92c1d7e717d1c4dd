#include <sstream>

#include "agodd/cli.hpp"
#include "agodd/dsl.hpp"

namespace agodd {

namespace {

std::string segment_text(const AttributeNode& node) {
    std::string out = quote(node.name) + " (" + mode_symbol(node.mode) + ")";
    if (!node.constraints.empty()) {
        out += " {";
        for (size_t i = 0; i < node.constraints.size(); ++i) {
            const Constraint& c = node.constraints[i];
            out += (i ? "; " : "") + c.dimension + " ";
            if (c.rel == Relation::in_interval) {
                out += "in [" + format_number(c.interval.lo) + ", " +
                       format_number(c.interval.hi) + "]";
                if (!c.unit.empty()) out += " " + c.unit;
            } else if (c.rel == Relation::in_set) {
                out += "oneof {";
                for (const auto& l : c.labels) out += " " + quote(l);
                out += " }";
            } else {
                out += relation_symbol(c.rel) + " " +
                       format_number(c.bound.value);
                if (!c.bound.unit.empty()) out += " " + c.bound.unit;
            }
        }
        out += "}";
    }
    if (!node.tags.empty()) {
        out += " tag ";
        bool first = true;
        for (const auto& t : node.tags) {
            if (!first) out += ", ";
            out += render_tag(t);
            first = false;
        }
    }
    if (node.iteration) out += " iter " + std::to_string(*node.iteration);
    return out;
}

void rows(const CategoryNode& cat, const AttributeNode& node,
          std::vector<std::string>& chain, std::ostringstream& os) {
    chain.push_back(segment_text(node));
    if (node.children.empty()) {
        os << "  ";
        for (auto it = chain.rbegin(); it != chain.rend(); ++it)
            os << *it << " <- ";
        os << category_name(cat.kind) << " (" << mode_symbol(cat.mode) << ")\n";
    } else {
        for (const auto& child : node.children) rows(cat, child, chain, os);
    }
    chain.pop_back();
}

}  // namespace

std::string render_odd_table(const AgOdd& odd) {
    std::ostringstream os;
    os << "ODD " << quote(odd.name) << "\n";
    for (const auto& s : odd.framing.functional_requirements)
        os << "framing requirement: " << quote(s) << "\n";
    for (const auto& s : odd.framing.system_capabilities)
        os << "framing capability: " << quote(s) << "\n";
    for (const auto& s : odd.framing.hara_results)
        os << "framing hara: " << quote(s) << "\n";
    for (const auto& cat : odd.categories) {
        if (cat.children.empty()) continue;
        os << category_name(cat.kind) << " (" << mode_symbol(cat.mode)
           << "), deepest detail first:\n";
        std::vector<std::string> chain;
        for (const auto& child : cat.children) rows(cat, child, chain, os);
    }
    for (const auto& p : odd.processes) {
        os << "process " << quote(p.name) << ":";
        if (p.all_absent()) {
            os << " ---\n";
            continue;
        }
        os << " start";
        for (const auto& t : p.start_tags) os << " " << render_tag(t);
        if (p.trigger) {
            os << " -> ";
            if (const auto* it = std::get_if<InteractionTrigger>(&*p.trigger)) {
                os << "interaction(";
                for (size_t i = 0; i < it->tags.size(); ++i)
                    os << (i ? ", " : "") << render_tag(it->tags[i]);
                os << ")";
            } else if (const auto* rt =
                           std::get_if<RelativeTimeTrigger>(&*p.trigger)) {
                os << "after " << format_number(rt->duration) << " " << rt->unit;
            } else {
                const auto& st = std::get<StateChangeTrigger>(*p.trigger);
                os << "state(" << st.dimension << " " << relation_symbol(st.rel)
                   << " " << format_number(st.value) << ")";
            }
        }
        os << " -> end";
        for (const auto& t : p.end_tags) os << " " << render_tag(t);
        os << "\n";
    }
    return os.str();
}

}  // namespace agodd
