#include "agodd/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "json.hpp"

namespace agodd {

std::string verdict_name(Verdict v) {
    switch (v) {
        case Verdict::verified: return "verified";
        case Verdict::needs_odd_revision: return "needs_odd_revision";
        case Verdict::needs_scenarios: return "needs_scenarios";
    }
    return "?";
}

// ------------------------------------------------------------ violations --

namespace {

Violation make_violation(const Scenario& s, AttrPath path, std::string dimension,
                         BoundaryKind kind, std::string cause,
                         std::string detail) {
    Violation v;
    v.scenario = s.name;
    v.path = std::move(path);
    v.dimension = std::move(dimension);
    v.kind = kind;
    v.cause = std::move(cause);
    v.detail = std::move(detail);
    return v;
}

bool subset_of(const Region1D& a, const Region1D& b) {
    return intersect(a, b) == a;
}

}  // namespace

std::vector<Violation> detect_violations(const AgOdd& odd,
                                         const std::vector<Scenario>& scenarios) {
    std::vector<Violation> out;
    for (const auto& s : scenarios) {
        for (const auto& b : s.bindings) {
            if (b.path.empty() || !category_from_name(b.path[0])) {
                out.push_back(make_violation(
                    s, b.path, "", BoundaryKind::restrictive_hard,
                    "unknown-category",
                    "path " + render_path(b.path) +
                        " is not rooted at a category"));
                continue;
            }
            auto [node, resolved] = resolve_prefix(odd, b.path);
            if (resolved < b.path.size()) {
                Mode edge = node ? node->mode
                                 : odd.category(*category_from_name(b.path[0]))
                                       .mode;
                AttrPath at(b.path.begin(), b.path.begin() + resolved);
                std::string cause = node ? "restrictive-enumeration"
                                         : "unmentioned-attribute";
                std::string detail =
                    "\"" + b.path[resolved] + "\" is not listed under " +
                    render_path(at);
                out.push_back(make_violation(
                    s, b.path, "",
                    edge == Mode::permissive ? BoundaryKind::permissive_open
                                             : BoundaryKind::restrictive_hard,
                    edge == Mode::permissive ? "permissive-extension" : cause,
                    detail));
            }
            if (!b.value) continue;
            const DimensionDecl* dim = binding_dimension(b, odd);
            if (!dim) continue;
            Region1D raw;
            raw.dimension = dim->name;
            raw.numeric = dim->is_numeric();
            switch (b.value->kind) {
                case BindingValue::Kind::quantity:
                    raw.intervals.push_back(
                        {b.value->quantity.value, b.value->quantity.value});
                    break;
                case BindingValue::Kind::range:
                    if (b.value->range.lo <= b.value->range.hi)
                        raw.intervals.push_back(b.value->range);
                    break;
                case BindingValue::Kind::label:
                    raw.labels.push_back(b.value->label);
                    break;
            }
            AttrPath at(b.path.begin(), b.path.begin() + resolved);
            Region1D bound =
                intersect(effective_domain(odd, at, dim->name),
                          odd_region(odd, dim->name));
            if (!subset_of(raw, bound)) {
                std::string cause =
                    raw.numeric ? "numeric-bound" : "value-enumeration";
                out.push_back(make_violation(
                    s, b.path, dim->name, BoundaryKind::restrictive_hard, cause,
                    dim->name + " " + render_region(raw) + " exceeds " +
                        render_region(bound)));
            }
        }
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const Violation& a, const Violation& b) {
                         auto key = [](const Violation& v) {
                             return std::tuple<const std::string&, std::string,
                                               const std::string&,
                                               const std::string&>(
                                 v.scenario, render_path(v.path), v.dimension,
                                 v.cause);
                         };
                         return key(a) < key(b);
                     });
    return out;
}

// -------------------------------------------------------------- coverage --

namespace {

struct DimCells {
    const DimensionDecl* decl = nullptr;
    bool numeric = true;
    int count = 0;
    double lo = 0.0;
    double width = 0.0;

    double center(int i) const { return lo + (i + 0.5) * width; }
    const std::vector<std::string>& labels() const {
        return std::get<std::vector<std::string>>(decl->domain);
    }
};

std::vector<DimCells> build_cells(const AgOdd& odd, int grid) {
    if (grid < 1)
        throw Error("invalid-grid",
                    "grid resolution must be at least 1, got " +
                        std::to_string(grid));
    std::vector<DimCells> out;
    for (const auto& d : odd.dimensions) {
        DimCells cells;
        cells.decl = &d;
        if (const auto* iv = std::get_if<Interval>(&d.domain)) {
            if (!std::isfinite(iv->lo) || !std::isfinite(iv->hi))
                throw Error("unbounded-dimension",
                            "dimension '" + d.name +
                                "' has a non-finite declared range");
            cells.numeric = true;
            cells.count = grid;
            cells.lo = iv->lo;
            cells.width = (iv->hi - iv->lo) / grid;
        } else {
            cells.numeric = false;
            cells.count = static_cast<int>(cells.labels().size());
        }
        out.push_back(cells);
    }
    return out;
}

std::vector<char> region_mask(const DimCells& cells, const Region1D& region) {
    std::vector<char> mask(cells.count, 0);
    for (int i = 0; i < cells.count; ++i) {
        if (cells.numeric)
            mask[i] = region.contains_value(cells.center(i)) ? 1 : 0;
        else
            mask[i] = region.contains_label(cells.labels()[i]) ? 1 : 0;
    }
    return mask;
}

struct Segment {
    int begin = 0;
    int end = 0;  // inclusive cell index
    bool in_odd = false;
    std::vector<char> covered;  // per scenario
};

// Everything the grid pass produces; gaps stay in cell-index space here.
struct GridEval {
    std::vector<DimCells> dims;
    long long total_in_odd = 0;
    long long covered = 0;
    std::vector<long long> per_dim_in_odd;
    std::vector<long long> per_dim_covered;
    std::vector<std::vector<std::pair<int, int>>> gap_boxes;
};

GridEval evaluate_grid(const AgOdd& odd, const std::vector<Scenario>& scenarios,
                       int grid) {
    GridEval eval;
    eval.dims = build_cells(odd, grid);
    size_t D = eval.dims.size();
    size_t S = scenarios.size();

    std::vector<ScenarioRegion> regions;
    regions.reserve(S);
    for (const auto& s : scenarios) regions.push_back(scenario_region(s, odd));

    // Per-dimension masks, then runs of cells with identical signatures.
    std::vector<std::vector<Segment>> segments(D);
    eval.per_dim_in_odd.assign(D, 0);
    eval.per_dim_covered.assign(D, 0);
    for (size_t d = 0; d < D; ++d) {
        const DimCells& cells = eval.dims[d];
        std::vector<char> in_odd =
            region_mask(cells, odd_region(odd, cells.decl->name));
        std::vector<std::vector<char>> cov(S);
        for (size_t s = 0; s < S; ++s)
            cov[s] = region_mask(cells,
                                 regions[s].dimensions.at(cells.decl->name));
        for (int i = 0; i < cells.count; ++i) {
            bool io = in_odd[i];
            bool any = false;
            std::vector<char> sig(S);
            for (size_t s = 0; s < S; ++s) {
                sig[s] = cov[s][i];
                any = any || cov[s][i];
            }
            if (io) {
                ++eval.per_dim_in_odd[d];
                if (any) ++eval.per_dim_covered[d];
            }
            auto& segs = segments[d];
            if (!segs.empty() && segs.back().in_odd == io &&
                segs.back().covered == sig && segs.back().end == i - 1) {
                segs.back().end = i;
            } else {
                Segment seg;
                seg.begin = seg.end = i;
                seg.in_odd = io;
                seg.covered = std::move(sig);
                segments[d].push_back(std::move(seg));
            }
        }
    }

    std::vector<std::pair<int, int>> idx(D);
    std::vector<char> active(S, 1);
    std::function<void(size_t, long long, std::vector<char>)> walk =
        [&](size_t d, long long cells, std::vector<char> act) {
            if (d == D) {
                eval.total_in_odd += cells;
                bool any = std::any_of(act.begin(), act.end(),
                                       [](char c) { return c != 0; });
                if (any)
                    eval.covered += cells;
                else
                    eval.gap_boxes.push_back(idx);
                return;
            }
            for (const Segment& seg : segments[d]) {
                if (!seg.in_odd) continue;
                std::vector<char> next = act;
                for (size_t s = 0; s < S; ++s)
                    next[s] = next[s] && seg.covered[s];
                idx[d] = {seg.begin, seg.end};
                walk(d + 1, cells * (seg.end - seg.begin + 1), next);
            }
        };
    walk(0, 1, active);
    return eval;
}

// Greedy box merging: along each dimension in turn, fuse boxes that agree
// everywhere else and touch. Repeats until stable, so the reported gaps do
// not mirror the traversal order.
void merge_boxes(std::vector<std::vector<std::pair<int, int>>>& boxes) {
    size_t D = boxes.empty() ? 0 : boxes[0].size();
    bool changed = true;
    while (changed) {
        changed = false;
        for (size_t k = 0; k < D; ++k) {
            auto key = [&](const std::vector<std::pair<int, int>>& box) {
                std::vector<std::pair<int, int>> rest;
                for (size_t d = 0; d < D; ++d)
                    if (d != k) rest.push_back(box[d]);
                rest.push_back(box[k]);
                return rest;
            };
            std::sort(boxes.begin(), boxes.end(),
                      [&](const auto& a, const auto& b) {
                          return key(a) < key(b);
                      });
            std::vector<std::vector<std::pair<int, int>>> merged;
            for (auto& box : boxes) {
                bool fused = false;
                if (!merged.empty()) {
                    auto& prev = merged.back();
                    bool same = true;
                    for (size_t d = 0; d < D; ++d)
                        if (d != k && prev[d] != box[d]) same = false;
                    if (same && prev[k].second + 1 == box[k].first) {
                        prev[k].second = box[k].second;
                        fused = true;
                    }
                }
                if (!fused) merged.push_back(box);
            }
            if (merged.size() != boxes.size()) changed = true;
            boxes = std::move(merged);
        }
    }
    std::sort(boxes.begin(), boxes.end());
}

std::vector<GapRegion> boxes_to_gaps(const GridEval& eval,
                                     std::vector<std::vector<std::pair<int, int>>>
                                         boxes) {
    merge_boxes(boxes);
    std::vector<GapRegion> out;
    for (const auto& box : boxes) {
        GapRegion gap;
        for (size_t d = 0; d < box.size(); ++d) {
            const DimCells& cells = eval.dims[d];
            GapExtent extent;
            extent.dimension = cells.decl->name;
            extent.numeric = cells.numeric;
            if (cells.numeric) {
                const auto& domain = std::get<Interval>(cells.decl->domain);
                extent.range.lo = box[d].first == 0
                                      ? domain.lo
                                      : cells.lo + box[d].first * cells.width;
                extent.range.hi = box[d].second == cells.count - 1
                                      ? domain.hi
                                      : cells.lo +
                                            (box[d].second + 1) * cells.width;
            } else {
                const auto& labels = cells.labels();
                for (int i = box[d].first; i <= box[d].second; ++i)
                    extent.labels.push_back(labels[i]);
            }
            gap.extents.push_back(std::move(extent));
        }
        out.push_back(std::move(gap));
    }
    return out;
}

CoverageReport coverage_from_eval(const GridEval& eval, int grid) {
    CoverageReport report;
    report.grid = grid;
    report.overall = eval.total_in_odd == 0
                         ? 1.0
                         : static_cast<double>(eval.covered) /
                               static_cast<double>(eval.total_in_odd);
    for (size_t d = 0; d < eval.dims.size(); ++d) {
        double ratio = eval.per_dim_in_odd[d] == 0
                           ? 1.0
                           : static_cast<double>(eval.per_dim_covered[d]) /
                                 static_cast<double>(eval.per_dim_in_odd[d]);
        report.per_dimension[eval.dims[d].decl->name] = ratio;
    }
    return report;
}

}  // namespace

CoverageReport coverage(const AgOdd& odd, const std::vector<Scenario>& scenarios,
                        int grid) {
    return coverage_from_eval(evaluate_grid(odd, scenarios, grid), grid);
}

std::vector<GapRegion> find_gaps(const AgOdd& odd,
                                 const std::vector<Scenario>& scenarios,
                                 int grid) {
    GridEval eval = evaluate_grid(odd, scenarios, grid);
    return boxes_to_gaps(eval, eval.gap_boxes);
}

IterationReport verify_iteration(const AgOdd& odd,
                                 const std::vector<Scenario>& scenarios,
                                 const VerifyConfig& config) {
    IterationReport report;
    report.iteration = config.iteration;
    for (auto& v : detect_violations(odd, scenarios))
        if (v.kind == BoundaryKind::restrictive_hard)
            report.violations.push_back(std::move(v));
    GridEval eval = evaluate_grid(odd, scenarios, config.grid);
    report.coverage = coverage_from_eval(eval, config.grid);
    report.gaps = boxes_to_gaps(eval, eval.gap_boxes);
    if (!report.violations.empty())
        report.verdict = Verdict::needs_odd_revision;
    else if (report.coverage.overall >= config.coverage_threshold)
        report.verdict = Verdict::verified;
    else
        report.verdict = Verdict::needs_scenarios;
    return report;
}

// ----------------------------------------------------------------- diff --

namespace {

const AttributeNode* child_by_name(const std::vector<AttributeNode>& children,
                                   const std::string& name) {
    for (const auto& c : children)
        if (c.name == name) return &c;
    return nullptr;
}

// Names present on both sides that keep their relative order. Names off
// this subsequence moved; they surface as removal plus re-addition so a
// diff can always be replayed by position.
std::set<std::string> stable_names(const std::vector<AttributeNode>& before,
                                   const std::vector<AttributeNode>& after) {
    std::vector<std::string> a, b;
    for (const auto& n : before)
        if (child_by_name(after, n.name)) a.push_back(n.name);
    for (const auto& n : after)
        if (child_by_name(before, n.name)) b.push_back(n.name);
    size_t n = a.size(), m = b.size();
    std::vector<std::vector<size_t>> lcs(n + 1, std::vector<size_t>(m + 1, 0));
    for (size_t i = n; i-- > 0;)
        for (size_t j = m; j-- > 0;)
            lcs[i][j] = a[i] == b[j]
                            ? lcs[i + 1][j + 1] + 1
                            : std::max(lcs[i + 1][j], lcs[i][j + 1]);
    std::set<std::string> keep;
    for (size_t i = 0, j = 0; i < n && j < m;) {
        if (a[i] == b[j]) {
            keep.insert(a[i]);
            ++i;
            ++j;
        } else if (lcs[i + 1][j] >= lcs[i][j + 1]) {
            ++i;
        } else {
            ++j;
        }
    }
    return keep;
}

void diff_children(const AttrPath& parent,
                   const std::vector<AttributeNode>& before,
                   const std::vector<AttributeNode>& after, OddDiff& out) {
    std::set<std::string> stable = stable_names(before, after);
    for (const auto& b : before)
        if (!stable.count(b.name)) {
            AttrPath path = parent;
            path.push_back(b.name);
            out.removals.push_back({std::move(path)});
        }
    for (size_t i = 0; i < after.size(); ++i) {
        const AttributeNode& a = after[i];
        if (!stable.count(a.name)) {
            out.additions.push_back({parent, i, a});
            continue;
        }
        const AttributeNode* b = child_by_name(before, a.name);
        AttrPath path = parent;
        path.push_back(a.name);
        if (b->mode != a.mode)
            out.mode_changes.push_back({path, b->mode, a.mode});
        if (b->constraints != a.constraints)
            out.constraint_changes.push_back({path, b->constraints, a.constraints});
        if (b->tags != a.tags) out.tag_changes.push_back({path, b->tags, a.tags});
        if (b->iteration != a.iteration)
            out.iteration_changes.push_back({path, b->iteration, a.iteration});
        diff_children(path, b->children, a.children, out);
    }
}

std::vector<AttributeNode>* children_at(AgOdd& odd, const AttrPath& path) {
    if (path.empty()) return nullptr;
    auto kind = category_from_name(path[0]);
    if (!kind) return nullptr;
    std::vector<AttributeNode>* level = &odd.category(*kind).children;
    for (size_t i = 1; i < path.size(); ++i) {
        AttributeNode* node = nullptr;
        for (auto& child : *level)
            if (child.name == path[i]) {
                node = &child;
                break;
            }
        if (!node) return nullptr;
        level = &node->children;
    }
    return level;
}

AttributeNode* node_at(AgOdd& odd, const AttrPath& path) {
    if (path.size() < 2) return nullptr;
    AttrPath parent(path.begin(), path.end() - 1);
    auto* siblings = children_at(odd, parent);
    if (!siblings) return nullptr;
    for (auto& child : *siblings)
        if (child.name == path.back()) return &child;
    return nullptr;
}

}  // namespace

OddDiff diff_odds(const AgOdd& before, const AgOdd& after) {
    OddDiff out;
    if (before.name != after.name)
        out.other_changes.push_back("name: \"" + before.name + "\" -> \"" +
                                    after.name + "\"");
    if (before.dimensions != after.dimensions)
        out.other_changes.push_back("dimension declarations differ");
    if (before.framing != after.framing)
        out.other_changes.push_back("framing limitations differ");
    if (before.processes != after.processes)
        out.other_changes.push_back("process definitions differ");
    for (CategoryKind kind : kAllCategories) {
        const CategoryNode& b = before.category(kind);
        const CategoryNode& a = after.category(kind);
        AttrPath root{category_name(kind)};
        if (b.mode != a.mode) out.mode_changes.push_back({root, b.mode, a.mode});
        diff_children(root, b.children, a.children, out);
    }
    return out;
}

AgOdd apply_diff(const AgOdd& base, const OddDiff& diff) {
    AgOdd out = base;
    for (const auto& removal : diff.removals) {
        if (removal.path.size() < 2) continue;
        AttrPath parent(removal.path.begin(), removal.path.end() - 1);
        if (auto* siblings = children_at(out, parent))
            siblings->erase(
                std::remove_if(siblings->begin(), siblings->end(),
                               [&](const AttributeNode& n) {
                                   return n.name == removal.path.back();
                               }),
                siblings->end());
    }
    std::vector<NodeAddition> additions = diff.additions;
    std::stable_sort(additions.begin(), additions.end(),
                     [](const NodeAddition& a, const NodeAddition& b) {
                         return std::tuple<size_t, AttrPath, size_t>(
                                    a.parent.size(), a.parent, a.index) <
                                std::tuple<size_t, AttrPath, size_t>(
                                    b.parent.size(), b.parent, b.index);
                     });
    for (const auto& addition : additions) {
        if (auto* siblings = children_at(out, addition.parent)) {
            size_t at = std::min(addition.index, siblings->size());
            siblings->insert(siblings->begin() + at, addition.node);
        }
    }
    for (const auto& change : diff.mode_changes) {
        if (change.path.size() == 1) {
            if (auto kind = category_from_name(change.path[0]))
                out.category(*kind).mode = change.to;
        } else if (auto* node = node_at(out, change.path)) {
            node->mode = change.to;
        }
    }
    for (const auto& change : diff.constraint_changes)
        if (auto* node = node_at(out, change.path)) node->constraints = change.to;
    for (const auto& change : diff.tag_changes)
        if (auto* node = node_at(out, change.path)) node->tags = change.to;
    for (const auto& change : diff.iteration_changes)
        if (auto* node = node_at(out, change.path)) node->iteration = change.to;
    return out;
}

// --------------------------------------------------------------- reports --

namespace {

nlohmann::ordered_json violation_json(const Violation& v) {
    nlohmann::ordered_json j;
    j["scenario"] = v.scenario;
    j["path"] = render_path(v.path);
    j["dimension"] = v.dimension;
    j["kind"] = boundary_kind_name(v.kind);
    j["cause"] = v.cause;
    j["detail"] = v.detail;
    return j;
}

nlohmann::ordered_json gap_json(const GapRegion& gap) {
    nlohmann::ordered_json j;
    for (const auto& e : gap.extents) {
        if (e.numeric)
            j[e.dimension] = {e.range.lo, e.range.hi};
        else
            j[e.dimension] = e.labels;
    }
    return j;
}

}  // namespace

std::string report_json(const IterationReport& report, int indent) {
    nlohmann::ordered_json j;
    j["schema"] = "agodd-report/1";
    j["iteration"] = report.iteration;
    j["verdict"] = verdict_name(report.verdict);
    j["violations"] = nlohmann::ordered_json::array();
    for (const auto& v : report.violations)
        j["violations"].push_back(violation_json(v));
    nlohmann::ordered_json cov;
    cov["overall"] = report.coverage.overall;
    cov["grid"] = report.coverage.grid;
    cov["per_dimension"] = nlohmann::ordered_json::object();
    for (const auto& [name, ratio] : report.coverage.per_dimension)
        cov["per_dimension"][name] = ratio;
    j["coverage"] = std::move(cov);
    j["gaps"] = nlohmann::ordered_json::array();
    for (const auto& gap : report.gaps) j["gaps"].push_back(gap_json(gap));
    return j.dump(indent) + "\n";
}

std::string render_gap(const GapRegion& gap) {
    std::string out;
    for (const auto& e : gap.extents) {
        if (!out.empty()) out += ", ";
        if (e.numeric) {
            out += e.dimension + " in [" + format_number(e.range.lo) + ", " +
                   format_number(e.range.hi) + "]";
        } else {
            out += e.dimension + " oneof {";
            for (size_t i = 0; i < e.labels.size(); ++i)
                out += (i ? ", \"" : " \"") + e.labels[i] + "\"";
            out += " }";
        }
    }
    return out;
}

std::string report_text(const IterationReport& report) {
    std::string out = "iteration " + std::to_string(report.iteration) + ": " +
                      verdict_name(report.verdict) + "\n";
    for (const auto& v : report.violations)
        out += "violation: scenario \"" + v.scenario + "\": " +
               render_path(v.path) +
               (v.dimension.empty() ? "" : " [" + v.dimension + "]") + " (" +
               v.cause + "): " + v.detail + "\n";
    out += "coverage: " + format_number(report.coverage.overall) + " (grid " +
           std::to_string(report.coverage.grid) + ")\n";
    for (const auto& [name, ratio] : report.coverage.per_dimension)
        out += "  " + name + ": " + format_number(ratio) + "\n";
    for (const auto& gap : report.gaps) out += "gap: " + render_gap(gap) + "\n";
    return out;
}

}  // namespace agodd
