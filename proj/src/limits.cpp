#include "pgc/limits.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace pgc {

namespace {

std::vector<Edge> sorted_union(std::vector<Edge> a, const std::vector<Edge>& b) {
    a.insert(a.end(), b.begin(), b.end());
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
    return a;
}

std::vector<Edge> sorted_difference(const std::vector<Edge>& a, const std::vector<Edge>& b) {
    std::vector<Edge> out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

} // namespace

void validate_symbolic_path(const SymbolicPath& p) {
    if (!p.g.is_quasi_triangulation())
        throw ValidationError("symbolic path: ambient graph is not a quasi triangulation");
    if (static_cast<int>(p.level.size()) != p.g.edge_count() ||
        static_cast<int>(p.coeff.size()) != p.g.edge_count())
        throw ValidationError("symbolic path: array size mismatch");
    bool has_zero_level = false;
    std::vector<Edge> zeros;
    for (int e = 0; e < p.g.edge_count(); ++e) {
        if (p.zero(e)) {
            zeros.push_back(e);
            continue;
        }
        if (*p.level[e] < 0) throw ValidationError("symbolic path: negative level");
        if (*p.level[e] == 0) has_zero_level = true;
        if (p.coeff[e] <= 0) throw ValidationError("symbolic path: nonpositive coefficient");
    }
    if (!has_zero_level) throw ValidationError("symbolic path: no level-zero edge");
    if (!maximal_quasi_recurrent(p.g, zeros).empty())
        throw ValidationError("symbolic path: vanishing arcs contain a quasi efficient cycle");
}

ComparabilityFiltration comparability_filtration(const SymbolicPath& p) {
    validate_symbolic_path(p);
    std::set<int> levels;
    std::vector<Edge> zeros;
    for (int e = 0; e < p.g.edge_count(); ++e) {
        if (p.zero(e)) zeros.push_back(e);
        else levels.insert(*p.level[e]);
    }
    ComparabilityFiltration out;
    for (int l : levels) {
        std::vector<Edge> set = zeros;
        for (int e = 0; e < p.g.edge_count(); ++e)
            if (!p.zero(e) && *p.level[e] >= l) set.push_back(e);
        std::sort(set.begin(), set.end());
        out.sets.push_back(std::move(set));
    }
    if (!zeros.empty()) out.sets.push_back(zeros);
    return out;
}

std::pair<std::vector<Edge>, std::vector<Edge>> filtered_ij(const SymbolicPath& p,
                                                            const std::vector<Edge>& h,
                                                            int base_level) {
    if (!is_quasi_recurrent(p.g, h))
        throw PreconditionError("filtered_ij: subgraph not quasi recurrent");
    if (subgraph_components(p.g, edge_set(p.g, h)).size() != 1)
        throw PreconditionError("filtered_ij: subgraph not connected");
    if (is_simple_cycle(p.g, h))
        throw PreconditionError("filtered_ij: simple cycle (handled by the pinch branch)");
    std::vector<Edge> j;
    for (Edge e : h)
        if (p.zero(e) || *p.level[e] > base_level) j.push_back(e);
    std::sort(j.begin(), j.end());
    return {maximal_quasi_recurrent(p.g, j), j};
}

LimitResult limiting_point(const SymbolicPath& p) {
    validate_symbolic_path(p);
    const Fatgraph& g = p.g;

    RecursionTrace trace;
    std::vector<Edge> d(g.edge_count());
    std::iota(d.begin(), d.end(), 0);
    std::vector<Edge> removed; // accumulated C, kept sorted
    // surviving edges with their comparability value, plus the pinch cycles
    std::vector<std::pair<Edge, int>> kept;

    while (!d.empty()) {
        RecursionStage st;
        st.d_in = d;
        int base = -1;
        for (Edge e : d)
            if (!p.zero(e)) base = (base < 0) ? *p.level[e] : std::min(base, *p.level[e]);
        check_internal(base >= 0, "limiting recursion: working set is entirely zero");
        st.base_level = base;

        for (Edge e : d)
            if (p.zero(e) || *p.level[e] > base) st.j.push_back(e);
        std::sort(st.j.begin(), st.j.end());
        st.i = maximal_quasi_recurrent(g, st.j);
        st.b = sorted_difference(d, st.j);
        st.c = sorted_difference(st.j, st.i);

        for (const auto& comp : subgraph_components(g, edge_set(g, st.i))) {
            if (is_simple_cycle(g, comp)) {
                int lo = -1;
                for (Edge e : comp)
                    if (!p.zero(e)) lo = (lo < 0) ? *p.level[e] : std::min(lo, *p.level[e]);
                check_internal(lo >= 0, "limiting recursion: all-zero pinch cycle");
                std::vector<Edge> slow, fast;
                for (Edge e : comp)
                    (!p.zero(e) && *p.level[e] == lo ? slow : fast).push_back(e);
                st.c = sorted_union(std::move(st.c), fast);
                st.z = sorted_union(std::move(st.z), slow);
                st.z_cycles.push_back(slow);
            } else {
                st.d_out = sorted_union(std::move(st.d_out), comp);
            }
        }

        // stage invariants: the four outputs partition the input
        {
            std::vector<Edge> uni = sorted_union(st.c, st.z);
            uni = sorted_union(std::move(uni), st.b);
            uni = sorted_union(std::move(uni), st.d_out);
            std::size_t total = st.c.size() + st.z.size() + st.b.size() + st.d_out.size();
            check_internal(uni == st.d_in && total == st.d_in.size(),
                           "limiting recursion: stage outputs do not partition the input");
        }
        removed = sorted_union(std::move(removed), st.c);
        // removable edges stay a forest (with at most one marked vertex per
        // tree), and each tree meets the deeper subgraph in at most one point
        check_internal(maximal_quasi_recurrent(g, removed).empty(),
                       "limiting recursion: removable set is not collapsible");
        {
            std::set<Vertex> deep_verts;
            for (Edge e : st.d_out)
                for (int h : g.edge_halves(e)) deep_verts.insert(g.vertex_of(h));
            for (const auto& tree : subgraph_components(g, edge_set(g, removed))) {
                std::set<Vertex> shared;
                for (Edge e : tree)
                    for (int h : g.edge_halves(e))
                        if (deep_verts.count(g.vertex_of(h))) shared.insert(g.vertex_of(h));
                check_internal(shared.size() <= 1,
                               "limiting recursion: removable tree meets the deep part twice");
            }
        }

        for (Edge e : st.b) kept.push_back({e, base});
        for (const auto& cyc : st.z_cycles)
            for (Edge e : cyc) kept.push_back({e, *p.level[e]});

        d = st.d_out;
        trace.stages.push_back(std::move(st));
    }

    // collapse the removed forest
    Fatgraph work = g;
    std::vector<int> edge_map(g.edge_count());
    std::iota(edge_map.begin(), edge_map.end(), 0);
    std::set<Edge> to_remove(removed.begin(), removed.end());
    bool again = true;
    while (again) {
        again = false;
        for (int orig = 0; orig < g.edge_count(); ++orig) {
            if (!to_remove.count(orig) || edge_map[orig] < 0) continue;
            CollapseResult cr = collapse_edge(work, edge_map[orig]);
            for (int o2 = 0; o2 < g.edge_count(); ++o2)
                if (edge_map[o2] >= 0) edge_map[o2] = cr.edge_map[edge_map[o2]];
            work = std::move(cr.graph);
            again = true;
            break;
        }
    }

    // group survivors into levels by comparability value
    std::set<int> values;
    for (auto& [e, v] : kept) values.insert(v);
    std::map<int, int> rank;
    for (int v : values) rank[v] = static_cast<int>(rank.size());
    FilteredScreen fs{work, std::vector<std::vector<Edge>>(values.size())};
    std::vector<std::vector<Rat>> weights(values.size());
    std::sort(kept.begin(), kept.end());
    for (auto& [e, v] : kept) {
        fs.levels[rank[v]].push_back(edge_map[e]);
        weights[rank[v]].push_back(p.coeff[e]);
    }
    for (std::size_t k = 0; k < fs.levels.size(); ++k) {
        std::vector<int> idx(fs.levels[k].size());
        std::iota(idx.begin(), idx.end(), 0);
        std::sort(idx.begin(), idx.end(),
                  [&](int a, int b) { return fs.levels[k][a] < fs.levels[k][b]; });
        std::vector<Edge> lv;
        std::vector<Rat> wv;
        for (int i : idx) {
            lv.push_back(fs.levels[k][i]);
            wv.push_back(weights[k][i]);
        }
        fs.levels[k] = std::move(lv);
        weights[k] = projectivize(wv);
    }
    validate_filtered_screen(fs);
    ScreenPoint pt{fs, std::move(weights)};
    validate_screen_point(pt);
    return LimitResult{std::move(work), std::move(edge_map), std::move(pt), std::move(trace)};
}

std::pair<Fatgraph, std::vector<int>> collapse_to_subfamily(const Fatgraph& g,
                                                            const std::vector<Edge>& eprime) {
    std::set<Edge> keep(eprime.begin(), eprime.end());
    Fatgraph work = g;
    std::vector<int> edge_map(g.edge_count());
    std::iota(edge_map.begin(), edge_map.end(), 0);
    bool again = true;
    while (again) {
        again = false;
        for (int orig = 0; orig < g.edge_count(); ++orig) {
            if (keep.count(orig) || edge_map[orig] < 0) continue;
            CollapseResult cr = collapse_edge(work, edge_map[orig]);
            for (int o2 = 0; o2 < g.edge_count(); ++o2)
                if (edge_map[o2] >= 0) edge_map[o2] = cr.edge_map[edge_map[o2]];
            work = std::move(cr.graph);
            again = true;
            break;
        }
    }
    return {std::move(work), std::move(edge_map)};
}

SymbolicPath construct_path(const PathInput& in, unsigned completion_seed) {
    validate_screen_point(in.pt);
    Completion comp = complete_to_quasi_triangulation(in.g_e, completion_seed);
    SymbolicPath p{comp.graph, {}, {}};
    p.level.assign(comp.graph.edge_count(), std::nullopt);
    p.coeff.assign(comp.graph.edge_count(), Rat(1));
    int n = in.pt.fs.total_level();
    std::set<Edge> eprime(in.eprime_edges.begin(), in.eprime_edges.end());
    auto lv = in.pt.fs.level_of_edges();
    // weights addressed by collapsed-graph edge
    std::vector<Rat> w(in.pt.fs.g.edge_count());
    for (std::size_t k = 0; k < in.pt.fs.levels.size(); ++k)
        for (std::size_t i = 0; i < in.pt.fs.levels[k].size(); ++i)
            w[in.pt.fs.levels[k][i]] = in.pt.weights[k][i];
    for (int e = 0; e < in.g_e.edge_count(); ++e) {
        if (eprime.count(e)) {
            int ce = in.eprime_map[e];
            if (ce < 0) throw PreconditionError("construct_path: sub-family map incomplete");
            p.level[comp.edge_map[e]] = lv[ce];
            p.coeff[comp.edge_map[e]] = w[ce];
        } else {
            p.level[comp.edge_map[e]] = n + 1;
            p.coeff[comp.edge_map[e]] = Rat(1);
        }
    }
    validate_symbolic_path(p);
    return p;
}

RefineResult refine_level(const FilteredScreen& fs, int k, const std::vector<Edge>& a) {
    validate_filtered_screen(fs);
    if (k < 0 || k > fs.total_level()) throw PreconditionError("refine_level: bad level");
    auto lv = fs.level_of_edges();
    for (Edge e : a)
        if (lv[e] != k) throw PreconditionError("refine_level: subset not at the stated level");

    if (a.size() == 1) {
        Edge e = a[0];
        auto [h, hp] = fs.g.edge_halves(e);
        Vertex u = fs.g.vertex_of(h), v = fs.g.vertex_of(hp);
        auto deeper_at = [&](Vertex w) {
            for (int x : fs.g.vertex_halves(w))
                if (lv[fs.g.edge_of(x)] > k) return true;
            return false;
        };
        bool remove_case = (u != v) && !(fs.g.punctured(u) && fs.g.punctured(v)) &&
                           ((!fs.g.punctured(u) && !deeper_at(u)) ||
                            (!fs.g.punctured(v) && !deeper_at(v)));
        if (remove_case) {
            ScreenFace f = face_remove_arc(fs, e);
            return RefineResult{std::move(f.fs), std::move(f.edge_map)};
        }
        bool isolate_case = deeper_at(u) && deeper_at(v) && fs.levels[k].size() > 1;
        if (isolate_case) {
            FilteredScreen out = face_split_level(fs, k, a);
            std::vector<int> id(fs.g.edge_count());
            std::iota(id.begin(), id.end(), 0);
            return RefineResult{std::move(out), std::move(id)};
        }
        throw PreconditionError("refine_level: single edge fits neither case");
    }
    FilteredScreen out = face_split_level(fs, k, a);
    std::vector<int> id(fs.g.edge_count());
    std::iota(id.begin(), id.end(), 0);
    return RefineResult{std::move(out), std::move(id)};
}

SlopeEstimate numeric_slope_oracle(const SymbolicPath& p, const std::vector<Rat>& ts) {
    if (ts.size() < 3) throw PreconditionError("numeric_slope_oracle: need at least 3 samples");
    for (std::size_t i = 0; i + 1 < ts.size(); ++i)
        if (!(ts[i] < ts[i + 1]) || ts[i] <= 1)
            throw PreconditionError("numeric_slope_oracle: samples must be increasing and > 1");
    auto x_at = [&](Edge e, const Rat& t) {
        // coeff * t^(-level), exact
        Rat num = p.coeff[e];
        Rat tt = 1;
        for (int i = 0; i < *p.level[e]; ++i) tt *= t;
        return Rat(num / tt);
    };
    SlopeEstimate out;
    out.level.assign(p.g.edge_count(), std::nullopt);
    std::size_t m = ts.size();
    for (int e = 0; e < p.g.edge_count(); ++e) {
        if (p.zero(e)) continue;
        Rat x1 = x_at(e, ts[m - 2]), x2 = x_at(e, ts[m - 1]);
        double s = -(std::log(x2.get_d()) - std::log(x1.get_d())) /
                   (std::log(ts[m - 1].get_d()) - std::log(ts[m - 2].get_d()));
        double r = std::round(s);
        if (std::abs(s - r) > 0.1) {
            out.conclusive = false;
            continue;
        }
        out.level[e] = static_cast<int>(r);
    }
    return out;
}

} // namespace pgc
