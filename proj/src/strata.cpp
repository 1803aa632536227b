#include "pgc/strata.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>

namespace pgc {

std::vector<int> StratumGraph::star(int v) const {
    std::vector<int> out;
    for (int e = 0; e < edge_count(); ++e) {
        if (!edges[e].is_node) {
            if (edges[e].u == v) out.push_back(e);
        } else {
            if (edges[e].u == v || edges[e].v == v) out.push_back(e);
        }
    }
    return out;
}

bool StratumGraph::adjacent(int e, int f) const {
    for (int a : ends(e))
        for (int b : ends(f))
            if (a == b) return true;
    return false;
}

void validate_stratum_graph(const StratumGraph& g) {
    if (g.n_comp <= 0) throw ValidationError("stratum graph: no component vertices");
    bool has_p = false;
    for (const auto& e : g.edges) {
        if (e.u < 0 || e.u >= g.n_comp) throw ValidationError("stratum graph: bad endpoint");
        if (e.is_node) {
            if (e.v < 0 || e.v >= g.n_comp) throw ValidationError("stratum graph: bad endpoint");
        } else {
            has_p = true;
        }
    }
    if (!has_p) throw ValidationError("stratum graph: no puncture edge");
    // connectivity over component vertices
    std::vector<int> uf(g.n_comp);
    std::iota(uf.begin(), uf.end(), 0);
    std::function<int(int)> find = [&](int x) { return uf[x] == x ? x : uf[x] = find(uf[x]); };
    for (const auto& e : g.edges)
        if (e.is_node) uf[find(e.u)] = find(e.v);
    for (int v = 0; v < g.n_comp; ++v)
        if (find(v) != find(0)) throw ValidationError("stratum graph: disconnected");
}

NestDiagnostics validate_nest(const StratumGraph& g, const Nest& f) {
    NestDiagnostics d;
    if (static_cast<int>(f.level.size()) != g.edge_count()) {
        d.ok = false;
        d.failed_condition = 0;
        d.detail = "level count mismatch";
        return d;
    }
    for (int l : f.level)
        if (l < 0) {
            d.ok = false;
            d.detail = "negative level";
            return d;
        }
    bool zero_p = false;
    for (int e = 0; e < g.edge_count(); ++e)
        if (!g.is_node(e) && f.level[e] == 0) zero_p = true;
    if (!zero_p) {
        d.ok = false;
        d.failed_condition = 1;
        d.detail = "no puncture edge at level zero";
        return d;
    }
    for (int e = 0; e < g.edge_count(); ++e)
        if (g.is_node(e) && f.level[e] == 0) {
            d.ok = false;
            d.failed_condition = 2;
            d.detail = "node edge at level zero";
            return d;
        }
    for (int e = 0; e < g.edge_count(); ++e) {
        if (!g.is_node(e)) continue;
        bool lower = false;
        for (int v : g.ends(e))
            for (int x : g.star(v))
                if (x != e && f.level[x] < f.level[e]) lower = true;
        if (!lower) {
            d.ok = false;
            d.failed_condition = 3;
            d.detail = "node edge " + std::to_string(e) + " has no lower neighbor";
            return d;
        }
    }
    int mx = *std::max_element(f.level.begin(), f.level.end());
    std::vector<char> seen(mx + 1, 0);
    for (int l : f.level) seen[l] = 1;
    for (char c : seen)
        if (!c) {
            d.ok = false;
            d.failed_condition = 4;
            d.detail = "levels skip a value";
            return d;
        }
    return d;
}

Nest canonical_nest(const StratumGraph& g) {
    validate_stratum_graph(g);
    // BFS over edges: puncture edges touch a marked vertex directly; crossing
    // a component vertex costs one.
    const int INF = 1 << 29;
    Nest f{std::vector<int>(g.edge_count(), INF)};
    std::vector<int> frontier;
    for (int e = 0; e < g.edge_count(); ++e)
        if (!g.is_node(e)) {
            f.level[e] = 0;
            frontier.push_back(e);
        }
    while (!frontier.empty()) {
        std::vector<int> next;
        for (int e : frontier) {
            for (int v : g.ends(e)) {
                for (int x : g.star(v)) {
                    if (f.level[x] > f.level[e] + 1) {
                        f.level[x] = f.level[e] + 1;
                        next.push_back(x);
                    }
                }
            }
        }
        frontier = std::move(next);
    }
    for (int l : f.level) check_internal(l < INF, "canonical_nest: unreachable edge");
    auto d = validate_nest(g, f);
    check_internal(d.ok, "canonical_nest: result is not a nest");
    return f;
}

Nest floor_nest(const StratumGraph& g, const Nest& f) {
    (void)g;
    std::set<int> values(f.level.begin(), f.level.end());
    std::map<int, int> rank;
    for (int v : values) rank[v] = static_cast<int>(rank.size());
    Nest out{f.level};
    for (int& l : out.level) l = rank[l];
    return out;
}

Nest lower_levels(const Nest& f, const std::vector<int>& m) {
    Nest out{f.level};
    for (int e : m) out.level[e] -= 1;
    return out;
}

Nest insert_isolating_levels(const StratumGraph& g, const Nest& f, const std::vector<int>& m) {
    for (int e : m)
        if (f.level[e] == 0) throw PreconditionError("insert_isolating_levels: set meets level zero");
    Nest doubled{f.level};
    for (int& l : doubled.level) l *= 2;
    std::set<int> ms(m.begin(), m.end());
    for (int e : ms) doubled.level[e] -= 1;
    Nest out = floor_nest(g, doubled);
    auto d = validate_nest(g, out);
    check_internal(d.ok, "insert_isolating_levels: result is not a nest");
    return out;
}

std::vector<int> obstruction_set(const StratumGraph& g, const Nest& f, const std::vector<int>& m) {
    auto dnest = validate_nest(g, f);
    if (!dnest.ok) throw PreconditionError("obstruction_set: not a nest");
    std::set<int> ms(m.begin(), m.end());
    for (int e : ms)
        if (f.level[e] == 0) throw PreconditionError("obstruction_set: set meets level zero");
    Nest fm = lower_levels(f, m);
    // direct definition: node edges with no strictly lower neighbor after
    std::vector<int> direct;
    for (int e = 0; e < g.edge_count(); ++e) {
        if (!g.is_node(e)) continue;
        bool lower = false;
        for (int v : g.ends(e))
            for (int x : g.star(v))
                if (x != e && fm.level[x] < fm.level[e]) lower = true;
        if (!lower) direct.push_back(e);
    }
    // local characterization: for n in M, look at the least levels around
    // each endpoint before lowering
    auto min_level = [&](int v) {
        int lo = 1 << 29;
        for (int x : g.star(v)) lo = std::min(lo, f.level[x]);
        return lo;
    };
    auto cond_at = [&](int n, int v) {
        // some x of least level at v, outside M, with f(x)+1 = f(n), and all
        // of M's edges at v sitting at level >= f(n)
        bool witness = false;
        for (int x : g.star(v)) {
            if (x == n || ms.count(x)) continue;
            if (f.level[x] == min_level(v) && f.level[x] + 1 == f.level[n]) witness = true;
        }
        if (!witness) return false;
        for (int x : g.star(v))
            if (x != n && ms.count(x) && f.level[x] < f.level[n]) return false;
        return true;
    };
    std::vector<int> charact;
    for (int e = 0; e < g.edge_count(); ++e) {
        if (!g.is_node(e) || !ms.count(e)) continue;
        std::vector<int> vs = g.ends(e);
        std::sort(vs.begin(), vs.end());
        vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
        bool case1 = true;
        for (int v : vs)
            if (!cond_at(e, v)) case1 = false;
        bool case2 = false;
        for (int v1 : vs) {
            if (!cond_at(e, v1)) continue;
            for (int v2 : vs)
                if (f.level[e] == min_level(v2)) case2 = true;
        }
        if (case1 || case2) charact.push_back(e);
    }
    check_internal(direct == charact,
                   "obstruction_set: definition and characterization disagree");
    return direct;
}

StratumCollapse collapse_stratum_edges(const StratumGraph& g, const std::vector<int>& edges) {
    std::set<int> dead(edges.begin(), edges.end());
    for (int e : dead)
        if (!g.is_node(e)) throw PreconditionError("collapse_stratum_edges: puncture edge");
    std::vector<int> uf(g.n_comp);
    std::iota(uf.begin(), uf.end(), 0);
    std::function<int(int)> find = [&](int x) { return uf[x] == x ? x : uf[x] = find(uf[x]); };
    for (int e : dead) uf[find(g.edges[e].u)] = find(g.edges[e].v);
    std::map<int, int> newv;
    StratumCollapse out;
    out.vertex_map.assign(g.n_comp, -1);
    for (int v = 0; v < g.n_comp; ++v) {
        int r = find(v);
        if (!newv.count(r)) newv[r] = static_cast<int>(newv.size());
        out.vertex_map[v] = newv[r];
    }
    out.graph.n_comp = static_cast<int>(newv.size());
    out.edge_map.assign(g.edge_count(), -1);
    for (int e = 0; e < g.edge_count(); ++e) {
        if (dead.count(e)) continue;
        StratumGraph::SEdge se = g.edges[e];
        se.u = out.vertex_map[se.u];
        if (se.is_node) se.v = out.vertex_map[se.v];
        out.edge_map[e] = static_cast<int>(out.graph.edges.size());
        out.graph.edges.push_back(se);
    }
    validate_stratum_graph(out.graph);
    return out;
}

DecreaseResult decrease_level(const StratumGraph& g, const Nest& f, const std::vector<int>& m) {
    std::vector<int> c = obstruction_set(g, f, m);
    Nest fm = lower_levels(f, m);
    StratumCollapse sc = collapse_stratum_edges(g, c);
    Nest restricted{std::vector<int>(sc.graph.edge_count(), 0)};
    for (int e = 0; e < g.edge_count(); ++e)
        if (sc.edge_map[e] >= 0) restricted.level[sc.edge_map[e]] = fm.level[e];
    Nest out = floor_nest(sc.graph, restricted);
    auto d = validate_nest(sc.graph, out);
    check_internal(d.ok, "decrease_level: result is not a nest");
    return DecreaseResult{std::move(sc.graph), std::move(out), std::move(sc.edge_map),
                          std::move(c)};
}

std::vector<int> maximal_free_subset(const StratumGraph& g, const Nest& f,
                                     const std::vector<int>& m) {
    // sets with empty obstruction are closed under union, so discarding the
    // obstructed edges of the current candidate converges to the maximum
    std::vector<int> s = m;
    std::sort(s.begin(), s.end());
    for (;;) {
        if (s.empty()) return s;
        std::vector<int> c = obstruction_set(g, f, s);
        if (c.empty()) return s;
        std::vector<int> next;
        std::set_difference(s.begin(), s.end(), c.begin(), c.end(), std::back_inserter(next));
        s = std::move(next);
    }
}

std::vector<int> excess_edges(const StratumGraph& g, const Nest& f) {
    Nest fs = canonical_nest(g);
    std::vector<int> out;
    for (int e = 0; e < g.edge_count(); ++e)
        if (f.level[e] > fs.level[e]) out.push_back(e);
    return out;
}

std::vector<Nest> mring_flow(const StratumGraph& g, const Nest& f) {
    auto d = validate_nest(g, f);
    if (!d.ok) throw PreconditionError("mring_flow: not a nest");
    std::vector<Nest> seq{f};
    Nest cur = f;
    int total = 0;
    for (int& l : cur.level) total += l;
    int cap = static_cast<int>(cur.level.size()) * (total + 2) + 8;
    for (int it = 0; it < cap; ++it) {
        std::vector<int> excess = excess_edges(g, cur);
        if (excess.empty()) return seq;
        std::vector<int> free = maximal_free_subset(g, cur, excess);
        check_internal(!free.empty(), "mring_flow: stuck above the canonical nest");
        cur = floor_nest(g, lower_levels(cur, free));
        auto dd = validate_nest(g, cur);
        check_internal(dd.ok, "mring_flow: left the nest space");
        seq.push_back(cur);
    }
    throw InternalInvariantError("mring_flow: did not terminate");
}

void validate_nest_cell(const StratumGraph& g, const NestCell& c) {
    auto d = validate_nest(g, c.nest);
    if (!d.ok) throw ValidationError("nest cell: not a nest (" + d.detail + ")");
    int mx = *std::max_element(c.nest.level.begin(), c.nest.level.end());
    if (static_cast<int>(c.classes.size()) != mx + 1 || c.weights.size() != c.classes.size())
        throw ValidationError("nest cell: class count mismatch");
    for (int k = 0; k <= mx; ++k) {
        if (c.classes[k].size() != c.weights[k].size())
            throw ValidationError("nest cell: weight count mismatch");
        Rat s = 0;
        for (std::size_t i = 0; i < c.classes[k].size(); ++i) {
            if (c.nest.level[c.classes[k][i]] != k)
                throw ValidationError("nest cell: class member at the wrong level");
            if (c.weights[k][i] <= 0) throw ValidationError("nest cell: nonpositive weight");
            s += c.weights[k][i];
        }
        if (s != 1) throw ValidationError("nest cell: class weights do not sum to one");
    }
}

std::vector<NestFace> nest_faces(const StratumGraph& g, const Nest& f) {
    auto d = validate_nest(g, f);
    if (!d.ok) throw PreconditionError("nest_faces: not a nest");
    std::vector<NestFace> out;
    int mx = *std::max_element(f.level.begin(), f.level.end());
    for (int k = 0; k + 1 <= mx; ++k) {
        std::vector<int> m;
        for (int e = 0; e < g.edge_count(); ++e)
            if (f.level[e] == k + 1) m.push_back(e);
        if (obstruction_set(g, f, m).empty()) {
            NestFace nf;
            nf.cross_stratum = false;
            nf.nest = floor_nest(g, lower_levels(f, m));
            nf.level = k + 1;
            auto dd = validate_nest(g, nf.nest);
            check_internal(dd.ok, "nest_faces: coalesced face is not a nest");
            out.push_back(std::move(nf));
        }
    }
    for (int k = 1; k <= mx; ++k) {
        std::vector<int> m;
        for (int e = 0; e < g.edge_count(); ++e)
            if (f.level[e] == k) m.push_back(e);
        std::vector<int> c = obstruction_set(g, f, m);
        if (c == m && !m.empty()) {
            NestFace nf;
            nf.cross_stratum = true;
            nf.level = k;
            nf.lower = decrease_level(g, f, m);
            out.push_back(std::move(nf));
        }
    }
    return out;
}

bool is_collapsable_set(const StratumGraph& g, const Nest& f, const std::vector<int>& m) {
    std::vector<int> ms = m;
    std::sort(ms.begin(), ms.end());
    std::vector<int> c = obstruction_set(g, f, ms);
    return c == ms;
}

} // namespace pgc
