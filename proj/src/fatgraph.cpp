#include "pgc/fatgraph.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace pgc {

namespace {

std::vector<std::vector<int>> orbits_sorted(const std::vector<int>& perm) {
    int n = static_cast<int>(perm.size());
    std::vector<char> seen(n, 0);
    std::vector<std::vector<int>> out;
    for (int h = 0; h < n; ++h) {
        if (seen[h]) continue;
        std::vector<int> cyc;
        int x = h;
        do {
            seen[x] = 1;
            cyc.push_back(x);
            x = perm[x];
        } while (x != h);
        out.push_back(std::move(cyc));
    }
    return out; // ordered by least element since h ascends
}

} // namespace

Fatgraph::Fatgraph(std::vector<int> pair, std::vector<int> rot, std::vector<char> punctured_half)
    : pair_(std::move(pair)), rot_(std::move(rot)), punct_(std::move(punctured_half)) {
    int n = static_cast<int>(pair_.size());
    if (n % 2 != 0) throw ValidationError("fatgraph: odd number of half-edges");
    if (static_cast<int>(rot_.size()) != n || static_cast<int>(punct_.size()) != n)
        throw ValidationError("fatgraph: array size mismatch");
    std::vector<char> hit(n, 0);
    for (int h = 0; h < n; ++h) {
        if (pair_[h] < 0 || pair_[h] >= n || rot_[h] < 0 || rot_[h] >= n)
            throw ValidationError("fatgraph: half-edge index out of range");
        if (pair_[h] == h) throw ValidationError("fatgraph: pairing has a fixed point");
        if (pair_[pair_[h]] != h) throw ValidationError("fatgraph: pairing is not an involution");
        hit[rot_[h]]++;
    }
    for (int h = 0; h < n; ++h)
        if (hit[h] != 1) throw ValidationError("fatgraph: rotation is not a bijection");
    build_derived();
    for (const auto& cyc : vertex_cycles_) {
        for (int h : cyc)
            if (punct_[h] != punct_[cyc[0]])
                throw ValidationError("fatgraph: puncture mark not uniform on a vertex");
    }
}

Fatgraph Fatgraph::from_cycles(const std::vector<std::vector<int>>& rotation_cycles,
                               const std::vector<std::array<int, 2>>& pairs,
                               const std::vector<int>& punctured_vertices) {
    int n = 0;
    for (const auto& c : rotation_cycles) n += static_cast<int>(c.size());
    std::vector<int> pr(n, -1), rt(n, -1);
    std::vector<char> punct(n, 0);
    std::set<int> pv(punctured_vertices.begin(), punctured_vertices.end());
    for (int vi = 0; vi < static_cast<int>(rotation_cycles.size()); ++vi) {
        const auto& c = rotation_cycles[vi];
        if (c.empty()) throw ValidationError("fatgraph: empty rotation cycle");
        for (std::size_t i = 0; i < c.size(); ++i) {
            int h = c[i];
            if (h < 0 || h >= n || rt[h] != -1)
                throw ValidationError("fatgraph: bad rotation cycle data");
            rt[h] = c[(i + 1) % c.size()];
            if (pv.count(vi)) punct[h] = 1;
        }
    }
    for (const auto& p : pairs) {
        if (p[0] < 0 || p[0] >= n || p[1] < 0 || p[1] >= n || p[0] == p[1])
            throw ValidationError("fatgraph: bad pairing data");
        if (pr[p[0]] != -1 || pr[p[1]] != -1) throw ValidationError("fatgraph: half-edge paired twice");
        pr[p[0]] = p[1];
        pr[p[1]] = p[0];
    }
    for (int h = 0; h < n; ++h)
        if (pr[h] == -1 || rt[h] == -1) throw ValidationError("fatgraph: incomplete data");
    return Fatgraph(std::move(pr), std::move(rt), std::move(punct));
}

void Fatgraph::build_derived() {
    int n = half_edges();
    rot_prev_.assign(n, 0);
    for (int h = 0; h < n; ++h) rot_prev_[rot_[h]] = h;

    vertex_cycles_ = orbits_sorted(rot_);
    vertex_of_.assign(n, 0);
    for (int v = 0; v < static_cast<int>(vertex_cycles_.size()); ++v)
        for (int h : vertex_cycles_[v]) vertex_of_[h] = v;

    edge_rep_.clear();
    edge_of_.assign(n, -1);
    for (int h = 0; h < n; ++h) {
        if (edge_of_[h] != -1) continue;
        int e = static_cast<int>(edge_rep_.size());
        edge_rep_.push_back(h);
        edge_of_[h] = e;
        edge_of_[pair_[h]] = e;
    }

    std::vector<int> fn(n);
    for (int h = 0; h < n; ++h) fn[h] = rot_[pair_[h]];
    faces_ = orbits_sorted(fn);
    face_of_.assign(n, 0);
    for (int f = 0; f < static_cast<int>(faces_.size()); ++f)
        for (int h : faces_[f]) face_of_[h] = f;
}

int Fatgraph::punctured_vertex_count() const {
    int k = 0;
    for (int v = 0; v < vertex_count(); ++v)
        if (punctured(v)) ++k;
    return k;
}

bool Fatgraph::connected() const {
    if (half_edges() == 0) return true;
    std::vector<char> seen(half_edges(), 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int cnt = 0;
    while (!stack.empty()) {
        int h = stack.back();
        stack.pop_back();
        ++cnt;
        for (int x : {rot_[h], pair_[h]}) {
            if (!seen[x]) {
                seen[x] = 1;
                stack.push_back(x);
            }
        }
    }
    return cnt == half_edges();
}

int Fatgraph::euler_characteristic() const {
    return (vertex_count() - punctured_vertex_count()) - edge_count();
}

SurfaceType Fatgraph::surface_type() const {
    if (!connected()) throw PreconditionError("surface_type: graph is disconnected");
    SurfaceType st;
    st.punctures = static_cast<int>(faces_.size()) + punctured_vertex_count();
    st.euler = euler_characteristic();
    int twice_genus = 2 - st.punctures - st.euler;
    check_internal(twice_genus % 2 == 0 && twice_genus >= 0, "surface_type: inconsistent genus");
    st.genus = twice_genus / 2;
    return st;
}

bool Fatgraph::is_qcd_dual() const {
    for (int v = 0; v < vertex_count(); ++v)
        if (valence(v) <= 2 && !punctured(v)) return false;
    return true;
}

bool Fatgraph::is_quasi_triangulation() const {
    for (int v = 0; v < vertex_count(); ++v) {
        bool ok = (valence(v) == 3 && !punctured(v)) || (valence(v) == 1 && punctured(v));
        if (!ok) return false;
    }
    return true;
}

Fatgraph Fatgraph::relabel(const std::vector<int>& perm) const {
    int n = half_edges();
    if (static_cast<int>(perm.size()) != n) throw PreconditionError("relabel: size mismatch");
    std::vector<int> pr(n), rt(n);
    std::vector<char> pu(n);
    for (int h = 0; h < n; ++h) {
        pr[perm[h]] = perm[pair_[h]];
        rt[perm[h]] = perm[rot_[h]];
        pu[perm[h]] = punct_[h];
    }
    return Fatgraph(std::move(pr), std::move(rt), std::move(pu));
}

CollapseResult collapse_edge(const Fatgraph& g, Edge e) {
    auto [h, hp] = g.edge_halves(e);
    Vertex u = g.vertex_of(h), v = g.vertex_of(hp);
    if (u == v) throw PreconditionError("collapse_edge: loop edge");
    if (g.punctured(u) && g.punctured(v))
        throw PreconditionError("collapse_edge: both endpoints punctured");

    int n = g.half_edges();
    std::vector<int> half_map(n, -1);
    int m = 0;
    for (int x = 0; x < n; ++x)
        if (x != h && x != hp) half_map[x] = m++;

    std::vector<int> pr(m), rt(m);
    std::vector<char> pu(m, 0);
    bool merged_punct = g.punctured(u) || g.punctured(v);
    // Rotation: skip the dead halves; crossing one jumps into the other
    // endpoint's cycle, splicing the two cyclic orders.
    auto next_alive = [&](int x) {
        int y = g.rot(x);
        while (y == h || y == hp) y = g.rot(y == h ? hp : h); // jump across the collapsed edge
        return y;
    };
    for (int x = 0; x < n; ++x) {
        if (half_map[x] < 0) continue;
        pr[half_map[x]] = half_map[g.pair(x)];
        int y = g.rot(x);
        if (y == h) y = g.rot(hp);
        else if (y == hp) y = g.rot(h);
        // valence-1 endpoints: rot fixed points on dead halves need one more hop
        while (y == h || y == hp) y = (y == h) ? g.rot(hp) : g.rot(h);
        rt[half_map[x]] = half_map[y];
        bool at_merged = (g.vertex_of(x) == u || g.vertex_of(x) == v);
        pu[half_map[x]] = at_merged ? static_cast<char>(merged_punct) : static_cast<char>(g.punctured_at(x));
        (void)next_alive;
    }
    Fatgraph out(std::move(pr), std::move(rt), std::move(pu));
    std::vector<int> edge_map(g.edge_count(), -1);
    for (int ee = 0; ee < g.edge_count(); ++ee) {
        if (ee == e) continue;
        edge_map[ee] = out.edge_of(half_map[g.edge_halves(ee)[0]]);
    }
    return CollapseResult{std::move(out), std::move(edge_map), std::move(half_map)};
}

namespace {

// Deterministic traversal labeling from a start half-edge: labels are handed
// out in discovery order, neighbors visited as (rot, pair). The encoding
// lists (rot, pair, mark) per canonical label; rigidity makes equal encodings
// correspond exactly to isomorphisms.
std::vector<int> encode_from(const Fatgraph& g, int start, std::vector<int>& label) {
    int n = g.half_edges();
    label.assign(n, -1);
    std::vector<int> order;
    order.reserve(n);
    label[start] = 0;
    order.push_back(start);
    for (std::size_t i = 0; i < order.size(); ++i) {
        int x = order[i];
        for (int y : {g.rot(x), g.pair(x)}) {
            if (label[y] == -1) {
                label[y] = static_cast<int>(order.size());
                order.push_back(y);
            }
        }
    }
    std::vector<int> enc;
    enc.reserve(3 * n);
    for (int x : order) {
        enc.push_back(label[g.rot(x)]);
        enc.push_back(label[g.pair(x)]);
        enc.push_back(g.punctured_at(x) ? 1 : 0);
    }
    return enc;
}

} // namespace

CanonicalForm canonical_form(const Fatgraph& g) {
    if (!g.connected()) throw PreconditionError("canonical_form: graph is disconnected");
    CanonicalForm best;
    long multiplicity = 0;
    std::vector<int> label;
    for (int h = 0; h < g.half_edges(); ++h) {
        std::vector<int> enc = encode_from(g, h, label);
        if (best.encoding.empty() || enc < best.encoding) {
            best.encoding = std::move(enc);
            best.relabel = label;
            multiplicity = 1;
        } else if (enc == best.encoding) {
            ++multiplicity;
        }
    }
    best.automorphisms = multiplicity;
    return best;
}

std::vector<std::vector<int>> minimal_relabelings(const Fatgraph& g) {
    CanonicalForm cf = canonical_form(g);
    std::vector<std::vector<int>> out;
    std::vector<int> label;
    for (int h = 0; h < g.half_edges(); ++h) {
        std::vector<int> enc = encode_from(g, h, label);
        if (enc == cf.encoding) out.push_back(label);
    }
    return out;
}

std::vector<int> canonical_edge_order(const Fatgraph& g, const CanonicalForm& cf) {
    int ne = g.edge_count();
    std::vector<std::pair<int, int>> keyed(ne);
    for (int e = 0; e < ne; ++e) {
        auto [a, b] = g.edge_halves(e);
        keyed[e] = {std::min(cf.relabel[a], cf.relabel[b]), e};
    }
    std::sort(keyed.begin(), keyed.end());
    std::vector<int> rank(ne);
    for (int i = 0; i < ne; ++i) rank[keyed[i].second] = i;
    return rank;
}

std::vector<char> edge_set(const Fatgraph& g, const std::vector<Edge>& edges) {
    std::vector<char> in(g.edge_count(), 0);
    for (Edge e : edges) {
        if (e < 0 || e >= g.edge_count()) throw PreconditionError("edge subset out of range");
        in[e] = 1;
    }
    return in;
}

int subgraph_valence(const Fatgraph& g, const std::vector<char>& in, Vertex v) {
    int k = 0;
    for (int h : g.vertex_halves(v))
        if (in[g.edge_of(h)]) ++k;
    return k;
}

std::vector<SubgraphFace> subgraph_faces_within(const Fatgraph& g,
                                                const std::vector<char>& ambient,
                                                const std::vector<char>& in) {
    int n = g.half_edges();
    auto amb_half = [&](int h) { return ambient[g.edge_of(h)] != 0; };
    auto in_half = [&](int h) { return in[g.edge_of(h)] != 0; };
    for (int e = 0; e < g.edge_count(); ++e)
        if (in[e] && !ambient[e]) throw PreconditionError("subgraph_faces_within: in not in ambient");
    std::vector<char> seen(n, 0);
    std::vector<SubgraphFace> out;
    for (int h = 0; h < n; ++h) {
        if (!in_half(h) || seen[h]) continue;
        SubgraphFace f;
        int x = h;
        do {
            seen[x] = 1;
            f.walk.push_back(x);
            // corner at the far endpoint: ambient stubs between pair(x) and
            // the next A-half counterclockwise
            std::vector<int> stubs;
            int y = g.rot(g.pair(x));
            while (!in_half(y)) {
                if (amb_half(y)) stubs.push_back(y);
                y = g.rot(y);
            }
            f.stubs.push_back(std::move(stubs));
            x = y; // the subgraph face successor
        } while (x != h);
        out.push_back(std::move(f));
    }
    return out;
}

std::vector<SubgraphFace> subgraph_faces(const Fatgraph& g, const std::vector<char>& in) {
    std::vector<char> all(g.edge_count(), 1);
    return subgraph_faces_within(g, all, in);
}

Extraction extract_subgraph(const Fatgraph& g, const std::vector<Edge>& edges) {
    auto in = edge_set(g, edges);
    auto in_half = [&](int h) { return in[g.edge_of(h)] != 0; };
    int n = g.half_edges();
    std::vector<int> half_map(n, -1);
    int m = 0;
    for (int h = 0; h < n; ++h)
        if (in_half(h)) half_map[h] = m++;
    std::vector<int> pr(m), rt(m);
    std::vector<char> pu(m);
    for (int h = 0; h < n; ++h) {
        if (half_map[h] < 0) continue;
        pr[half_map[h]] = half_map[g.pair(h)];
        int y = g.rot(h);
        while (!in_half(y)) y = g.rot(y);
        rt[half_map[h]] = half_map[y];
        pu[half_map[h]] = g.punctured_at(h);
    }
    Extraction out{Fatgraph(std::move(pr), std::move(rt), std::move(pu)), {}, std::move(half_map)};
    out.edge_map.assign(g.edge_count(), -1);
    for (int e = 0; e < g.edge_count(); ++e)
        if (in[e]) out.edge_map[e] = out.graph.edge_of(out.half_map[g.edge_halves(e)[0]]);
    return out;
}

std::vector<std::vector<Edge>> subgraph_components(const Fatgraph& g, const std::vector<char>& in) {
    int ne = g.edge_count();
    std::vector<int> comp(ne, -1);
    std::vector<std::vector<Edge>> out;
    for (int e = 0; e < ne; ++e) {
        if (!in[e] || comp[e] != -1) continue;
        int c = static_cast<int>(out.size());
        std::vector<Edge> edges;
        std::vector<Edge> stack{e};
        comp[e] = c;
        while (!stack.empty()) {
            Edge cur = stack.back();
            stack.pop_back();
            edges.push_back(cur);
            for (int h : g.edge_halves(cur)) {
                for (int x : g.vertex_halves(g.vertex_of(h))) {
                    Edge f = g.edge_of(x);
                    if (in[f] && comp[f] == -1) {
                        comp[f] = c;
                        stack.push_back(f);
                    }
                }
            }
        }
        std::sort(edges.begin(), edges.end());
        out.push_back(std::move(edges));
    }
    return out;
}

bool is_simple_cycle(const Fatgraph& g, const std::vector<Edge>& edges) {
    if (edges.empty()) return false;
    auto in = edge_set(g, edges);
    if (subgraph_components(g, in).size() != 1) return false;
    std::set<Vertex> verts;
    for (Edge e : edges)
        for (int h : g.edge_halves(e)) verts.insert(g.vertex_of(h));
    for (Vertex v : verts) {
        if (g.punctured(v)) return false;
        if (subgraph_valence(g, in, v) != 2) return false;
    }
    return true;
}

bool is_quasi_efficient_walk(const Fatgraph& g, const std::vector<HalfEdge>& walk) {
    if (walk.empty()) return false;
    std::size_t k = walk.size();
    for (std::size_t i = 0; i < k; ++i) {
        int d = walk[i], next = walk[(i + 1) % k];
        // walk[i] is traversed away from vertex_of(walk[i]); the next half
        // must start where this one lands
        if (g.vertex_of(next) != g.vertex_of(g.pair(d))) return false;
        if (next == g.pair(d) && !g.punctured_at(next)) return false;
    }
    return true;
}

namespace {

std::vector<HalfEdge> canonical_cycle(const Fatgraph& g, const std::vector<HalfEdge>& w) {
    // least representative over rotations of the walk and of its reversal
    auto best_rotation = [](const std::vector<int>& v) {
        std::vector<int> best = v;
        std::vector<int> cur = v;
        for (std::size_t i = 1; i < v.size(); ++i) {
            std::rotate(cur.begin(), cur.begin() + 1, cur.end());
            if (cur < best) best = cur;
        }
        return best;
    };
    std::vector<int> rev;
    for (auto it = w.rbegin(); it != w.rend(); ++it) rev.push_back(g.pair(*it));
    std::vector<int> a = best_rotation(w), b = best_rotation(rev);
    return a < b ? a : b;
}

} // namespace

std::vector<std::vector<HalfEdge>> quasi_efficient_cycles(const Fatgraph& g,
                                                          const std::vector<Edge>& edges,
                                                          std::size_t cap) {
    auto in = edge_set(g, edges);
    auto in_half = [&](int h) { return in[g.edge_of(h)] != 0; };
    std::set<std::vector<int>> found;
    std::size_t nodes = 0;

    std::vector<int> path;
    std::vector<char> used(g.half_edges(), 0);

    auto successors = [&](int d, std::vector<int>& out) {
        out.clear();
        Vertex w = g.vertex_of(g.pair(d));
        for (int x : g.vertex_halves(w)) {
            if (!in_half(x)) continue;
            if (x == g.pair(d) && !g.punctured_at(x)) continue;
            out.push_back(x);
        }
    };

    // DFS over directed half-edges without repetition; rotation duplicates are
    // suppressed by forcing the start to be the minimum of the walk.
    std::vector<int> succ;
    auto dfs = [&](auto&& self, int start, int d) -> void {
        if (++nodes > cap * 64) throw CapExceeded("quasi_efficient_cycles: search cap exceeded");
        successors(d, succ);
        std::vector<int> local = succ;
        for (int x : local) {
            if (x == start) {
                if (is_quasi_efficient_walk(g, path)) {
                    found.insert(canonical_cycle(g, path));
                    if (found.size() > cap) throw CapExceeded("quasi_efficient_cycles: too many cycles");
                }
                continue;
            }
            if (x < start || used[x]) continue;
            used[x] = 1;
            path.push_back(x);
            self(self, start, x);
            path.pop_back();
            used[x] = 0;
        }
    };

    for (int h = 0; h < g.half_edges(); ++h) {
        if (!in_half(h)) continue;
        path.assign(1, h);
        used.assign(g.half_edges(), 0);
        used[h] = 1;
        dfs(dfs, h, h);
    }
    return {found.begin(), found.end()};
}

bool is_quasi_recurrent(const Fatgraph& g, const std::vector<Edge>& edges) {
    auto in = edge_set(g, edges);
    std::set<Vertex> verts;
    for (Edge e : edges)
        for (int h : g.edge_halves(e)) verts.insert(g.vertex_of(h));
    for (Vertex v : verts)
        if (subgraph_valence(g, in, v) == 1 && !g.punctured(v)) return false;
    return true;
}

std::vector<Edge> maximal_quasi_recurrent(const Fatgraph& g, const std::vector<Edge>& edges) {
    auto in = edge_set(g, edges);
    bool changed = true;
    while (changed) {
        changed = false;
        for (int e = 0; e < g.edge_count(); ++e) {
            if (!in[e]) continue;
            for (int h : g.edge_halves(e)) {
                Vertex v = g.vertex_of(h);
                if (!g.punctured(v) && subgraph_valence(g, in, v) == 1) {
                    in[e] = 0;
                    changed = true;
                    break;
                }
            }
        }
    }
    std::vector<Edge> out;
    for (int e = 0; e < g.edge_count(); ++e)
        if (in[e]) out.push_back(e);
    return out;
}

Completion complete_to_quasi_triangulation(const Fatgraph& g, unsigned seed) {
    if (!g.is_qcd_dual())
        throw PreconditionError("complete_to_quasi_triangulation: not a valid arc-family dual");
    // Rebuild cycles, expanding each oversized vertex with a fan.
    std::vector<std::vector<int>> cycles;
    std::vector<std::array<int, 2>> pairs;
    std::vector<int> punctured;
    int next = g.half_edges();
    for (int e = 0; e < g.edge_count(); ++e) {
        auto [a, b] = g.edge_halves(e);
        pairs.push_back({a, b});
    }
    for (int v = 0; v < g.vertex_count(); ++v) {
        std::vector<int> hs = g.vertex_halves(v);
        int k = static_cast<int>(hs.size());
        // rotate the fan root deterministically from the seed
        if (k > 1) std::rotate(hs.begin(), hs.begin() + static_cast<int>((seed + 7u * v) % k), hs.end());
        if (!g.punctured(v)) {
            if (k == 3) {
                cycles.push_back(hs);
                continue;
            }
            // fan: k-gon region split into k-2 triangles by k-3 new edges
            check_internal(k >= 4, "completion: unpunctured vertex of low valence");
            int prev = -1;
            for (int i = 0; i + 2 < k; ++i) {
                int in_h = (i == 0) ? hs[0] : prev;
                if (i + 3 == k) {
                    cycles.push_back({in_h, hs[i + 1], hs[i + 2]});
                } else {
                    int n1 = next++, n2 = next++;
                    pairs.push_back({n1, n2});
                    cycles.push_back({in_h, hs[i + 1], n1});
                    prev = n2;
                }
            }
        } else {
            if (k == 1) {
                cycles.push_back(hs);
                punctured.push_back(static_cast<int>(cycles.size()) - 1);
                continue;
            }
            // once-punctured k-gon: k-1 triangles plus a monogon at the mark
            int prev = -1;
            for (int i = 0; i + 1 < k; ++i) {
                int in_h = (i == 0) ? hs[0] : prev;
                int n1 = next++, n2 = next++;
                pairs.push_back({n1, n2});
                cycles.push_back({in_h, hs[i + 1], n1});
                prev = n2;
            }
            cycles.push_back({prev});
            punctured.push_back(static_cast<int>(cycles.size()) - 1);
        }
    }
    Fatgraph out = Fatgraph::from_cycles(cycles, pairs, punctured);
    check_internal(out.is_quasi_triangulation(), "completion: result not a quasi triangulation");
    Completion c{std::move(out), {}, {}};
    c.edge_map.resize(g.edge_count());
    for (int e = 0; e < g.edge_count(); ++e) c.edge_map[e] = c.graph.edge_of(g.edge_halves(e)[0]);
    std::vector<char> old_edge(c.graph.edge_count(), 0);
    for (int e : c.edge_map) old_edge[e] = 1;
    for (int e = 0; e < c.graph.edge_count(); ++e)
        if (!old_edge[e]) c.added_edges.push_back(e);
    return c;
}

} // namespace pgc
