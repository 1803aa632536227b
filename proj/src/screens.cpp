#include "pgc/screens.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace pgc {

std::vector<Edge> FilteredScreen::upper_set(int k) const {
    std::vector<Edge> out;
    for (int i = k; i < static_cast<int>(levels.size()); ++i)
        out.insert(out.end(), levels[i].begin(), levels[i].end());
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<int> FilteredScreen::level_of_edges() const {
    std::vector<int> lv(g.edge_count(), -1);
    for (int k = 0; k < static_cast<int>(levels.size()); ++k)
        for (Edge e : levels[k]) lv[e] = k;
    return lv;
}

void validate_filtered_screen(const FilteredScreen& fs) {
    std::vector<char> seen(fs.g.edge_count(), 0);
    if (fs.levels.empty()) throw ValidationError("filtered screen: no levels");
    for (const auto& lv : fs.levels) {
        if (lv.empty()) throw ValidationError("filtered screen: empty level");
        for (Edge e : lv) {
            if (e < 0 || e >= fs.g.edge_count() || seen[e])
                throw ValidationError("filtered screen: levels do not partition the edges");
            seen[e] = 1;
        }
    }
    for (char c : seen)
        if (!c) throw ValidationError("filtered screen: levels do not cover the edges");
    for (int k = 0; k < static_cast<int>(fs.levels.size()); ++k) {
        if (!is_quasi_recurrent(fs.g, fs.upper_set(k)))
            throw ValidationError("filtered screen: upper set at level " + std::to_string(k) +
                                  " is not quasi recurrent");
    }
}

void validate_screen(const Screen& s) {
    std::vector<Edge> all(s.g.edge_count());
    std::iota(all.begin(), all.end(), 0);
    bool has_all = false;
    std::set<std::vector<Edge>> distinct;
    for (const auto& m : s.members) {
        if (!std::is_sorted(m.begin(), m.end())) throw ValidationError("screen: member not sorted");
        if (!distinct.insert(m).second) throw ValidationError("screen: duplicate member");
        if (m == all) has_all = true;
        if (!is_quasi_recurrent(s.g, m))
            throw ValidationError("screen: member is not quasi recurrent");
    }
    if (!has_all) throw ValidationError("screen: full edge set missing");
    // nested or disjoint
    auto subset = [](const std::vector<Edge>& a, const std::vector<Edge>& b) {
        return std::includes(b.begin(), b.end(), a.begin(), a.end());
    };
    for (const auto& a : s.members) {
        for (const auto& b : s.members) {
            std::vector<Edge> inter;
            std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                                  std::back_inserter(inter));
            if (!inter.empty() && !subset(a, b) && !subset(b, a))
                throw ValidationError("screen: members neither nested nor disjoint");
        }
    }
    // union of proper sub-members is proper
    for (const auto& a : s.members) {
        std::set<Edge> uni;
        for (const auto& b : s.members)
            if (b != a && subset(b, a)) uni.insert(b.begin(), b.end());
        if (uni.size() == a.size())
            throw ValidationError("screen: member equals the union of its proper sub-members");
    }
}

FilteredScreen screen_to_filtered(const Screen& s) {
    validate_screen(s);
    auto subset = [](const std::vector<Edge>& a, const std::vector<Edge>& b) {
        return std::includes(b.begin(), b.end(), a.begin(), a.end());
    };
    // depth of member = longest proper ascending chain to the full set
    int m = static_cast<int>(s.members.size());
    std::vector<int> depth(m, 0);
    bool changed = true;
    while (changed) {
        changed = false;
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                if (i == j || s.members[i] == s.members[j]) continue;
                if (subset(s.members[i], s.members[j]) && depth[i] < depth[j] + 1) {
                    depth[i] = depth[j] + 1;
                    changed = true;
                }
            }
    }
    std::vector<int> edge_depth(s.g.edge_count(), 0);
    for (int i = 0; i < m; ++i)
        for (Edge e : s.members[i]) edge_depth[e] = std::max(edge_depth[e], depth[i]);
    int maxd = *std::max_element(edge_depth.begin(), edge_depth.end());
    FilteredScreen fs{s.g, std::vector<std::vector<Edge>>(maxd + 1)};
    for (int e = 0; e < s.g.edge_count(); ++e) fs.levels[edge_depth[e]].push_back(e);
    validate_filtered_screen(fs);
    return fs;
}

Screen filtered_to_screen(const FilteredScreen& fs) {
    validate_filtered_screen(fs);
    Screen s{fs.g, {}};
    for (int k = 0; k <= fs.total_level(); ++k) s.members.push_back(fs.upper_set(k));
    validate_screen(s);
    return s;
}

void validate_screen_point(const ScreenPoint& p) {
    validate_filtered_screen(p.fs);
    if (p.weights.size() != p.fs.levels.size())
        throw ValidationError("screen point: weight levels mismatch");
    for (std::size_t k = 0; k < p.weights.size(); ++k) {
        if (p.weights[k].size() != p.fs.levels[k].size())
            throw ValidationError("screen point: weight count mismatch at a level");
        Rat s = 0;
        for (const Rat& w : p.weights[k]) {
            if (w <= 0) throw ValidationError("screen point: nonpositive weight");
            s += w;
        }
        if (s != 1) throw ValidationError("screen point: level weights do not sum to one");
    }
}

int screen_cell_dimension(const FilteredScreen& fs) {
    int d = 0;
    for (const auto& lv : fs.levels) d += static_cast<int>(lv.size()) - 1;
    return d;
}

// --------------------------------------------------------------------------
// Complement analysis.
//
// Removing a neighborhood of G(A) from the ambient surface leaves pieces
// assembled from: boundary cycles of the ambient graph (each a once-punctured
// disk), non-A edges, non-A vertices, and the corners of A-vertices between
// consecutive A-half-edges. Components are computed by union-find over these
// atoms; the compactified Euler characteristic of a component is
//    (#non-A vertices + #corners - #non-A edges) + sum over faces (1 - r)
// with r the number of A-half-edges on the face's walk.
// --------------------------------------------------------------------------

namespace {

struct UF {
    std::vector<int> p;
    explicit UF(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
    int find(int x) { return p[x] == x ? x : p[x] = find(p[x]); }
    void unite(int a, int b) { p[find(a)] = find(b); }
};

} // namespace

std::vector<ComplementComponent> complement_components(const Fatgraph& g,
                                                       const std::vector<char>& in) {
    auto in_half = [&](int h) { return in[g.edge_of(h)] != 0; };
    int nf = static_cast<int>(g.boundary_cycles().size());
    int nv = g.vertex_count();
    int ne = g.edge_count();

    // corner id per A-half-edge (the corner following it counterclockwise)
    std::vector<int> corner_id(g.half_edges(), -1);
    int ncorner = 0;
    for (int h = 0; h < g.half_edges(); ++h)
        if (in_half(h)) corner_id[h] = ncorner++;

    // atoms: [0,nf) faces, [nf,nf+nv) vertices (non-A only used),
    // [nf+nv, nf+nv+ne) edges (non-A only), then corners
    int base_v = nf, base_e = nf + nv, base_c = nf + nv + ne;
    UF uf(base_c + ncorner);

    std::vector<char> vertex_in_a(nv, 0);
    for (int h = 0; h < g.half_edges(); ++h)
        if (in_half(h)) vertex_in_a[g.vertex_of(h)] = 1;

    // sector between x and rot(x) is crossed by the face containing rot(x)
    auto sector_face = [&](int x) { return g.face_of(g.rot(x)); };

    for (int v = 0; v < nv; ++v) {
        if (vertex_in_a[v]) continue;
        for (int x : g.vertex_halves(v)) uf.unite(base_v + v, sector_face(x));
    }
    for (int e = 0; e < ne; ++e) {
        if (in[e]) continue;
        auto [h, hp] = g.edge_halves(e);
        uf.unite(base_e + e, g.face_of(h));
        uf.unite(base_e + e, g.face_of(hp));
        for (int x : {h, hp}) {
            Vertex v = g.vertex_of(x);
            if (!vertex_in_a[v]) {
                uf.unite(base_e + e, base_v + v);
            } else {
                // the corner holding this stub: walk clockwise to the A-half
                int y = x;
                while (!in_half(y)) y = g.rot_prev(y);
                uf.unite(base_e + e, base_c + corner_id[y]);
            }
        }
    }
    for (int h = 0; h < g.half_edges(); ++h) {
        if (!in_half(h)) continue;
        // corner after h: sectors s(h), s(stub_1), ... up to the next A-half
        int c = base_c + corner_id[h];
        uf.unite(c, sector_face(h));
        int y = g.rot(h);
        while (!in_half(y)) {
            uf.unite(c, sector_face(y));
            y = g.rot(y);
        }
    }

    // r per face: number of A-half-edges on its walk
    std::vector<int> rface(nf, 0);
    for (int h = 0; h < g.half_edges(); ++h)
        if (in_half(h)) rface[g.face_of(h)]++;

    std::map<int, int> comp_index;
    std::vector<ComplementComponent> out;
    auto comp_of = [&](int atom) {
        int r = uf.find(atom);
        auto it = comp_index.find(r);
        if (it != comp_index.end()) return it->second;
        int idx = static_cast<int>(out.size());
        comp_index[r] = idx;
        out.emplace_back();
        return idx;
    };

    for (int f = 0; f < nf; ++f) {
        int c = comp_of(f);
        out[c].chi_compact += 1 - rface[f];
        out[c].punctures += 1;
    }
    for (int v = 0; v < nv; ++v) {
        if (vertex_in_a[v]) continue;
        int c = comp_of(base_v + v);
        out[c].chi_compact += 1;
        if (g.punctured(v)) out[c].punctures += 1;
    }
    for (int e = 0; e < ne; ++e) {
        if (in[e]) continue;
        out[comp_of(base_e + e)].chi_compact -= 1;
    }
    for (int h = 0; h < g.half_edges(); ++h)
        if (in_half(h)) out[comp_of(base_c + corner_id[h])].chi_compact += 1;

    // subgraph boundary cycles touch the component of any of their corners
    auto faces = subgraph_faces(g, in);
    for (int fi = 0; fi < static_cast<int>(faces.size()); ++fi) {
        const auto& f = faces[fi];
        std::set<int> comps;
        for (int h : f.walk) comps.insert(comp_of(base_c + corner_id[g.pair(h)]));
        check_internal(comps.size() == 1, "complement: boundary cycle touches two components");
        out[*comps.begin()].touching_faces.push_back(fi);
    }
    return out;
}

std::vector<CurveOnGraph> relative_boundary(const FilteredScreen& fs, int k) {
    validate_filtered_screen(fs);
    if (k < 0 || k >= fs.total_level())
        throw PreconditionError("relative_boundary: level out of range");
    // Work inside the standalone level-k subgraph; its edges keep ambient ids.
    std::vector<Edge> shallow_edges = fs.upper_set(k);
    std::vector<Edge> deep_edges = fs.upper_set(k + 1);
    auto shallow_set = edge_set(fs.g, shallow_edges);
    auto deep_set = edge_set(fs.g, deep_edges);

    // "tight" boundary cycles of the deep subgraph trace complete boundary
    // cycles of the shallow subgraph: their complement piece on that side is
    // a bare once-punctured disk, so they are puncture- or boundary-parallel.
    std::vector<CurveOnGraph> out;
    for (const auto& comp : subgraph_components(fs.g, deep_set)) {
        auto comp_set = edge_set(fs.g, comp);
        bool cycle = is_simple_cycle(fs.g, comp);
        auto faces = subgraph_faces_within(fs.g, shallow_set, comp_set);
        if (cycle) {
            int tight = 0;
            for (const auto& f : faces)
                if (f.tight()) ++tight;
            if (tight == 0) {
                // essential: include the cycle itself, once
                CurveOnGraph c;
                c.walk = faces[0].walk;
                c.tag = CurveOnGraph::Tag::Essential;
                out.push_back(std::move(c));
            }
            // one tight side: parallel to a puncture of the shallow surface;
            // two tight sides: a component one level up. Nothing essential.
        } else {
            for (const auto& f : faces) {
                if (f.tight()) continue;
                CurveOnGraph c;
                c.walk = f.walk;
                c.tag = CurveOnGraph::Tag::Essential;
                out.push_back(std::move(c));
            }
        }
    }
    return out;
}

std::vector<CurveOnGraph> screen_boundary(const FilteredScreen& fs) {
    std::vector<CurveOnGraph> out;
    for (int k = 0; k < fs.total_level(); ++k) {
        auto part = relative_boundary(fs, k);
        out.insert(out.end(), part.begin(), part.end());
    }
    return out;
}

ScreenFace face_remove_arc(const FilteredScreen& fs, Edge e) {
    validate_filtered_screen(fs);
    auto lv = fs.level_of_edges();
    int k = lv[e];
    auto [h, hp] = fs.g.edge_halves(e);
    Vertex u = fs.g.vertex_of(h), v = fs.g.vertex_of(hp);
    if (u == v) throw PreconditionError("face_remove_arc: dual edge is a loop");
    // one endpoint must be unpunctured and meet no deeper edge
    auto deeper_at = [&](Vertex w) {
        for (int x : fs.g.vertex_halves(w))
            if (lv[fs.g.edge_of(x)] > k) return true;
        return false;
    };
    bool ok_u = !fs.g.punctured(u) && !deeper_at(u);
    bool ok_v = !fs.g.punctured(v) && !deeper_at(v);
    if (!ok_u && !ok_v)
        throw PreconditionError(
            "face_remove_arc: no unpunctured endpoint away from the deeper subgraph");

    CollapseResult cr = collapse_edge(fs.g, e);
    FilteredScreen out{cr.graph, std::vector<std::vector<Edge>>(fs.levels.size())};
    for (int j = 0; j < static_cast<int>(fs.levels.size()); ++j)
        for (Edge f : fs.levels[j])
            if (f != e) out.levels[j].push_back(cr.edge_map[f]);
    for (auto& l : out.levels) std::sort(l.begin(), l.end());
    // an emptied level is dropped, renumbering deeper levels down
    std::erase_if(out.levels, [](const std::vector<Edge>& l) { return l.empty(); });
    validate_filtered_screen(out);
    return ScreenFace{std::move(out), std::move(cr.edge_map)};
}

FilteredScreen face_split_level(const FilteredScreen& fs, int k, const std::vector<Edge>& a) {
    validate_filtered_screen(fs);
    if (k < 0 || k > fs.total_level()) throw PreconditionError("face_split_level: bad level");
    std::vector<Edge> asort = a;
    std::sort(asort.begin(), asort.end());
    const auto& lk = fs.levels[k];
    if (asort.empty() || asort.size() >= lk.size() ||
        !std::includes(lk.begin(), lk.end(), asort.begin(), asort.end()))
        throw PreconditionError("face_split_level: subset not proper and nonempty in its level");
    std::vector<Edge> kept;
    std::set_difference(lk.begin(), lk.end(), asort.begin(), asort.end(),
                        std::back_inserter(kept));
    std::vector<Edge> rec = fs.upper_set(k + 1);
    rec.insert(rec.end(), asort.begin(), asort.end());
    std::sort(rec.begin(), rec.end());
    if (!is_quasi_recurrent(fs.g, rec))
        throw PreconditionError("face_split_level: split set union deeper edges not recurrent");
    FilteredScreen out{fs.g, {}};
    for (int j = 0; j < k; ++j) out.levels.push_back(fs.levels[j]);
    out.levels.push_back(kept);
    out.levels.push_back(asort);
    for (int j = k + 1; j <= fs.total_level(); ++j) out.levels.push_back(fs.levels[j]);
    validate_filtered_screen(out);
    return out;
}

} // namespace pgc
