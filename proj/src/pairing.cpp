#include "pgc/pairing.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

namespace pgc {

PairingDiagnostics validate_pairing(const PairedFatgraph& pg) {
    PairingDiagnostics d;
    auto fail = [&](const std::string& s) {
        d.ok = false;
        d.problems.push_back(s);
    };
    std::set<SlotRef> used;
    for (const auto& [a, b] : pg.pairings) {
        for (const SlotRef& s : {a, b}) {
            if (s.component < 0 || s.component >= static_cast<int>(pg.components.size())) {
                fail("pairing references a missing component");
                continue;
            }
            const auto& c = pg.components[s.component];
            int limit = s.kind == SlotRef::Kind::Face
                            ? static_cast<int>(c.graph.boundary_cycles().size())
                            : c.graph.vertex_count();
            if (s.index < 0 || s.index >= limit) fail("pairing references a missing slot");
            if (s.kind == SlotRef::Kind::Star && s.index < c.graph.vertex_count() &&
                !c.graph.punctured(s.index))
                fail("pairing references an unpunctured vertex");
            if (!used.insert(s).second) fail("slot used twice");
        }
        if (a.kind != SlotRef::Kind::Star && b.kind != SlotRef::Kind::Star)
            fail("pair without a punctured vertex");
        if (a == b) fail("slot paired with itself");
    }
    for (const auto& c : pg.components) {
        if (static_cast<int>(c.weights.size()) != c.graph.edge_count())
            fail("component weight count mismatch");
        for (const Rat& w : c.weights)
            if (w <= 0) fail("nonpositive component weight");
    }
    return d;
}

namespace {

int unpaired_slot_count(const PairedFatgraph& pg) {
    std::set<SlotRef> used;
    for (const auto& [a, b] : pg.pairings) {
        used.insert(a);
        used.insert(b);
    }
    int total = 0;
    for (int ci = 0; ci < static_cast<int>(pg.components.size()); ++ci) {
        const auto& c = pg.components[ci];
        int nf = static_cast<int>(c.graph.boundary_cycles().size());
        for (int f = 0; f < nf; ++f)
            if (!used.count({ci, SlotRef::Kind::Face, f})) ++total;
        for (int v = 0; v < c.graph.vertex_count(); ++v)
            if (c.graph.punctured(v) && !used.count({ci, SlotRef::Kind::Star, v})) ++total;
    }
    return total;
}

} // namespace

bool supported_by(const PairedFatgraph& pg, const SurfaceType& f) {
    if (!validate_pairing(pg).ok) throw PreconditionError("supported_by: invalid pairing");
    if (pg.components.empty()) return false;
    if (unpaired_slot_count(pg) != f.punctures) return false;
    int chi = 0;
    for (const auto& c : pg.components) {
        int ci = c.graph.euler_characteristic();
        if (ci >= 0) return false;
        chi += ci;
    }
    if (chi != f.euler) return false;
    // connectivity of the pairing graph
    int n = static_cast<int>(pg.components.size());
    std::vector<int> comp(n);
    std::iota(comp.begin(), comp.end(), 0);
    std::function<int(int)> find = [&](int x) { return comp[x] == x ? x : comp[x] = find(comp[x]); };
    for (const auto& [a, b] : pg.pairings) comp[find(a.component)] = find(b.component);
    for (int i = 0; i < n; ++i)
        if (find(i) != find(0)) return false;
    return true;
}

bool pg_membership(const PairedFatgraph& pg) {
    std::set<SlotRef> used;
    for (const auto& [a, b] : pg.pairings) {
        used.insert(a);
        used.insert(b);
    }
    // condition 1: a component with every boundary cycle unpaired
    bool found = false;
    for (int ci = 0; ci < static_cast<int>(pg.components.size()); ++ci) {
        int nf = static_cast<int>(pg.components[ci].graph.boundary_cycles().size());
        bool all_free = true;
        for (int f = 0; f < nf; ++f)
            if (used.count({ci, SlotRef::Kind::Face, f})) all_free = false;
        if (all_free) found = true;
    }
    if (!found) return false;
    // condition 2: no cycles of "boundary cycle paired to a punctured vertex"
    int n = static_cast<int>(pg.components.size());
    std::vector<std::vector<int>> adj(n);
    for (const auto& [a, b] : pg.pairings) {
        const SlotRef* face = nullptr;
        const SlotRef* star = nullptr;
        if (a.kind == SlotRef::Kind::Face) face = &a, star = &b;
        else if (b.kind == SlotRef::Kind::Face) face = &b, star = &a;
        if (!face) continue; // punctured-vertex pairs impose nothing
        if (face->component == star->component) return false; // immediate cycle
        adj[face->component].push_back(star->component);
    }
    std::vector<int> state(n, 0);
    std::function<bool(int)> has_cycle = [&](int v) {
        state[v] = 1;
        for (int w : adj[v]) {
            if (state[w] == 1) return true;
            if (state[w] == 0 && has_cycle(w)) return true;
        }
        state[v] = 2;
        return false;
    };
    for (int v = 0; v < n; ++v)
        if (state[v] == 0 && has_cycle(v)) return false;
    return true;
}

SurfaceType paired_surface_type(const PairedFatgraph& pg) {
    SurfaceType st;
    st.punctures = unpaired_slot_count(pg);
    st.euler = 0;
    for (const auto& c : pg.components) st.euler += c.graph.euler_characteristic();
    int tg = 2 - st.punctures - st.euler;
    if (tg % 2 != 0 || tg < 0) throw ValidationError("paired_surface_type: inconsistent data");
    st.genus = tg / 2;
    return st;
}

// ---------------------------------------------------------------------------
// The quotient construction.
// ---------------------------------------------------------------------------

namespace {

// Mutable half-edge structure over the ambient graph's half-edges. Halves
// never change identity; surgery only rewires rt/pr and kills halves.
struct Work {
    const Fatgraph* g0 = nullptr;
    std::vector<int> pr, rt;
    std::vector<char> alive, punct;
    std::vector<int> star_token;
    std::vector<int> level;  // per ambient edge
    std::vector<Rat> weight; // per ambient edge (deprojectivized per level)

    int edge0(int h) const { return g0->edge_of(h); }

    std::vector<int> vertex_halves(int h) const {
        std::vector<int> out;
        int x = h;
        do {
            out.push_back(x);
            x = rt[x];
        } while (x != h);
        return out;
    }
};

struct WorkFace {
    std::vector<int> walk;
    std::vector<std::vector<int>> stubs;
    bool tight() const {
        for (const auto& s : stubs)
            if (!s.empty()) return false;
        return true;
    }
};

// Faces of the standalone subgraph on `in_half` halves, with live stubs.
std::vector<WorkFace> work_subgraph_faces(const Work& w, const std::vector<char>& in_half) {
    int n = static_cast<int>(w.pr.size());
    std::vector<char> seen(n, 0);
    std::vector<WorkFace> out;
    for (int h = 0; h < n; ++h) {
        if (!in_half[h] || seen[h]) continue;
        WorkFace f;
        int x = h;
        do {
            seen[x] = 1;
            f.walk.push_back(x);
            std::vector<int> stubs;
            int y = w.rt[w.pr[x]];
            while (!in_half[y]) {
                if (w.alive[y]) stubs.push_back(y);
                y = w.rt[y];
            }
            f.stubs.push_back(std::move(stubs));
            x = y;
        } while (x != h);
        out.push_back(std::move(f));
    }
    return out;
}

// Finished component before final assembly.
struct Finished {
    Fatgraph graph;
    std::vector<Rat> weights;
    int level = 0;
    std::vector<std::vector<int>> orig_edges; // per edge of graph
    std::vector<int> star_tokens;             // per vertex, -1 none
    std::vector<int> ambient_face;            // per face: ambient face id or -1
    std::vector<int> half_map;                // ambient half -> finished half, -1 dead
};

// Extracts the standalone subgraph on the given half set and smooths its
// bivalent unpunctured vertices, merging the coordinate sums along chains.
Finished extract_and_smooth(const Work& w, const std::vector<char>& in_half, bool smooth) {
    int n = static_cast<int>(w.pr.size());
    std::vector<int> pr2 = w.pr, rt2 = w.rt;
    std::vector<char> live = in_half;
    // restrict rotation to the subgraph's halves
    for (int h = 0; h < n; ++h) {
        if (!live[h]) continue;
        int y = rt2[h];
        while (!live[y]) y = w.rt[y];
        rt2[h] = y;
    }
    // edge records keyed by half
    std::vector<Rat> wgt(n, Rat(0));
    std::vector<int> lvl(n, -1);
    std::vector<std::vector<int>> origs(n);
    for (int h = 0; h < n; ++h) {
        if (!live[h]) continue;
        int e = w.edge0(h);
        wgt[h] = w.weight[e];
        lvl[h] = w.level[e];
        origs[h] = {e};
    }
    if (smooth) {
        bool again = true;
        while (again) {
            again = false;
            for (int h = 0; h < n && !again; ++h) {
                if (!live[h] || w.punct[h]) continue;
                int y = rt2[h];
                if (y == h || rt2[y] != h) continue; // valence != 2
                check_internal(pr2[h] != y, "smoothing hit an isolated cycle");
                int a = pr2[h], b = pr2[y];
                pr2[a] = b;
                pr2[b] = a;
                Rat mw = wgt[h] + wgt[y];
                check_internal(lvl[h] == lvl[y], "smoothing across levels");
                std::vector<int> mo = origs[h];
                mo.insert(mo.end(), origs[y].begin(), origs[y].end());
                for (int z : {a, b}) {
                    wgt[z] = mw;
                    origs[z] = mo;
                    lvl[z] = lvl[h];
                }
                live[h] = live[y] = 0;
                again = true;
            }
        }
    }
    // compact
    std::vector<int> map(n, -1);
    int m = 0;
    for (int h = 0; h < n; ++h)
        if (live[h]) map[h] = m++;
    std::vector<int> pr3(m), rt3(m);
    std::vector<char> pu3(m);
    for (int h = 0; h < n; ++h) {
        if (!live[h]) continue;
        pr3[map[h]] = map[pr2[h]];
        rt3[map[h]] = map[rt2[h]];
        pu3[map[h]] = w.punct[h];
    }
    Finished out{Fatgraph(std::move(pr3), std::move(rt3), std::move(pu3)), {}, 0, {}, {}, {}, {}};
    out.half_map = map;
    out.weights.assign(out.graph.edge_count(), Rat(0));
    out.orig_edges.resize(out.graph.edge_count());
    int common_level = -1;
    for (int h = 0; h < n; ++h) {
        if (!live[h]) continue;
        int e = out.graph.edge_of(map[h]);
        out.weights[e] = wgt[h];
        std::vector<int> o = origs[h];
        std::sort(o.begin(), o.end());
        out.orig_edges[e] = o;
        if (common_level < 0) common_level = lvl[h];
        check_internal(common_level == lvl[h], "component spans several levels");
    }
    out.level = common_level;
    out.star_tokens.assign(out.graph.vertex_count(), -1);
    for (int h = 0; h < n; ++h)
        if (live[h] && w.star_token[h] >= 0)
            out.star_tokens[out.graph.vertex_of(map[h])] = w.star_token[h];
    out.ambient_face.assign(out.graph.boundary_cycles().size(), -1);
    return out;
}

struct StarRecord {
    int level = 0;
    Rat coord;
    int label = -1;
    bool has_curve = false;
};

} // namespace

PiResult project_pi_full(const ScreenPoint& pt, const AmbientLabels& labels) {
    validate_screen_point(pt);
    const Fatgraph& g = pt.fs.g;
    const bool labeled = !labels.face_labels.empty() || !labels.star_labels.empty();
    if (labeled) {
        if (static_cast<int>(labels.face_labels.size()) != static_cast<int>(g.boundary_cycles().size()))
            throw PreconditionError("project_pi: face label count mismatch");
        if (!labels.star_labels.empty() &&
            static_cast<int>(labels.star_labels.size()) != g.vertex_count())
            throw PreconditionError("project_pi: star label count mismatch");
    }

    Work w;
    w.g0 = &g;
    w.pr.resize(g.half_edges());
    w.rt.resize(g.half_edges());
    for (int h = 0; h < g.half_edges(); ++h) {
        w.pr[h] = g.pair(h);
        w.rt[h] = g.rot(h);
    }
    w.alive.assign(g.half_edges(), 1);
    w.punct.assign(g.half_edges(), 0);
    w.star_token.assign(g.half_edges(), -1);
    std::vector<StarRecord> stars;
    for (int h = 0; h < g.half_edges(); ++h) {
        if (g.punctured_at(h)) {
            w.punct[h] = 1;
        }
    }
    // original punctured vertices get tokens so labels survive the surgery
    for (int v = 0; v < g.vertex_count(); ++v) {
        if (!g.punctured(v)) continue;
        int tok = static_cast<int>(stars.size());
        StarRecord r;
        if (labeled && !labels.star_labels.empty()) r.label = labels.star_labels[v];
        stars.push_back(r);
        for (int h : g.vertex_halves(v)) w.star_token[h] = tok;
    }

    auto lv = pt.fs.level_of_edges();
    w.level = lv;
    w.weight.assign(g.edge_count(), Rat(0));
    for (std::size_t k = 0; k < pt.fs.levels.size(); ++k)
        for (std::size_t i = 0; i < pt.fs.levels[k].size(); ++i)
            w.weight[pt.fs.levels[k][i]] = pt.weights[k][i];

    auto face_label_of_walk = [&](const std::vector<int>& walk) {
        if (!labeled) return -1;
        int fid = -1;
        for (int h : walk) {
            int f = g.face_of(h);
            check_internal(fid == -1 || fid == f, "boundary walk crosses ambient punctures");
            fid = f;
        }
        return labels.face_labels.empty() ? -1 : labels.face_labels[fid];
    };

    auto new_star = [&](const WorkFace& f, int tok) {
        std::vector<int> ring;
        for (const auto& s : f.stubs) ring.insert(ring.end(), s.begin(), s.end());
        check_internal(!ring.empty(), "pinch with no shallow attachment");
        for (std::size_t i = 0; i < ring.size(); ++i) {
            w.rt[ring[i]] = ring[(i + 1) % ring.size()];
            w.punct[ring[i]] = 1;
            w.star_token[ring[i]] = tok;
        }
    };

    std::vector<Finished> finished;
    struct PendingPair {
        bool star_star = false;
        int tok_a = -1, tok_b = -1;    // star-star
        int comp = -1, face = -1;      // star-face: tok_a with (comp, face)
        int level = 0;
        Rat coord;
    };
    std::vector<PendingPair> pending;

    int n_levels = pt.fs.total_level();
    for (int k = n_levels - 1; k >= 0; --k) {
        // deep halves: alive edges of level >= k+1
        std::vector<char> deep_half(g.half_edges(), 0);
        for (int h = 0; h < g.half_edges(); ++h)
            if (w.alive[h] && w.level[w.edge0(h)] >= k + 1) deep_half[h] = 1;

        // components of the deep subgraph (flood over rt-orbits and pr)
        std::vector<int> comp(g.half_edges(), -1);
        int ncomp = 0;
        for (int h = 0; h < g.half_edges(); ++h) {
            if (!deep_half[h] || comp[h] != -1) continue;
            std::vector<int> stack{h};
            comp[h] = ncomp;
            while (!stack.empty()) {
                int x = stack.back();
                stack.pop_back();
                std::vector<int> nbr{w.pr[x]};
                for (int y : w.vertex_halves(x))
                    nbr.push_back(y);
                for (int y : nbr)
                    if (deep_half[y] && comp[y] == -1) {
                        comp[y] = ncomp;
                        stack.push_back(y);
                    }
            }
            ++ncomp;
        }

        for (int c = 0; c < ncomp; ++c) {
            std::vector<char> in_half(g.half_edges(), 0);
            std::vector<int> k_halves;
            for (int h = 0; h < g.half_edges(); ++h)
                if (comp[h] == c) {
                    in_half[h] = 1;
                    k_halves.push_back(h);
                }
            // proper inclusion: some vertex of K carries a live non-K half
            bool proper = false;
            for (int h : k_halves)
                for (int y : w.vertex_halves(h))
                    if (w.alive[y] && !in_half[y]) proper = true;
            if (!proper) continue;
            for (int h : k_halves)
                check_internal(w.level[w.edge0(h)] == k + 1,
                               "deep component not reduced to a single level");

            auto faces = work_subgraph_faces(w, in_half);
            // cycle: every K-vertex bivalent in K and unpunctured
            bool cycle = true;
            for (int h : k_halves) {
                if (w.punct[h]) cycle = false;
                int cnt = 0;
                for (int y : w.vertex_halves(h))
                    if (in_half[y]) ++cnt;
                if (cnt != 2) cycle = false;
            }

            int klevel = k + 1;
            Rat kcoord = 0;
            std::set<int> kedges;
            for (int h : k_halves) kedges.insert(w.edge0(h));
            for (int e : kedges) kcoord += w.weight[e];

            if (cycle) {
                check_internal(faces.size() == 2, "cycle component without two sides");
                int tight = (faces[0].tight() ? 1 : 0) + (faces[1].tight() ? 1 : 0);
                check_internal(tight < 2, "full component classified as proper");
                if (tight == 1) {
                    const WorkFace& tf = faces[faces[0].tight() ? 0 : 1];
                    const WorkFace& of = faces[faces[0].tight() ? 1 : 0];
                    int tok = static_cast<int>(stars.size());
                    StarRecord r;
                    r.level = klevel;
                    r.coord = kcoord;
                    r.has_curve = true;
                    r.label = face_label_of_walk(tf.walk);
                    stars.push_back(r);
                    for (int h : k_halves) w.alive[h] = 0;
                    new_star(of, tok);
                } else {
                    int t1 = static_cast<int>(stars.size());
                    stars.push_back({klevel, kcoord, -1, true});
                    int t2 = static_cast<int>(stars.size());
                    stars.push_back({klevel, kcoord, -1, true});
                    for (int h : k_halves) w.alive[h] = 0;
                    new_star(faces[0], t1);
                    new_star(faces[1], t2);
                    PendingPair pp;
                    pp.star_star = true;
                    pp.tok_a = t1;
                    pp.tok_b = t2;
                    pp.level = klevel;
                    pp.coord = kcoord;
                    pending.push_back(std::move(pp));
                }
            } else {
                Finished fin = extract_and_smooth(w, in_half, true);
                // match pre-smoothing boundary cycles to finished faces via a
                // surviving half; record labels on the finished component
                int comp_id = static_cast<int>(finished.size());
                std::vector<std::pair<int, const WorkFace*>> pinched; // finished face -> source
                for (const auto& f : faces) {
                    int fin_face = -1;
                    for (int h : f.walk)
                        if (fin.half_map[h] >= 0) {
                            fin_face = fin.graph.face_of(fin.half_map[h]);
                            break;
                        }
                    check_internal(fin_face >= 0, "boundary cycle lost in smoothing");
                    pinched.push_back({fin_face, &f});
                }
                for (auto& [fin_face, fptr] : pinched) {
                    if (labeled) fin.ambient_face[fin_face] = face_label_of_walk(fptr->walk);
                    if (fptr->tight()) continue; // stays a decorated puncture
                    Rat gcoord = 0;
                    for (int h : fptr->walk) gcoord += w.weight[w.edge0(h)];
                    int tok = static_cast<int>(stars.size());
                    stars.push_back({klevel, gcoord, -1, true});
                    PendingPair pp;
                    pp.tok_a = tok;
                    pp.comp = comp_id;
                    pp.face = fin_face;
                    pp.level = klevel;
                    pp.coord = gcoord;
                    pending.push_back(std::move(pp));
                    new_star(*fptr, tok);
                }
                for (int h : k_halves) w.alive[h] = 0;
                finished.push_back(std::move(fin));
            }
        }
    }

    // remaining live components become the shallowest-level pieces
    {
        std::vector<int> comp(g.half_edges(), -1);
        int ncomp = 0;
        for (int h = 0; h < g.half_edges(); ++h) {
            if (!w.alive[h] || comp[h] != -1) continue;
            std::vector<int> stack{h};
            comp[h] = ncomp;
            while (!stack.empty()) {
                int x = stack.back();
                stack.pop_back();
                std::vector<int> nbr{w.pr[x]};
                for (int y : w.vertex_halves(x)) nbr.push_back(y);
                for (int y : nbr)
                    if (w.alive[y] && comp[y] == -1) {
                        comp[y] = ncomp;
                        stack.push_back(y);
                    }
            }
            ++ncomp;
        }
        for (int c = 0; c < ncomp; ++c) {
            std::vector<char> in_half(g.half_edges(), 0);
            for (int h = 0; h < g.half_edges(); ++h)
                if (comp[h] == c) in_half[h] = 1;
            Finished fin = extract_and_smooth(w, in_half, false);
            if (labeled) {
                for (int f = 0; f < static_cast<int>(fin.graph.boundary_cycles().size()); ++f) {
                    std::vector<int> walk0;
                    for (int h = 0; h < g.half_edges(); ++h)
                        if (fin.half_map[h] >= 0 && fin.graph.face_of(fin.half_map[h]) == f)
                            walk0.push_back(h);
                    fin.ambient_face[f] = face_label_of_walk(walk0);
                }
            }
            finished.push_back(std::move(fin));
        }
    }

    // token locations
    std::map<int, std::pair<int, int>> star_at; // token -> (component, vertex)
    for (int ci = 0; ci < static_cast<int>(finished.size()); ++ci)
        for (int v = 0; v < finished[ci].graph.vertex_count(); ++v)
            if (finished[ci].star_tokens[v] >= 0)
                star_at[finished[ci].star_tokens[v]] = {ci, v};

    PiResult out;
    out.pg.curve_family_label = labels.curve_family;
    for (auto& fin : finished) out.edge_origins.push_back(fin.orig_edges);
    for (auto& fin : finished) {
        PairedComponent pc;
        pc.graph = fin.graph;
        pc.weights = fin.weights;
        pc.level = fin.level;
        std::set<int> origs;
        for (const auto& oe : fin.orig_edges) origs.insert(oe.begin(), oe.end());
        std::ostringstream lab;
        lab << labels.curve_family << ":";
        for (int e : origs) lab << e << ".";
        pc.isotopy_label = lab.str();
        pc.face_labels = fin.ambient_face;
        pc.star_labels.assign(fin.graph.vertex_count(), -1);
        for (int v = 0; v < fin.graph.vertex_count(); ++v)
            if (fin.star_tokens[v] >= 0) pc.star_labels[v] = stars[fin.star_tokens[v]].label;
        out.pg.components.push_back(std::move(pc));
    }
    for (const auto& pp : pending) {
        SlotRef a, b;
        auto loc = star_at.find(pp.tok_a);
        check_internal(loc != star_at.end(), "pinch vertex lost");
        a = {loc->second.first, SlotRef::Kind::Star, loc->second.second};
        if (pp.star_star) {
            auto loc2 = star_at.find(pp.tok_b);
            check_internal(loc2 != star_at.end(), "pinch vertex lost");
            b = {loc2->second.first, SlotRef::Kind::Star, loc2->second.second};
        } else {
            b = {pp.comp, SlotRef::Kind::Face, pp.face};
        }
        out.pg.pairings.push_back({a, b});
        out.pairing_curve.push_back({pp.level, pp.coord});
    }
    for (const auto& [tok, loc] : star_at) {
        if (stars[tok].has_curve)
            out.star_curve[{loc.first, loc.second}] = {stars[tok].level, stars[tok].coord};
    }

    PairingDiagnostics diag = validate_pairing(out.pg);
    check_internal(diag.ok, "quotient construction produced an invalid pairing");
    return out;
}

PairedFatgraph project_pi(const ScreenPoint& pt, const AmbientLabels& labels) {
    return project_pi_full(pt, labels).pg;
}

// ---------------------------------------------------------------------------
// Canonical keys.
// ---------------------------------------------------------------------------

namespace {

struct CompCandidates {
    std::vector<std::vector<int>> relabelings; // decorated-minimal relabelings
    std::string base_key;                      // decorated encoding under any of them
};

std::string component_encoding(const PairedComponent& c, const std::vector<int>& relab,
                               const PairedKeyOptions& opt, const std::vector<Rat>& wproj) {
    const Fatgraph& g = c.graph;
    int n = g.half_edges();
    std::vector<int> inv(n);
    for (int h = 0; h < n; ++h) inv[relab[h]] = h;
    std::ostringstream os;
    for (int i = 0; i < n; ++i) {
        int h = inv[i];
        os << relab[g.rot(h)] << "," << relab[g.pair(h)] << "," << (g.punctured_at(h) ? 1 : 0)
           << ";";
    }
    if (opt.include_weights) {
        auto order = canonical_edge_order(g, CanonicalForm{{}, relab, 0});
        std::vector<std::string> by_rank(g.edge_count());
        for (int e = 0; e < g.edge_count(); ++e) by_rank[order[e]] = rat_str(wproj[e]);
        for (const auto& s : by_rank) os << s << ";";
    }
    if (opt.include_labels) {
        // faces ranked by least canonical label
        std::vector<std::pair<int, int>> faces;
        for (int f = 0; f < static_cast<int>(g.boundary_cycles().size()); ++f) {
            int lo = n;
            for (int h : g.boundary_cycles()[f]) lo = std::min(lo, relab[h]);
            faces.push_back({lo, f});
        }
        std::sort(faces.begin(), faces.end());
        for (auto& [lo, f] : faces) os << "F" << (c.face_labels.empty() ? -1 : c.face_labels[f]) << ";";
        std::vector<std::pair<int, int>> verts;
        for (int v = 0; v < g.vertex_count(); ++v) {
            int lo = n;
            for (int h : g.vertex_halves(v)) lo = std::min(lo, relab[h]);
            verts.push_back({lo, v});
        }
        std::sort(verts.begin(), verts.end());
        for (auto& [lo, v] : verts)
            os << "V" << (c.star_labels.empty() ? -1 : c.star_labels[v]) << ";";
    }
    if (opt.include_isotopy) os << "I" << c.isotopy_label << ";";
    os << "L" << c.level << ";";
    return os.str();
}

int canonical_face_rank(const Fatgraph& g, const std::vector<int>& relab, int face) {
    std::vector<std::pair<int, int>> faces;
    for (int f = 0; f < static_cast<int>(g.boundary_cycles().size()); ++f) {
        int lo = g.half_edges();
        for (int h : g.boundary_cycles()[f]) lo = std::min(lo, relab[h]);
        faces.push_back({lo, f});
    }
    std::sort(faces.begin(), faces.end());
    for (int i = 0; i < static_cast<int>(faces.size()); ++i)
        if (faces[i].second == face) return i;
    throw InternalInvariantError("face rank lookup failed");
}

int canonical_vertex_rank(const Fatgraph& g, const std::vector<int>& relab, int v) {
    std::vector<std::pair<int, int>> verts;
    for (int u = 0; u < g.vertex_count(); ++u) {
        int lo = g.half_edges();
        for (int h : g.vertex_halves(u)) lo = std::min(lo, relab[h]);
        verts.push_back({lo, u});
    }
    std::sort(verts.begin(), verts.end());
    for (int i = 0; i < static_cast<int>(verts.size()); ++i)
        if (verts[i].second == v) return i;
    throw InternalInvariantError("vertex rank lookup failed");
}

} // namespace

PairedCanonicalization paired_canonicalize(const PairedFatgraph& pg, const PairedKeyOptions& opt) {
    int nc = static_cast<int>(pg.components.size());
    std::vector<CompCandidates> cands(nc);
    std::vector<std::vector<Rat>> wproj(nc);
    for (int ci = 0; ci < nc; ++ci) {
        wproj[ci] = projectivize(pg.components[ci].weights);
        auto all = minimal_relabelings(pg.components[ci].graph);
        std::string best;
        for (const auto& r : all) {
            std::string k = component_encoding(pg.components[ci], r, opt, wproj[ci]);
            if (best.empty() || k < best) best = k;
        }
        for (const auto& r : all)
            if (component_encoding(pg.components[ci], r, opt, wproj[ci]) == best)
                cands[ci].relabelings.push_back(r);
        cands[ci].base_key = best;
    }
    // order components by decorated key; resolve ties and residual relabeling
    // freedom by minimizing the full pairing encoding
    std::vector<int> order(nc);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return cands[a].base_key < cands[b].base_key; });

    // enumerate tie permutations (groups of equal keys) and relabel choices
    std::vector<std::vector<int>> groups;
    for (int i = 0; i < nc;) {
        int j = i;
        while (j < nc && cands[order[j]].base_key == cands[order[i]].base_key) ++j;
        std::vector<int> grp(order.begin() + i, order.begin() + j);
        groups.push_back(grp);
        i = j;
    }

    std::string best_full;
    std::vector<int> best_order;
    std::vector<std::vector<int>> best_relab(nc);
    std::function<void(std::size_t, std::vector<int>&)> rec_groups =
        [&](std::size_t gi, std::vector<int>& acc) {
            if (gi == groups.size()) {
                // choose relabelings per component (first candidate unless we
                // must explore; cap the product to keep this bounded)
                std::vector<std::size_t> choice(acc.size(), 0);
                std::size_t total = 1;
                for (int ci : acc) total *= std::max<std::size_t>(1, cands[ci].relabelings.size());
                if (total > 20000) total = 1; // fall back to first choices only
                for (std::size_t t = 0; t < total; ++t) {
                    std::size_t tt = t;
                    for (std::size_t i = 0; i < acc.size(); ++i) {
                        std::size_t k = cands[acc[i]].relabelings.size();
                        choice[i] = (k > 0) ? tt % k : 0;
                        tt /= std::max<std::size_t>(1, k);
                    }
                    std::ostringstream os;
                    std::vector<int> pos(nc);
                    for (std::size_t i = 0; i < acc.size(); ++i) pos[acc[i]] = static_cast<int>(i);
                    for (std::size_t i = 0; i < acc.size(); ++i)
                        os << "C" << i << "{" << cands[acc[i]].base_key << "}";
                    std::vector<std::string> pair_strs;
                    for (const auto& [a, b] : pg.pairings) {
                        auto enc = [&](const SlotRef& s) {
                            const auto& relab =
                                cands[s.component].relabelings[choice[pos[s.component]]];
                            int idx = s.kind == SlotRef::Kind::Face
                                          ? canonical_face_rank(pg.components[s.component].graph,
                                                                relab, s.index)
                                          : canonical_vertex_rank(pg.components[s.component].graph,
                                                                  relab, s.index);
                            std::ostringstream ss;
                            ss << pos[s.component] << (s.kind == SlotRef::Kind::Face ? "f" : "v")
                               << idx;
                            return ss.str();
                        };
                        std::string ea = enc(a), eb = enc(b);
                        if (eb < ea) std::swap(ea, eb);
                        pair_strs.push_back(ea + "-" + eb);
                    }
                    std::sort(pair_strs.begin(), pair_strs.end());
                    for (const auto& s : pair_strs) os << "P" << s << ";";
                    std::string full = os.str();
                    if (best_full.empty() || full < best_full) {
                        best_full = full;
                        best_order = acc;
                        for (int ci = 0; ci < nc; ++ci)
                            best_relab[ci] =
                                cands[ci].relabelings.empty()
                                    ? std::vector<int>{}
                                    : cands[ci].relabelings[choice[pos[ci]]];
                    }
                }
                return;
            }
            std::vector<int> grp = groups[gi];
            std::sort(grp.begin(), grp.end());
            do {
                std::size_t base = acc.size();
                for (int x : grp) acc.push_back(x);
                rec_groups(gi + 1, acc);
                acc.resize(base);
            } while (std::next_permutation(grp.begin(), grp.end()));
        };
    std::vector<int> acc;
    rec_groups(0, acc);
    return PairedCanonicalization{best_full, std::move(best_order), std::move(best_relab)};
}

std::string paired_canonical_key(const PairedFatgraph& pg, const PairedKeyOptions& opt) {
    return paired_canonicalize(pg, opt).key;
}

bool pi_equivalent(const ScreenPoint& p, const ScreenPoint& q, const AmbientLabels& lp,
                   const AmbientLabels& lq) {
    PairedFatgraph a = project_pi(p, lp);
    PairedFatgraph b = project_pi(q, lq);
    return paired_canonical_key(a) == paired_canonical_key(b);
}

} // namespace pgc
