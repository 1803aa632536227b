#include "pgc/orient.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>

namespace pgc {

void validate_partial_orientation(const PartialOrientation& o) {
    validate_stratum_graph(o.g);
    if (static_cast<int>(o.tail.size()) != o.g.edge_count())
        throw ValidationError("partial orientation: size mismatch");
    for (int e = 0; e < o.g.edge_count(); ++e) {
        int t = o.tail[e];
        if (t == -1) continue;
        if (!o.g.is_node(e)) {
            if (t != o.g.edges[e].u)
                throw ValidationError("partial orientation: puncture edge must point outward");
        } else if (t != o.g.edges[e].u && t != o.g.edges[e].v) {
            throw ValidationError("partial orientation: tail not an endpoint");
        }
    }
}

StratumOfPairing orientation_from_pairing(const PairedFatgraph& pg) {
    if (!validate_pairing(pg).ok) throw PreconditionError("orientation_from_pairing: invalid pairing");
    StratumOfPairing out;
    out.orientation.g.n_comp = static_cast<int>(pg.components.size());
    std::set<SlotRef> used;
    for (const auto& [a, b] : pg.pairings) {
        used.insert(a);
        used.insert(b);
        StratumGraph::SEdge se;
        se.is_node = true;
        se.u = a.component;
        se.v = b.component;
        out.orientation.g.edges.push_back(se);
        int tail = -1;
        std::vector<SlotRef> slots{a, b};
        if (a.kind == SlotRef::Kind::Face) tail = a.component;
        else if (b.kind == SlotRef::Kind::Face) {
            tail = b.component;
            std::swap(slots[0], slots[1]);
            std::swap(out.orientation.g.edges.back().u, out.orientation.g.edges.back().v);
        }
        out.orientation.tail.push_back(tail);
        out.edge_slots.push_back(slots);
    }
    for (int ci = 0; ci < static_cast<int>(pg.components.size()); ++ci) {
        const auto& c = pg.components[ci];
        int nf = static_cast<int>(c.graph.boundary_cycles().size());
        for (int f = 0; f < nf; ++f) {
            SlotRef s{ci, SlotRef::Kind::Face, f};
            if (used.count(s)) continue;
            out.orientation.g.edges.push_back({false, ci, -1});
            out.orientation.tail.push_back(ci); // decorated: toward the marked end
            out.edge_slots.push_back({s});
        }
        for (int v = 0; v < c.graph.vertex_count(); ++v) {
            if (!c.graph.punctured(v)) continue;
            SlotRef s{ci, SlotRef::Kind::Star, v};
            if (used.count(s)) continue;
            out.orientation.g.edges.push_back({false, ci, -1});
            out.orientation.tail.push_back(-1); // undecorated: unoriented
            out.edge_slots.push_back({s});
        }
    }
    validate_partial_orientation(out.orientation);
    return out;
}

namespace {

std::vector<int> outgoing(const PartialOrientation& o, int v) {
    std::vector<int> out;
    for (int e = 0; e < o.g.edge_count(); ++e)
        if (o.tail[e] == v) out.push_back(e);
    return out;
}

int head_of(const PartialOrientation& o, int e) {
    // component-vertex head; -1 for an oriented puncture edge
    if (!o.g.is_node(e)) return -1;
    return o.tail[e] == o.g.edges[e].u ? o.g.edges[e].v : o.g.edges[e].u;
}

bool oriented_cycle_free(const PartialOrientation& o) {
    int n = o.g.n_comp;
    std::vector<std::vector<int>> adj(n);
    for (int e = 0; e < o.g.edge_count(); ++e) {
        if (o.tail[e] == -1 || !o.g.is_node(e)) continue;
        if (o.g.loop(e)) return false;
        adj[o.tail[e]].push_back(head_of(o, e));
    }
    std::vector<int> state(n, 0);
    std::function<bool(int)> dfs = [&](int v) {
        state[v] = 1;
        for (int w : adj[v]) {
            if (state[w] == 1) return true;
            if (state[w] == 0 && dfs(w)) return true;
        }
        state[v] = 2;
        return false;
    };
    for (int v = 0; v < n; ++v)
        if (state[v] == 0 && dfs(v)) return false;
    return true;
}

bool reachable_oriented(const PartialOrientation& o, int from, int to) {
    std::vector<char> seen(o.g.n_comp, 0);
    std::vector<int> stack{from};
    seen[from] = 1;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        if (v == to) return true;
        for (int e : outgoing(o, v)) {
            int w = head_of(o, e);
            if (w >= 0 && !seen[w]) {
                seen[w] = 1;
                stack.push_back(w);
            }
        }
    }
    return false;
}

} // namespace

bool is_realizable(const PartialOrientation& o) {
    validate_partial_orientation(o);
    for (int v = 0; v < o.g.n_comp; ++v)
        if (outgoing(o, v).empty()) return false;
    bool sink = false;
    for (int v = 0; v < o.g.n_comp; ++v) {
        auto out = outgoing(o, v);
        if (out.empty()) continue;
        bool all_marked = true;
        for (int e : out)
            if (o.g.is_node(e)) all_marked = false;
        if (all_marked) sink = true;
    }
    if (!sink) return false;
    return oriented_cycle_free(o);
}

bool nest_compatible(const PartialOrientation& o, const Nest& f) {
    auto d = validate_nest(o.g, f);
    if (!d.ok) return false;
    for (int v = 0; v < o.g.n_comp; ++v) {
        int lo = 1 << 29;
        for (int e : o.g.star(v)) lo = std::min(lo, f.level[e]);
        for (int e : o.g.star(v)) {
            bool min_here = f.level[e] == lo;
            bool out_here = o.tail[e] == v;
            if (min_here != out_here) return false;
        }
    }
    return true;
}

Nest nest_from_orientation(const PartialOrientation& o) {
    if (!is_realizable(o)) throw PreconditionError("nest_from_orientation: not realizable");
    std::vector<int> d(o.g.n_comp, -1);
    std::function<int(int)> depth = [&](int v) -> int {
        if (d[v] >= 0) return d[v];
        d[v] = 0; // realizability guarantees some outgoing edge and no cycles
        int best = 0;
        for (int e : outgoing(o, v)) {
            int w = head_of(o, e);
            best = std::max(best, w < 0 ? 0 : 1 + depth(w));
        }
        return d[v] = best;
    };
    Nest f{std::vector<int>(o.g.edge_count(), 0)};
    for (int e = 0; e < o.g.edge_count(); ++e) {
        if (o.tail[e] != -1) {
            f.level[e] = depth(o.tail[e]);
        } else {
            int mx = 0;
            for (int v : o.g.ends(e)) mx = std::max(mx, depth(v));
            f.level[e] = 1 + mx;
        }
    }
    auto diag = validate_nest(o.g, f);
    check_internal(diag.ok, "nest_from_orientation: result not a nest");
    check_internal(nest_compatible(o, f), "nest_from_orientation: result not compatible");
    return f;
}

bool is_essential(const PartialOrientation& o, int edge) {
    if (o.tail[edge] != -1 || !o.g.is_node(edge)) return false;
    int u = o.g.edges[edge].u, v = o.g.edges[edge].v;
    if (u == v) return false;
    return reachable_oriented(o, u, v) || reachable_oriented(o, v, u);
}

bool is_contractible(const PartialOrientation& o, int edge) {
    if (!o.g.is_node(edge)) return false;
    if (o.tail[edge] != -1) return true;
    return !is_essential(o, edge);
}

ContractingSequence contracting_sequence(const PartialOrientation& o, int edge) {
    if (!is_realizable(o)) throw PreconditionError("contracting_sequence: not realizable");
    if (!is_contractible(o, edge)) throw PreconditionError("contracting_sequence: essential edge");
    ContractingSequence cs;
    cs.step = o;
    if (o.tail[edge] != -1) {
        for (int e : outgoing(o, o.tail[edge]))
            if (e != edge) cs.step.tail[e] = -1;
    }
    StratumCollapse sc = collapse_stratum_edges(o.g, {edge});
    cs.collapsed.g = sc.graph;
    cs.collapsed.tail.assign(sc.graph.edge_count(), -1);
    for (int e = 0; e < o.g.edge_count(); ++e) {
        if (sc.edge_map[e] < 0) continue;
        if (cs.step.tail[e] != -1) cs.collapsed.tail[sc.edge_map[e]] = sc.vertex_map[cs.step.tail[e]];
    }
    cs.edge_map = std::move(sc.edge_map);
    cs.vertex_map = std::move(sc.vertex_map);
    check_internal(is_realizable(cs.collapsed), "contracting_sequence: collapsed state unrealizable");
    return cs;
}

// ---------------------------------------------------------------------------
// Projection and assembly.
// ---------------------------------------------------------------------------

StratumPoint psi(const ScreenPoint& pt, const AmbientLabels& labels) {
    for (int v = 0; v < pt.fs.g.vertex_count(); ++v)
        if (pt.fs.g.punctured(v))
            throw PreconditionError("psi: ambient graph must have all punctures decorated");
    PiResult pr = project_pi_full(pt, labels);
    const PairedFatgraph& pg = pr.pg;
    StratumOfPairing so = orientation_from_pairing(pg);

    StratumPoint sp;
    sp.sg = so.orientation.g;
    sp.edge_slots = so.edge_slots;
    sp.curve_family_label = pg.curve_family_label;
    for (const auto& c : pg.components) {
        StratumComponent sc;
        sc.graph = c.graph;
        sc.needs_reduction = false;
        sc.coords = c.weights;
        sc.isotopy_label = c.isotopy_label;
        sc.face_labels = c.face_labels;
        sc.star_labels = c.star_labels;
        sp.components.push_back(std::move(sc));
    }
    // levels and coordinates of the pinch curves carried by the edges
    std::vector<int> curve_level(sp.sg.edge_count(), -1);
    sp.edge_coord.assign(sp.sg.edge_count(), Rat(0));
    int npair = static_cast<int>(pg.pairings.size());
    for (int e = 0; e < npair; ++e) {
        curve_level[e] = pr.pairing_curve[e].first;
        sp.edge_coord[e] = pr.pairing_curve[e].second;
    }
    for (int e = npair; e < sp.sg.edge_count(); ++e) {
        const SlotRef& s = sp.edge_slots[e][0];
        const auto& comp = pg.components[s.component];
        if (s.kind == SlotRef::Kind::Face) {
            curve_level[e] = comp.level;
            Rat c = 0;
            for (int h : comp.graph.boundary_cycles()[s.index])
                c += comp.weights[comp.graph.edge_of(h)];
            sp.edge_coord[e] = c;
        } else {
            auto it = pr.star_curve.find({s.component, s.index});
            check_internal(it != pr.star_curve.end(), "psi: undecorated puncture without curve data");
            curve_level[e] = it->second.first;
            sp.edge_coord[e] = it->second.second;
        }
    }
    // nest = dense rank of curve levels
    std::set<int> values(curve_level.begin(), curve_level.end());
    std::map<int, int> rank;
    for (int v : values) rank[v] = static_cast<int>(rank.size());
    sp.nest.level.assign(sp.sg.edge_count(), 0);
    for (int e = 0; e < sp.sg.edge_count(); ++e) sp.nest.level[e] = rank[curve_level[e]];
    auto d = validate_nest(sp.sg, sp.nest);
    check_internal(d.ok, "psi: levels do not form a nest");
    check_internal(nest_compatible(so.orientation, sp.nest),
                   "psi: nest incompatible with the pairing orientation");
    return sp;
}

PairedFatgraph chi_combinatorial(const StratumPoint& sp) {
    validate_stratum_graph(sp.sg);
    auto d = validate_nest(sp.sg, sp.nest);
    if (!d.ok) throw PreconditionError("chi: invalid nest");
    if (static_cast<int>(sp.components.size()) != sp.sg.n_comp)
        throw PreconditionError("chi: component count mismatch");

    PairedFatgraph out;
    out.curve_family_label = sp.curve_family_label;
    for (const auto& sc : sp.components) {
        PairedComponent pc;
        if (sc.needs_reduction) {
            LambdaAssignment l{sc.coords};
            QcdResult q = flip_to_qcd(sc.graph, l);
            pc.graph = q.graph;
            pc.weights = q.x.x;
        } else {
            pc.graph = sc.graph;
            pc.weights = sc.coords;
        }
        pc.isotopy_label = sc.isotopy_label;
        pc.face_labels = sc.face_labels;
        pc.star_labels = sc.star_labels;
        if (pc.face_labels.empty())
            pc.face_labels.assign(pc.graph.boundary_cycles().size(), -1);
        if (pc.star_labels.empty()) pc.star_labels.assign(pc.graph.vertex_count(), -1);
        out.components.push_back(std::move(pc));
    }
    // decorated slots must sit exactly on least-level edges
    auto min_at = [&](int v) {
        int lo = 1 << 29;
        for (int e : sp.sg.star(v)) lo = std::min(lo, sp.nest.level[e]);
        return lo;
    };
    for (int e = 0; e < sp.sg.edge_count(); ++e) {
        for (const SlotRef& s : sp.edge_slots[e]) {
            bool min_here = sp.nest.level[e] == min_at(s.component);
            bool decorated = s.kind == SlotRef::Kind::Face;
            if (decorated != min_here)
                throw PreconditionError("chi: decoration pattern conflicts with the nest");
        }
        if (sp.sg.is_node(e)) {
            if (sp.edge_slots[e].size() != 2) throw PreconditionError("chi: node without two slots");
            out.pairings.push_back({sp.edge_slots[e][0], sp.edge_slots[e][1]});
        }
    }
    // component levels: least level around the vertex (its decorated depth)
    for (int v = 0; v < sp.sg.n_comp; ++v) out.components[v].level = min_at(v);
    check_internal(validate_pairing(out).ok, "chi: invalid assembled pairing");
    return out;
}

FlowState theorem_flow_step(const FlowState& s) {
    if (!is_realizable(s.orientation)) throw PreconditionError("flow step: unrealizable state");
    PartialOrientation o = s.orientation;
    std::vector<Rat> coord = s.coord;
    bool all_contractible_before = true;
    for (int e = 0; e < o.g.edge_count(); ++e)
        if (o.g.is_node(e) && !is_contractible(o, e)) all_contractible_before = false;

    auto min_out_coord = [&](const PartialOrientation& oo, int v) {
        Rat best;
        bool have = false;
        for (int e : outgoing(oo, v)) {
            if (!have || coord[e] < best) {
                best = coord[e];
                have = true;
            }
        }
        check_internal(have, "flow step: vertex without decorated slot");
        return best;
    };

    // phase 1: orient essential edges along their forced direction
    {
        std::vector<std::pair<int, int>> to_orient; // (edge, tail)
        for (int e = 0; e < o.g.edge_count(); ++e) {
            if (!o.g.is_node(e) || o.tail[e] != -1) continue;
            int u = o.g.edges[e].u, v = o.g.edges[e].v;
            if (u == v) continue;
            bool uv = reachable_oriented(o, u, v), vu = reachable_oriented(o, v, u);
            check_internal(!(uv && vu), "flow step: oriented cycle hiding");
            if (uv) to_orient.push_back({e, u});
            else if (vu) to_orient.push_back({e, v});
        }
        for (auto& [e, t] : to_orient) {
            coord[e] = min_out_coord(o, t);
            o.tail[e] = t;
        }
        check_internal(is_realizable(o), "flow step: phase one broke realizability");
    }

    // phase 2: orient inessential edges across unequal least levels
    {
        Nest f = nest_from_orientation(o);
        auto min_at = [&](int v) {
            int lo = 1 << 29;
            for (int e : o.g.star(v)) lo = std::min(lo, f.level[e]);
            return lo;
        };
        std::vector<std::pair<int, int>> to_orient;
        for (int e = 0; e < o.g.edge_count(); ++e) {
            if (!o.g.is_node(e) || o.tail[e] != -1) continue;
            int u = o.g.edges[e].u, v = o.g.edges[e].v;
            if (u == v) continue;
            if (min_at(u) > min_at(v)) to_orient.push_back({e, u});
            else if (min_at(v) > min_at(u)) to_orient.push_back({e, v});
        }
        for (auto& [e, t] : to_orient) {
            coord[e] = min_out_coord(o, t);
            o.tail[e] = t;
        }
        check_internal(is_realizable(o), "flow step: phase two broke realizability");
    }

    // phase 3: lower the free excess of the minimal nest and re-derive the
    // compatible orientation
    Nest f = nest_from_orientation(o);
    std::vector<int> excess = excess_edges(o.g, f);
    Nest fprime = f;
    if (!excess.empty()) {
        std::vector<int> free = maximal_free_subset(o.g, f, excess);
        check_internal(!free.empty(), "flow step: stuck above the canonical nest");
        fprime = floor_nest(o.g, lower_levels(f, free));
        auto dd = validate_nest(o.g, fprime);
        check_internal(dd.ok, "flow step: lowered function is not a nest");
    }
    PartialOrientation o2{o.g, std::vector<int>(o.g.edge_count(), -1)};
    auto min_at2 = [&](int v) {
        int lo = 1 << 29;
        for (int e : o.g.star(v)) lo = std::min(lo, fprime.level[e]);
        return lo;
    };
    for (int v = 0; v < o.g.n_comp; ++v) {
        for (int e : o.g.star(v)) {
            if (fprime.level[e] != min_at2(v)) continue;
            if (o.g.loop(e)) throw InternalInvariantError("flow step: minimal loop");
            check_internal(o2.tail[e] == -1 || o2.tail[e] == v,
                           "flow step: edge minimal at both endpoints");
            o2.tail[e] = v;
        }
    }
    // decorations: per vertex, new minimal edges take the least value on the
    // surviving minimal ones
    for (int v = 0; v < o.g.n_comp; ++v) {
        Rat keep;
        bool have = false;
        for (int e : o.g.star(v)) {
            if (o2.tail[e] == v && o.tail[e] == v) {
                if (!have || coord[e] < keep) {
                    keep = coord[e];
                    have = true;
                }
            }
        }
        if (!have) continue; // no new decoration sourced at v
        for (int e : o.g.star(v))
            if (o2.tail[e] == v && o.tail[e] != v) coord[e] = keep;
    }
    check_internal(is_realizable(o2), "flow step: derived orientation unrealizable");
    Nest f2 = nest_from_orientation(o2);
    check_internal(nest_compatible(o2, f2), "flow step: lost compatibility");

    // re-projectivize within the comparability classes of the new nest
    int mx = *std::max_element(f2.level.begin(), f2.level.end());
    for (int k = 0; k <= mx; ++k) {
        Rat total = 0;
        for (int e = 0; e < o.g.edge_count(); ++e)
            if (f2.level[e] == k) total += coord[e];
        if (total > 0)
            for (int e = 0; e < o.g.edge_count(); ++e)
                if (f2.level[e] == k) coord[e] = coord[e] / total;
    }

    if (all_contractible_before) {
        for (int e = 0; e < o.g.edge_count(); ++e)
            if (o.g.is_node(e))
                check_internal(is_contractible(o2, e),
                               "flow step: contractibility not preserved");
    }
    return FlowState{std::move(o2), std::move(f2), std::move(coord)};
}

NestCell stratum_point_cell(const StratumPoint& sp) {
    NestCell c;
    c.nest = sp.nest;
    int mx = *std::max_element(sp.nest.level.begin(), sp.nest.level.end());
    c.classes.assign(mx + 1, {});
    c.weights.assign(mx + 1, {});
    for (int e = 0; e < sp.sg.edge_count(); ++e) {
        c.classes[sp.nest.level[e]].push_back(e);
        c.weights[sp.nest.level[e]].push_back(sp.edge_coord[e]);
    }
    for (auto& w : c.weights) w = projectivize(w);
    validate_nest_cell(sp.sg, c);
    return c;
}

bool flow_fixed_point(const FlowState& s) {
    for (int e = 0; e < s.orientation.g.edge_count(); ++e)
        if (is_essential(s.orientation, e)) return false;
    Nest f = nest_from_orientation(s.orientation);
    auto min_at = [&](int v) {
        int lo = 1 << 29;
        for (int e : s.orientation.g.star(v)) lo = std::min(lo, f.level[e]);
        return lo;
    };
    for (int e = 0; e < s.orientation.g.edge_count(); ++e) {
        if (!s.orientation.g.is_node(e) || s.orientation.tail[e] != -1) continue;
        int u = s.orientation.g.edges[e].u, v = s.orientation.g.edges[e].v;
        if (u != v && min_at(u) != min_at(v)) return false;
    }
    return excess_edges(s.orientation.g, f).empty();
}

} // namespace pgc
