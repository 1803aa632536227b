#include "pgc/coords.hpp"

#include <algorithm>

namespace pgc {

namespace {

void require_quasi_triangulation(const Fatgraph& g) {
    if (!g.is_quasi_triangulation())
        throw PreconditionError("operation requires a quasi triangulation");
}

void require_sizes(const Fatgraph& g, const LambdaAssignment& l) {
    if (static_cast<int>(l.lambda.size()) != g.edge_count())
        throw PreconditionError("lambda assignment size mismatch");
}

} // namespace

bool lambda_positive(const Fatgraph& g, const LambdaAssignment& l) {
    if (static_cast<int>(l.lambda.size()) != g.edge_count()) return false;
    for (const Rat& q : l.lambda)
        if (q <= 0) return false;
    return true;
}

bool lambda_valid(const Fatgraph& g, const LambdaAssignment& l) {
    if (!lambda_positive(g, l)) return false;
    for (int v = 0; v < g.vertex_count(); ++v) {
        if (g.punctured(v)) continue; // monogon regions impose nothing
        const auto& hs = g.vertex_halves(v);
        if (hs.size() != 3) return false;
        Rat a = l.lambda[g.edge_of(hs[0])];
        Rat b = l.lambda[g.edge_of(hs[1])];
        Rat c = l.lambda[g.edge_of(hs[2])];
        if (!(a < b + c && b < a + c && c < a + b)) return false;
    }
    return true;
}

CornerHLengths h_lengths(const Fatgraph& g, const LambdaAssignment& l) {
    require_quasi_triangulation(g);
    require_sizes(g, l);
    CornerHLengths out;
    out.corner.assign(g.half_edges(), Rat(0));
    for (int h = 0; h < g.half_edges(); ++h) {
        Vertex v = g.vertex_of(h);
        if (g.punctured(v)) {
            out.corner[h] = Rat(2) / l.lambda[g.edge_of(h)];
        } else {
            int p = g.rot(h), q = g.rot(p);
            out.corner[h] =
                l.lambda[g.edge_of(q)] / (l.lambda[g.edge_of(h)] * l.lambda[g.edge_of(p)]);
        }
    }
    return out;
}

Rat horocycle_length(const Fatgraph& g, const CornerHLengths& hl, int face) {
    // The sector between h and rot(h) is crossed by the boundary cycle
    // containing rot(h); summing over the face's walk picks up each of its
    // corners exactly once, as the sector keyed by rot_prev of each element.
    Rat s = 0;
    for (int h : g.boundary_cycles()[face]) s += hl.corner[g.rot_prev(h)];
    return s;
}

SimplicialAssignment simplicial_coordinates(const Fatgraph& g, const LambdaAssignment& l) {
    require_quasi_triangulation(g);
    require_sizes(g, l);
    SimplicialAssignment out;
    out.x.assign(g.edge_count(), Rat(0));
    for (int e = 0; e < g.edge_count(); ++e) {
        Rat total = 0;
        const Rat& le = l.lambda[e];
        for (int h : g.edge_halves(e)) {
            Vertex v = g.vertex_of(h);
            if (g.punctured(v)) {
                total += Rat(2) / le;
            } else {
                int p = g.rot(h), q = g.rot(p);
                const Rat& a = l.lambda[g.edge_of(p)];
                const Rat& b = l.lambda[g.edge_of(q)];
                total += (a * a + b * b - le * le) / (a * b * le);
            }
        }
        out.x[e] = total;
    }
    return out;
}

bool product_bound_check(const Fatgraph& g, const LambdaAssignment& l) {
    SimplicialAssignment x = simplicial_coordinates(g, l);
    for (int e = 0; e < g.edge_count(); ++e) {
        Rat prod = l.lambda[e] * x.x[e];
        if (prod > 4) return false;
    }
    return true;
}

bool quad_flippable(const Fatgraph& g, Edge e) {
    auto [h, hp] = g.edge_halves(e);
    Vertex u = g.vertex_of(h), v = g.vertex_of(hp);
    if (u == v) return false;
    return g.valence(u) == 3 && g.valence(v) == 3 && !g.punctured(u) && !g.punctured(v);
}

FlipResult ptolemy_flip(const Fatgraph& g, const LambdaAssignment& l, Edge e) {
    require_sizes(g, l);
    if (!quad_flippable(g, e))
        throw PreconditionError("ptolemy_flip: edge is not the diagonal of a quadrilateral");
    auto [h, hp] = g.edge_halves(e);
    int p = g.rot(h), q = g.rot(p);    // at the h endpoint
    int r = g.rot(hp), s = g.rot(r);   // at the other endpoint
    const Rat& a = l.lambda[g.edge_of(p)];
    const Rat& b = l.lambda[g.edge_of(q)];
    const Rat& c = l.lambda[g.edge_of(r)];
    const Rat& d = l.lambda[g.edge_of(s)];
    Rat f = (a * c + b * d) / l.lambda[e];

    // Rotation surgery only: the flipped diagonal keeps the half-edges h, hp
    // but the two triangles regroup as (h, s, p) and (hp, q, r).
    std::vector<int> rt(g.half_edges());
    for (int x = 0; x < g.half_edges(); ++x) rt[x] = g.rot(x);
    rt[h] = s;
    rt[s] = p;
    rt[p] = h;
    rt[hp] = q;
    rt[q] = r;
    rt[r] = hp;
    std::vector<int> pr(g.half_edges());
    std::vector<char> pu(g.half_edges());
    for (int x = 0; x < g.half_edges(); ++x) {
        pr[x] = g.pair(x);
        pu[x] = g.punctured_at(x);
    }
    FlipResult out{Fatgraph(std::move(pr), std::move(rt), std::move(pu)), l};
    out.lambda.lambda[e] = f;
    return out;
}

bool monogon_flippable(const Fatgraph& g, Edge e) {
    auto [h, hp] = g.edge_halves(e);
    for (int x : {h, hp}) {
        Vertex w = g.vertex_of(x), u = g.vertex_of(g.pair(x));
        if (g.punctured(w) && g.valence(w) == 1 && !g.punctured(u) && g.valence(u) == 3 &&
            w != u)
            return true;
    }
    return false;
}

FlipResult monogon_flip(const Fatgraph& g, const LambdaAssignment& l, Edge e) {
    require_sizes(g, l);
    if (!monogon_flippable(g, e))
        throw PreconditionError("monogon_flip: edge does not bound a once-punctured monogon");
    auto [h, hp] = g.edge_halves(e);
    if (!(g.punctured_at(h) && g.valence(g.vertex_of(h)) == 1)) std::swap(h, hp);
    // h sits at the punctured univalent vertex, hp at the trivalent one.
    int p = g.rot(hp), q = g.rot(p); // sides of the enclosing bigon
    const Rat& a = l.lambda[g.edge_of(p)];
    const Rat& b = l.lambda[g.edge_of(q)];
    Rat sum = a + b;
    Rat f = sum * sum / l.lambda[e];

    // The bigon's other arc attaches at its other corner: swap the two sides
    // in the rotation at the trivalent vertex.
    std::vector<int> rt(g.half_edges());
    for (int x = 0; x < g.half_edges(); ++x) rt[x] = g.rot(x);
    rt[hp] = q;
    rt[q] = p;
    rt[p] = hp;
    std::vector<int> pr(g.half_edges());
    std::vector<char> pu(g.half_edges());
    for (int x = 0; x < g.half_edges(); ++x) {
        pr[x] = g.pair(x);
        pu[x] = g.punctured_at(x);
    }
    FlipResult out{Fatgraph(std::move(pr), std::move(rt), std::move(pu)), l};
    out.lambda.lambda[e] = f;
    return out;
}

std::pair<Rat, Rat> telescoping_sum(const Fatgraph& g, const LambdaAssignment& l,
                                    const std::vector<HalfEdge>& walk) {
    require_quasi_triangulation(g);
    if (!is_quasi_efficient_walk(g, walk))
        throw PreconditionError("telescoping_sum: walk is not quasi efficient");
    SimplicialAssignment x = simplicial_coordinates(g, l);
    CornerHLengths hl = h_lengths(g, l);
    Rat sum_x = 0, sum_a = 0;
    std::size_t k = walk.size();
    for (std::size_t i = 0; i < k; ++i) {
        int d = walk[i], next = walk[(i + 1) % k];
        sum_x += x.x[g.edge_of(d)];
        // included corner between the arriving half pair(d) and the leaving
        // half `next`; at a trivalent vertex they are rotation-adjacent one
        // way or the other, at a punctured univalent vertex they coincide
        int in = g.pair(d);
        if (g.rot(in) == next) sum_a += hl.corner[in];
        else if (g.rot(next) == in) sum_a += hl.corner[next];
        else if (in == next) sum_a += hl.corner[in];
        else throw InternalInvariantError("telescoping_sum: non-adjacent consecutive edges");
    }
    return {sum_x, Rat(2) * sum_a};
}

QcdResult flip_to_qcd(const Fatgraph& g, const LambdaAssignment& l, FlipOrder order,
                      std::uint64_t seed) {
    require_quasi_triangulation(g);
    if (!lambda_positive(g, l)) throw PreconditionError("flip_to_qcd: lambda not positive");
    Fatgraph cur = g;
    LambdaAssignment lam = l;
    std::mt19937_64 rng(seed);
    const int cap = 10 * g.edge_count() * g.edge_count() + 10;
    int flips = 0;
    SimplicialAssignment x = simplicial_coordinates(cur, lam);
    for (;;) {
        std::vector<Edge> negative;
        for (int e = 0; e < cur.edge_count(); ++e)
            if (x.x[e] < 0) negative.push_back(e);
        if (negative.empty()) break;
        Edge pick = negative.front();
        if (order == FlipOrder::Random && negative.size() > 1)
            pick = negative[rng() % negative.size()];
        FlipResult fr = quad_flippable(cur, pick) ? ptolemy_flip(cur, lam, pick)
                                                  : monogon_flip(cur, lam, pick);
        cur = std::move(fr.graph);
        lam = std::move(fr.lambda);
        x = simplicial_coordinates(cur, lam);
        if (++flips > cap)
            throw InternalInvariantError("flip_to_qcd: iteration cap exceeded");
    }

    // Zero arcs: must contain no quasi efficient cycle, hence collapse as a
    // forest of dual edges.
    std::vector<Edge> zeros;
    for (int e = 0; e < cur.edge_count(); ++e)
        if (x.x[e] == 0) zeros.push_back(e);
    check_internal(maximal_quasi_recurrent(cur, zeros).empty(),
                   "flip_to_qcd: vanishing arcs contain a quasi efficient cycle");

    QcdResult out{cur, x, {}, cur, x, lam, flips};
    out.edge_map.resize(cur.edge_count());
    for (int e = 0; e < cur.edge_count(); ++e) out.edge_map[e] = e;
    Fatgraph work = cur;
    std::vector<Rat> xs = x.x;
    bool again = true;
    while (again) {
        again = false;
        for (int e = 0; e < work.edge_count(); ++e) {
            if (xs[e] != 0) continue;
            CollapseResult cr = collapse_edge(work, e);
            std::vector<Rat> nxs(cr.graph.edge_count());
            for (int old = 0; old < work.edge_count(); ++old)
                if (cr.edge_map[old] >= 0) nxs[cr.edge_map[old]] = xs[old];
            for (int orig = 0; orig < cur.edge_count(); ++orig)
                if (out.edge_map[orig] >= 0) out.edge_map[orig] = cr.edge_map[out.edge_map[orig]];
            work = std::move(cr.graph);
            xs = std::move(nxs);
            again = true;
            break;
        }
    }
    out.graph = std::move(work);
    out.x.x = std::move(xs);
    return out;
}

LambdaAssignment near_unit_lambda(const Fatgraph& g, std::mt19937_64& rng) {
    // values in [1, 5/4]: any three satisfy the strict triangle inequalities
    LambdaAssignment l;
    l.lambda.reserve(g.edge_count());
    for (int e = 0; e < g.edge_count(); ++e)
        l.lambda.push_back(Rat(1) + rat(static_cast<long>(rng() % 17), 68));
    return l;
}

} // namespace pgc
