#ifndef PGC_STRATA_HPP
#define PGC_STRATA_HPP

#include <string>
#include <vector>

#include "pgc/errors.hpp"
#include "pgc/rational.hpp"

namespace pgc {

// Dual graph of a degenerate surface: one vertex per irreducible component,
// a node edge (N) per double point joining the components on its two sides
// (loops allowed), and a puncture edge (P) per original puncture, running to
// its own univalent marked vertex. Connected, with at least one P edge.
struct StratumGraph {
    struct SEdge {
        bool is_node = true;
        int u = -1; // component vertex
        int v = -1; // component vertex for N edges; -1 (the marked end) for P
    };
    int n_comp = 0;
    std::vector<SEdge> edges;

    int edge_count() const { return static_cast<int>(edges.size()); }
    bool is_node(int e) const { return edges[e].is_node; }
    // Non-marked endpoints of edge e (one or two entries; loops repeat).
    std::vector<int> ends(int e) const {
        if (!edges[e].is_node) return {edges[e].u};
        return {edges[e].u, edges[e].v};
    }
    bool loop(int e) const { return edges[e].is_node && edges[e].u == edges[e].v; }
    std::vector<int> star(int v) const; // edges incident to component vertex v
    bool adjacent(int e, int f) const;  // share a component vertex
    bool operator==(const StratumGraph&) const = default;
};

void validate_stratum_graph(const StratumGraph& g);

// Level function on the edges: some P edge at level zero, positive levels on
// N edges, every N edge has a strictly lower neighbor, and the levels used
// form an initial segment of the naturals.
struct Nest {
    std::vector<int> level;
};

struct NestDiagnostics {
    bool ok = true;
    int failed_condition = 0; // 1..4 per the definition, 0 when ok
    std::string detail;
};

NestDiagnostics validate_nest(const StratumGraph& g, const Nest& f);

// Levels by least number of non-marked vertices on a path to a marked one.
Nest canonical_nest(const StratumGraph& g);

// Dense relabeling: level = number of strictly smaller nonempty classes.
// Requires conditions 1-3; restores condition 4.
Nest floor_nest(const StratumGraph& g, const Nest& f);

// Doubles all levels and lowers the set M by one, isolating M's edges in
// fresh classes just below their old ones; result is floored. M must avoid
// level zero.
Nest insert_isolating_levels(const StratumGraph& g, const Nest& f, const std::vector<int>& m);

// f with M lowered by one (no flooring).
Nest lower_levels(const Nest& f, const std::vector<int>& m);

// Edges made inadmissible by lowering M: node edges with no strictly lower
// neighbor afterwards. Computed from the definition and from the local
// two-case characterization, which are asserted equal.
std::vector<int> obstruction_set(const StratumGraph& g, const Nest& f, const std::vector<int>& m);

// Collapses a set of node edges: non-loops contract, loops (at the time of
// collapse) simply disappear; other edges keep their endpoints' images.
struct StratumCollapse {
    StratumGraph graph;
    std::vector<int> edge_map;   // old edge -> new edge, -1 if collapsed
    std::vector<int> vertex_map; // old component vertex -> new
};

StratumCollapse collapse_stratum_edges(const StratumGraph& g, const std::vector<int>& edges);

// Lowers M by one, collapses the obstructed edges, restricts and floors;
// the result is a nest on the collapsed graph.
struct DecreaseResult {
    StratumGraph graph;
    Nest nest;
    std::vector<int> edge_map;
    std::vector<int> collapsed; // the obstruction set that was collapsed
};

DecreaseResult decrease_level(const StratumGraph& g, const Nest& f, const std::vector<int>& m);

// Largest subset of M whose lowering needs no collapse. Unique: sets with
// empty obstruction are closed under union, and iteratively discarding
// obstructed edges converges to the maximum (cross-checked exhaustively in
// the tests).
std::vector<int> maximal_free_subset(const StratumGraph& g, const Nest& f,
                                     const std::vector<int>& m);

// Canonical flow: repeatedly lower the maximal free subset of the edges
// sitting above the canonical nest. Terminates at the canonical nest.
std::vector<Nest> mring_flow(const StratumGraph& g, const Nest& f);

// Weighted point of the cell attached to a nest: positive weights per level
// class, each class summing to one.
struct NestCell {
    Nest nest;
    std::vector<std::vector<Rat>> weights; // per level, aligned with class members
    std::vector<std::vector<int>> classes; // edge ids per level
};

void validate_nest_cell(const StratumGraph& g, const NestCell& c);

// Codimension-one faces of the cell attached to f.
struct NestFace {
    bool cross_stratum = false;
    Nest nest;             // within-fiber face (coalesced levels), valid when !cross_stratum
    DecreaseResult lower;  // collapsed-graph identification for cross-stratum faces
    int level = 0;         // the level that was coalesced or collapsed
};

std::vector<NestFace> nest_faces(const StratumGraph& g, const Nest& f);

// Edges a nest sits strictly above the canonical nest on.
std::vector<int> excess_edges(const StratumGraph& g, const Nest& f);

// M is collapsable when lowering it obstructs exactly M itself.
bool is_collapsable_set(const StratumGraph& g, const Nest& f, const std::vector<int>& m);

} // namespace pgc

#endif
