#ifndef PGC_COORDS_HPP
#define PGC_COORDS_HPP

#include <cstdint>
#include <random>
#include <vector>

#include "pgc/fatgraph.hpp"
#include "pgc/rational.hpp"

namespace pgc {

// Positive edge lengths on a quasi triangulation (one value per edge).
struct LambdaAssignment {
    std::vector<Rat> lambda;
};

// Nonnegative per-edge coordinates (the derived coordinates on cells).
struct SimplicialAssignment {
    std::vector<Rat> x;
};

// One value per half-edge h: the horocyclic arc in the sector between h and
// rot(h) at their vertex. At a trivalent vertex with rotation (h, p, q) the
// value is lambda(q) / (lambda(h) lambda(p)); at a univalent punctured vertex
// it is 2 / lambda(h).
struct CornerHLengths {
    std::vector<Rat> corner;
};

bool lambda_positive(const Fatgraph& g, const LambdaAssignment& l);

// Strict triangle inequalities in every triangle (monogons impose nothing).
// Holds automatically when all simplicial coordinates are nonnegative; it is
// a validity predicate, not an invariant of every assignment.
bool lambda_valid(const Fatgraph& g, const LambdaAssignment& l);

CornerHLengths h_lengths(const Fatgraph& g, const LambdaAssignment& l);

// Horocycle length at boundary cycle f: sum of its corner h-lengths.
Rat horocycle_length(const Fatgraph& g, const CornerHLengths& hl, int face);

// X(e) as the signed combination of nearby h-lengths: each side of e
// contributes (a^2 + b^2 - e^2)/(a b e) across a triangle with other sides
// a, b, and 2/e across a once-punctured monogon.
SimplicialAssignment simplicial_coordinates(const Fatgraph& g, const LambdaAssignment& l);

// True iff lambda(e) * X(e) <= 4 for every edge. The bound is guaranteed for
// valid assignments; the predicate still evaluates on invalid ones.
bool product_bound_check(const Fatgraph& g, const LambdaAssignment& l);

// Exchanges the diagonal of the quadrilateral around edge e; both endpoints
// must be distinct trivalent unpunctured vertices. With frontier a, b, c, d
// in cyclic order the new length is (ac + bd) / e. Pure rotation surgery:
// half-edge and edge identities are preserved.
struct FlipResult {
    Fatgraph graph;
    LambdaAssignment lambda;
};

bool quad_flippable(const Fatgraph& g, Edge e);
FlipResult ptolemy_flip(const Fatgraph& g, const LambdaAssignment& l, Edge e);

// Exchanges the arc of a once-punctured bigon: e runs from a univalent
// punctured vertex to a trivalent vertex whose other edges a, b bound the
// bigon; the two such arcs satisfy e * e' = (a + b)^2. Also pure rotation
// surgery.
bool monogon_flippable(const Fatgraph& g, Edge e);
FlipResult monogon_flip(const Fatgraph& g, const LambdaAssignment& l, Edge e);

// (sum of X over the walk, twice the sum of included corner h-lengths);
// the two agree for every quasi efficient closed walk.
std::pair<Rat, Rat> telescoping_sum(const Fatgraph& g, const LambdaAssignment& l,
                                    const std::vector<HalfEdge>& walk);

enum class FlipOrder { LowestIndex, Random };

// Flips negative-coordinate edges until all X >= 0, then deletes the X = 0
// arcs (collapsing their duals; the zero set is checked to contain no quasi
// efficient cycle first). The result does not depend on the flip order.
// Iteration cap: 10 * edges^2 flips; exceeding it signals a bug.
struct QcdResult {
    Fatgraph graph;               // all surviving X > 0
    SimplicialAssignment x;       // on the surviving graph
    std::vector<int> edge_map;    // input edge -> surviving edge, -1 if deleted
    Fatgraph flipped_graph;       // after flips, before zero-arc deletion
    SimplicialAssignment flipped_x;
    LambdaAssignment flipped_lambda;
    int flips = 0;
};

QcdResult flip_to_qcd(const Fatgraph& g, const LambdaAssignment& l,
                      FlipOrder order = FlipOrder::LowestIndex, std::uint64_t seed = 0);

// Test-support generators: a near-unit assignment always satisfies the
// strict triangle inequalities.
LambdaAssignment near_unit_lambda(const Fatgraph& g, std::mt19937_64& rng);

} // namespace pgc

#endif
