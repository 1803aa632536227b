#ifndef PGC_FATGRAPH_HPP
#define PGC_FATGRAPH_HPP

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "pgc/errors.hpp"

namespace pgc {

using HalfEdge = int;
using Edge = int;
using Vertex = int;

// Genus / puncture data of the surface a connected fatgraph thickens to.
struct SurfaceType {
    int genus = 0;
    int punctures = 0;
    int euler = 0; // euler == 2 - 2*genus - punctures

    // Surfaces handled by the rest of the library: negative Euler
    // characteristic and at least one puncture.
    bool supported() const { return euler < 0 && punctures > 0; }
    bool operator==(const SurfaceType&) const = default;
};

// Ribbon graph on half-edges 0..2E-1.
//
//  * `pair` is a fixed-point-free involution; its orbits are the edges.
//  * `rot` is a permutation; its orbits are the vertices, and rot(h) is the
//    half-edge following h counterclockwise around their common vertex.
//  * A vertex may be marked punctured (its dual region carries an interior
//    puncture); the mark is stored uniformly on the orbit's half-edges.
//
// Face-tracing convention, used everywhere: the successor of h along its
// boundary cycle is rot(pair(h)). Orbits of this map are the boundary
// cycles; each corresponds to a puncture of the thickened surface.
//
// Values are immutable after construction and safe to share across threads.
class Fatgraph {
public:
    Fatgraph(std::vector<int> pair, std::vector<int> rot, std::vector<char> punctured_half);

    // Builds from explicit rotation cycles. Vertices are indexed by their
    // position in `rotation_cycles`; `punctured_vertices` refers to those
    // indices. Note vertex indices are re-derived (orbits sorted by least
    // half-edge), so query punctured() rather than assuming input order.
    static Fatgraph from_cycles(const std::vector<std::vector<int>>& rotation_cycles,
                                const std::vector<std::array<int, 2>>& pairs,
                                const std::vector<int>& punctured_vertices = {});

    int half_edges() const { return static_cast<int>(pair_.size()); }
    int edge_count() const { return static_cast<int>(edge_rep_.size()); }
    int vertex_count() const { return static_cast<int>(vertex_cycles_.size()); }

    HalfEdge pair(HalfEdge h) const { return pair_[h]; }
    HalfEdge rot(HalfEdge h) const { return rot_[h]; }
    HalfEdge rot_prev(HalfEdge h) const { return rot_prev_[h]; }
    HalfEdge face_next(HalfEdge h) const { return rot_[pair_[h]]; }

    Edge edge_of(HalfEdge h) const { return edge_of_[h]; }
    Vertex vertex_of(HalfEdge h) const { return vertex_of_[h]; }
    // The two half-edges of an edge, lesser first.
    std::array<HalfEdge, 2> edge_halves(Edge e) const {
        return {edge_rep_[e], pair_[edge_rep_[e]]};
    }
    // Half-edges around a vertex in rotation order, starting at the least.
    const std::vector<HalfEdge>& vertex_halves(Vertex v) const { return vertex_cycles_[v]; }
    int valence(Vertex v) const { return static_cast<int>(vertex_cycles_[v].size()); }
    bool punctured(Vertex v) const { return punct_[vertex_cycles_[v][0]] != 0; }
    bool punctured_at(HalfEdge h) const { return punct_[h] != 0; }
    int punctured_vertex_count() const;

    bool loop(Edge e) const {
        return vertex_of_[edge_rep_[e]] == vertex_of_[pair_[edge_rep_[e]]];
    }

    // Orbits of face_next; every half-edge appears in exactly one cycle.
    const std::vector<std::vector<HalfEdge>>& boundary_cycles() const { return faces_; }
    int face_of(HalfEdge h) const { return face_of_[h]; }

    bool connected() const;

    // Euler characteristic of the thickened punctured surface:
    // (#unpunctured vertices) - (#edges).
    int euler_characteristic() const;

    // Requires a connected graph. punctures = #boundary cycles + #punctured
    // vertices, genus from euler = 2 - 2g - s.
    SurfaceType surface_type() const;

    // Every vertex of valence 1 or 2 is punctured (necessary for duals of
    // arc families whose regions are polygons or once-punctured polygons).
    // Not an invariant of all values: subgraphs and intermediate surgeries
    // violate it freely.
    bool is_qcd_dual() const;

    // All regions are triangles or once-punctured monogons: every vertex is
    // either trivalent unpunctured or univalent punctured.
    bool is_quasi_triangulation() const;

    // Same half-edge set with permuted labels; test helper and census tool.
    Fatgraph relabel(const std::vector<int>& perm) const;

    bool operator==(const Fatgraph& o) const {
        return pair_ == o.pair_ && rot_ == o.rot_ && punct_ == o.punct_;
    }

private:
    std::vector<int> pair_, rot_, rot_prev_;
    std::vector<char> punct_; // per half-edge, uniform on each rotation orbit
    std::vector<int> vertex_of_, edge_of_, face_of_;
    std::vector<std::vector<int>> vertex_cycles_, faces_;
    std::vector<int> edge_rep_; // least half-edge of each edge

    void build_derived();
};

// Result of collapsing one edge: merged graph plus index maps from the old
// graph (collapsed edge maps to -1; the merged vertex keeps the surviving
// endpoints' mark rules).
struct CollapseResult {
    Fatgraph graph;
    std::vector<int> edge_map;   // old edge -> new edge, -1 for the collapsed one
    std::vector<int> half_map;   // old half -> new half, -1 for the two dead halves
};

// Collapses an edge with distinct endpoints, at most one punctured; the
// merged vertex inherits the cyclic orders spliced at the removed halves and
// is punctured iff either endpoint was.
CollapseResult collapse_edge(const Fatgraph& g, Edge e);

// Canonical labeling of a connected fatgraph. Two fatgraphs are isomorphic
// (preserving rotation, pairing and puncture marks) iff their encodings are
// equal; `automorphisms` is the order of the automorphism group.
struct CanonicalForm {
    std::vector<int> encoding;
    std::vector<int> relabel; // old half-edge -> canonical half-edge index
    long automorphisms = 0;
    bool operator==(const CanonicalForm& o) const { return encoding == o.encoding; }
};

CanonicalForm canonical_form(const Fatgraph& g);

// All relabelings old->canonical achieving the minimal encoding; they differ
// by automorphisms. Used for decoration-aware tie-breaking.
std::vector<std::vector<int>> minimal_relabelings(const Fatgraph& g);

// Edge -> canonical edge index (rank of the least canonical half-edge label).
std::vector<int> canonical_edge_order(const Fatgraph& g, const CanonicalForm& cf);

// ---------------------------------------------------------------------------
// Edge subsets and their induced subgraphs.
//
// A subset A of edges induces the smallest subgraph G(A) containing them:
// its vertices are the endpoints of A-edges, with valence counted in A.
// ---------------------------------------------------------------------------

std::vector<char> edge_set(const Fatgraph& g, const std::vector<Edge>& edges);

// Valence of v inside G(A).
int subgraph_valence(const Fatgraph& g, const std::vector<char>& in, Vertex v);

// Face walk of the standalone subgraph G(A), with the shallow half-edges
// ("stubs") hanging off each corner recorded in rotation order. Traversing
// walk[i] lands at a vertex; stubs[i] are the non-A half-edges encountered
// there between pair(walk[i]) and the next A-half-edge.
struct SubgraphFace {
    std::vector<HalfEdge> walk;
    std::vector<std::vector<HalfEdge>> stubs;
    bool tight() const {
        for (const auto& s : stubs)
            if (!s.empty()) return false;
        return true;
    }
};

std::vector<SubgraphFace> subgraph_faces(const Fatgraph& g, const std::vector<char>& in);

// Same, but inside the subgraph spanned by `ambient` (stubs are ambient
// half-edges only; everything outside `ambient` is invisible). Requires
// in ⊆ ambient.
std::vector<SubgraphFace> subgraph_faces_within(const Fatgraph& g,
                                                const std::vector<char>& ambient,
                                                const std::vector<char>& in);

// Standalone copy of G(A) with puncture marks inherited.
struct Extraction {
    Fatgraph graph;
    std::vector<int> edge_map; // ambient edge -> extracted edge, -1 outside A
    std::vector<int> half_map; // ambient half -> extracted half, -1 outside A
};

Extraction extract_subgraph(const Fatgraph& g, const std::vector<Edge>& edges);

// Connected components of G(A), as edge lists.
std::vector<std::vector<Edge>> subgraph_components(const Fatgraph& g, const std::vector<char>& in);

// True iff G(A) is a single closed chain of distinct edges through bivalent
// unpunctured vertices.
bool is_simple_cycle(const Fatgraph& g, const std::vector<Edge>& edges);

// Closed edge walks that never traverse an edge immediately followed by its
// reverse except through a punctured vertex. Enumerated up to rotation and
// reversal, restricted to walks without repeated directed half-edges (every
// quasi efficient closed walk decomposes into such). Exponential worst case;
// `cap` bounds the number of cycles and search nodes.
std::vector<std::vector<HalfEdge>> quasi_efficient_cycles(const Fatgraph& g,
                                                          const std::vector<Edge>& edges,
                                                          std::size_t cap = 100000);

// Checks quasi efficiency of one closed directed walk.
bool is_quasi_efficient_walk(const Fatgraph& g, const std::vector<HalfEdge>& walk);

// Every univalent vertex of G(A) is punctured. Equivalently (checked by the
// tests against the cycle enumeration) every edge of A lies on some quasi
// efficient cycle in G(A).
bool is_quasi_recurrent(const Fatgraph& g, const std::vector<Edge>& edges);

// Largest quasi recurrent subset of A: prunes edges at unpunctured univalent
// vertices until stable. May be empty.
std::vector<Edge> maximal_quasi_recurrent(const Fatgraph& g, const std::vector<Edge>& edges);

// Completes a graph whose regions may be large polygons to one with only
// triangles and once-punctured monogons, by expanding vertices with fans of
// zero-coordinate edges. `seed` varies the fan roots so callers can check
// independence of the completion. Old edges keep identities via edge_map.
struct Completion {
    Fatgraph graph;
    std::vector<int> edge_map;       // old edge -> new edge
    std::vector<Edge> added_edges;   // new edges absent from the input
};

Completion complete_to_quasi_triangulation(const Fatgraph& g, unsigned seed = 0);

} // namespace pgc

#endif
