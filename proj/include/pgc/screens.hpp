#ifndef PGC_SCREENS_HPP
#define PGC_SCREENS_HPP

#include <string>
#include <vector>

#include "pgc/fatgraph.hpp"
#include "pgc/rational.hpp"

namespace pgc {

// Ordered partition of the edges of an ambient graph into nonempty levels
// L^0,...,L^n such that every upper set L^{>=k} is quasi recurrent. Level k
// records the relative vanishing rate of its edges' coordinates along a
// degeneration; deeper levels vanish faster.
struct FilteredScreen {
    Fatgraph g;
    std::vector<std::vector<Edge>> levels; // each sorted ascending

    int total_level() const { return static_cast<int>(levels.size()) - 1; }
    std::vector<Edge> upper_set(int k) const; // L^{>=k}
    std::vector<int> level_of_edges() const;  // edge -> its level
};

// Nested family of quasi recurrent subsets containing the full edge set,
// pairwise nested or disjoint, each member exceeding the union of its proper
// sub-members.
struct Screen {
    Fatgraph g;
    std::vector<std::vector<Edge>> members; // each sorted ascending
};

void validate_filtered_screen(const FilteredScreen& fs);
void validate_screen(const Screen& s);

// Depth of each member: length of the longest proper chain up to the full
// edge set. An edge's level is the maximal depth of a member containing it.
FilteredScreen screen_to_filtered(const Screen& s);

// Tower screen {L^{>=k}}; round-trips with screen_to_filtered.
Screen filtered_to_screen(const FilteredScreen& fs);

// A point of the open cell attached to a filtered screen: positive weights
// per level, each level summing to one.
struct ScreenPoint {
    FilteredScreen fs;
    std::vector<std::vector<Rat>> weights; // aligned with fs.levels
};

void validate_screen_point(const ScreenPoint& p);
int screen_cell_dimension(const FilteredScreen& fs); // sum of (|L^k| - 1)

// Closed curve carried by the graph, stored as the directed half-edge walk
// of a subgraph boundary cycle (side data implicit in the walk).
struct CurveOnGraph {
    enum class Tag { Essential, PunctureParallel, BoundaryParallel };
    std::vector<HalfEdge> walk;
    Tag tag = Tag::Essential;
};

// Boundary cycles of G(L^{>=k+1}) inside the level-k subsurface that are
// neither parallel to a puncture nor to a boundary cycle one level up;
// a simple-cycle component contributes itself once rather than its two
// parallel sides. Only essential curves are returned.
std::vector<CurveOnGraph> relative_boundary(const FilteredScreen& fs, int k);

// Full boundary: union of relative boundaries over all k.
std::vector<CurveOnGraph> screen_boundary(const FilteredScreen& fs);

// Invariants of one complement component of a neighborhood of G(A) inside
// the ambient surface, for classification and cross-checks: Euler
// characteristic of the compactified component, number of punctures inside,
// and the subgraph boundary cycles it touches.
struct ComplementComponent {
    int chi_compact = 0;
    int punctures = 0;
    std::vector<int> touching_faces; // indices into subgraph_faces(g, A)
};

std::vector<ComplementComponent> complement_components(const Fatgraph& g,
                                                       const std::vector<char>& in);

// Codimension-one face: deletes arc e at its level; the dual edge must have
// distinct endpoints, one of them unpunctured and meeting no deeper edge.
// The ambient graph collapses the dual edge.
struct ScreenFace {
    FilteredScreen fs;
    std::vector<int> edge_map; // old edge -> new edge, -1 for the removed arc
};

ScreenFace face_remove_arc(const FilteredScreen& fs, Edge e);

// Codimension-one face splitting level k at A (proper nonempty, with
// A united with the deeper edges quasi recurrent): levels become
// (..., L^k - A, A, L^{k+1}, ...).
FilteredScreen face_split_level(const FilteredScreen& fs, int k, const std::vector<Edge>& a);

} // namespace pgc

#endif
