#ifndef PGC_ORIENT_HPP
#define PGC_ORIENT_HPP

#include <optional>
#include <vector>

#include "pgc/pairing.hpp"
#include "pgc/strata.hpp"

namespace pgc {

// Orientation of a subset of stratum-graph edges, stored as the tail vertex
// (-1 when unoriented). An oriented puncture edge always points at its
// marked end, so its tail is the component vertex.
struct PartialOrientation {
    StratumGraph g;
    std::vector<int> tail; // per edge: component vertex, or -1
};

void validate_partial_orientation(const PartialOrientation& o);

// The stratum graph of a paired fatgraph: one vertex per component, a node
// edge per pairing, a puncture edge per unpaired slot. Edges with a
// decorated side (a boundary-cycle slot) orient away from it; unpaired
// decorated punctures orient toward their marked vertex; everything else is
// unoriented. Also returns the slot carried by each edge end.
struct StratumOfPairing {
    PartialOrientation orientation;
    // per edge: the slots at its ends (one for P edges; tail slot first for
    // oriented N edges, component-order otherwise)
    std::vector<std::vector<SlotRef>> edge_slots;
};

StratumOfPairing orientation_from_pairing(const PairedFatgraph& pg);

// Realizability: every component vertex heads some oriented edge, some
// vertex sends all its oriented edges to marked vertices, and there are no
// oriented cycles. Equivalent to the existence of a compatible nest.
bool is_realizable(const PartialOrientation& o);

// A nest is compatible when the oriented edges out of each vertex are
// exactly the least-level edges at that vertex.
bool nest_compatible(const PartialOrientation& o, const Nest& f);

// The minimal compatible nest: d(v) = longest count of component vertices
// along an oriented path from v; oriented edges take d(tail), unoriented
// ones one more than the larger endpoint value.
Nest nest_from_orientation(const PartialOrientation& o);

// An unoriented edge is essential when its endpoints are distinct and joined
// by an oriented path; oriented and inessential edges are contractible.
bool is_essential(const PartialOrientation& o, int edge);
bool is_contractible(const PartialOrientation& o, int edge);

// The contracting sequence for edge n: first unorient the other oriented
// edges sharing n's tail (when n is oriented), then collapse n keeping the
// remaining orientations.
struct ContractingSequence {
    PartialOrientation step;      // orientation before the collapse
    PartialOrientation collapsed; // on the collapsed graph
    std::vector<int> edge_map;
    std::vector<int> vertex_map;
};

ContractingSequence contracting_sequence(const PartialOrientation& o, int edge);

// Combinatorial stratum point: the data the assembly map consumes. Each
// component either already carries nonnegative coordinates on an arc-family
// dual, or positive lengths on a quasi triangulation to be reduced first.
struct StratumComponent {
    Fatgraph graph;
    bool needs_reduction = false; // true: `coords` are lengths, reduce first
    std::vector<Rat> coords;
    std::string isotopy_label;
    std::vector<int> face_labels;
    std::vector<int> star_labels;
};

struct StratumPoint {
    StratumGraph sg;
    Nest nest;
    std::vector<StratumComponent> components; // per component vertex
    std::vector<std::vector<SlotRef>> edge_slots;
    std::vector<Rat> edge_coord; // deprojectivized per comparability class
    std::string curve_family_label;
};

// Projection of a screen point to its stratum data: the stratum graph of the
// quotient, each edge leveled by its pinch curve's vanishing rate, with
// coordinate the sum of coordinates along the curve, classes projectivized.
StratumPoint psi(const ScreenPoint& pt, const AmbientLabels& labels = {});

// Assembly: reduces length-data components, then mounts the components on
// the stratum graph's pairing structure. Decorated slots must sit exactly on
// the least-level edges around each vertex.
PairedFatgraph chi_combinatorial(const StratumPoint& sp);

// One pass of the straightening flow:
//  1. orient essential unoriented edges (unique realizable direction),
//  2. orient inessential unoriented edges whose endpoint least-levels
//     differ, from the higher toward the lower,
//  3. lower the maximal free excess of the minimal nest, re-deriving the
//     compatible orientation.
// Decorations: new oriented edges take the minimum deprojectivized value
// among the decorated slots they join, classes re-projectivized; the
// surrogate tracks one exact value per edge. All edges stay contractible.
struct FlowState {
    PartialOrientation orientation;
    Nest nest;
    std::vector<Rat> coord; // per edge, positive
};

FlowState theorem_flow_step(const FlowState& s);
bool flow_fixed_point(const FlowState& s);

// Weighted cell of the stratum point's nest: classes projectivized.
NestCell stratum_point_cell(const StratumPoint& sp);

} // namespace pgc

#endif
