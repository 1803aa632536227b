#ifndef PGC_PAIRING_HPP
#define PGC_PAIRING_HPP

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "pgc/fatgraph.hpp"
#include "pgc/rational.hpp"
#include "pgc/screens.hpp"

namespace pgc {

// A pairable slot of a component: an undecorated puncture (punctured vertex)
// or a decorated one (boundary cycle).
struct SlotRef {
    enum class Kind { Face, Star };
    int component = -1;
    Kind kind = Kind::Face;
    int index = -1; // face index or vertex index within the component
    auto operator<=>(const SlotRef&) const = default;
};

struct PairedComponent {
    Fatgraph graph;
    std::vector<Rat> weights;    // per edge, positive; projectivized on demand
    int level = 0;               // depth class in the source degeneration
    std::string isotopy_label;   // opaque embedding token, propagated only
    std::vector<int> face_labels; // puncture label per boundary cycle, -1 if none
    std::vector<int> star_labels; // per punctured vertex, -1 if none
};

// Weighted punctured fatgraphs with a partial pairing of their punctures:
// each pair joins a punctured vertex with a distinct punctured vertex or a
// boundary cycle, every slot used at most once. Pairs model nodes of a
// degenerate surface.
struct PairedFatgraph {
    std::vector<PairedComponent> components;
    std::vector<std::pair<SlotRef, SlotRef>> pairings;
    std::string curve_family_label;
};

struct PairingDiagnostics {
    bool ok = true;
    std::vector<std::string> problems;
};

// Slot multiplicity and the punctured-vertex-in-every-pair rule.
PairingDiagnostics validate_pairing(const PairedFatgraph& pg);

// The four support conditions for a connected surface F:
//  i. exactly F.punctures unpaired slots;
//  ii. every component surface has negative Euler characteristic;
//  iii. the component characteristics sum to F.euler;
//  iv. the components are connected through pairings.
bool supported_by(const PairedFatgraph& pg, const SurfaceType& f);

// Membership in the modeled space: some component has all boundary cycles
// unpaired, and the directed relation "boundary cycle of one component
// paired to a punctured vertex of another" has no cycles (self-pairs of that
// kind count as cycles).
bool pg_membership(const PairedFatgraph& pg);

// Optional decorations of the ambient graph of a screen point: puncture
// labels per boundary cycle / punctured vertex, and an embedding token.
struct AmbientLabels {
    std::vector<int> face_labels;   // per boundary cycle of the ambient, -1 ok
    std::vector<int> star_labels;   // per punctured vertex
    std::string curve_family;
};

// Full output of the quotient construction, including the pinch-curve data
// (level and coordinate sum of the corresponding cycle) needed downstream.
struct PiResult {
    PairedFatgraph pg;
    std::vector<std::pair<int, Rat>> pairing_curve;           // aligned with pg.pairings
    std::map<std::pair<int, int>, std::pair<int, Rat>> star_curve;
    // (component, vertex) -> (level, coordinate sum) for punctured vertices
    // born from vanished horocycles or pinches
    std::vector<std::vector<std::vector<int>>> edge_origins;
    // per component, per edge: the ambient edges whose coordinates sum there
};

// Processes the level tower deepest first. A deep component properly inside
// its ambient component is resolved through its boundary cycles: a tight one
// (tracing a complete boundary cycle of the ambient level) is parallel to a
// puncture and stays; each non-tight one is pinched, the shallow side
// receiving a new punctured vertex carrying that corner's half-edges in
// boundary order. A cycle component vanishes entirely (one tight side: its
// puncture loses decoration; no tight side: an essential pinch pairing the
// two new punctured vertices). A non-cycle component splits off, its
// bivalent unpunctured vertices smoothed with coordinates added along the
// merged chains, each pinched boundary cycle paired to the corresponding
// new punctured vertex. Weights are per-level deprojectivized inputs,
// re-projectivized per output component at comparison time.
PiResult project_pi_full(const ScreenPoint& pt, const AmbientLabels& labels = {});
PairedFatgraph project_pi(const ScreenPoint& pt, const AmbientLabels& labels = {});

// Canonical encoding of a weighted paired fatgraph; equal keys mean
// component-wise isomorphism preserving rotations, pairing, puncture marks,
// projectivized weights, labels and pairings. Flags let the census drop
// embedding data (mapping-class quotient) or labels.
struct PairedKeyOptions {
    bool include_isotopy = true;
    bool include_labels = true;
    bool include_weights = true;
};

std::string paired_canonical_key(const PairedFatgraph& pg, const PairedKeyOptions& opt = {});

// Key plus the witnessing identification, for callers that must transport
// coordinates onto a canonical representative.
struct PairedCanonicalization {
    std::string key;
    std::vector<int> component_order;          // canonical position -> component index
    std::vector<std::vector<int>> relabeling;  // per component index: half relabeling
};

PairedCanonicalization paired_canonicalize(const PairedFatgraph& pg,
                                           const PairedKeyOptions& opt = {});

bool pi_equivalent(const ScreenPoint& p, const ScreenPoint& q,
                   const AmbientLabels& lp = {}, const AmbientLabels& lq = {});

// Total surface type of a (connected-through-pairings) paired fatgraph.
SurfaceType paired_surface_type(const PairedFatgraph& pg);

} // namespace pgc

#endif
