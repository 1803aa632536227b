#ifndef PGC_LIMITS_HPP
#define PGC_LIMITS_HPP

#include <optional>
#include <vector>

#include "pgc/fatgraph.hpp"
#include "pgc/rational.hpp"
#include "pgc/screens.hpp"

namespace pgc {

// One-parameter family of edge coordinates in monomial normal form:
// X_t(e) = coeff(e) * t^(-level(e)), with X_t identically zero on edges of
// absent level (the arcs completing the underlying family to a quasi
// triangulation). Every stable degeneration is realized by such a family,
// so general continuous paths are not modeled.
struct SymbolicPath {
    Fatgraph g; // quasi triangulation
    std::vector<std::optional<int>> level;
    std::vector<Rat> coeff; // positive where level is present; ignored otherwise

    bool zero(Edge e) const { return !level[e].has_value(); }
};

void validate_symbolic_path(const SymbolicPath& p);

// Nested sets of comparable-rate edges: one set per distinct level value,
// each containing everything deeper, with the exactly-zero edges deepest.
struct ComparabilityFiltration {
    std::vector<std::vector<Edge>> sets; // strictly nested, outermost first
};

ComparabilityFiltration comparability_filtration(const SymbolicPath& p);

// One stage of the limiting recursion: relative to the slowest rate in the
// working set D, the faster edges J split into the recurrent core I and
// removable trees; cycle components of I shed their relatively-fast chains
// (removed) and persist as pinch cycles Z; the slowest edges B stay.
struct RecursionStage {
    int base_level = 0;
    std::vector<Edge> d_in, j, i, c, z, b, d_out;
    std::vector<std::vector<Edge>> z_cycles; // the surviving pinch cycles
};

struct RecursionTrace {
    std::vector<RecursionStage> stages;
};

// J(H): edges of H vanishing relative to the base rate; I(H): the maximal
// quasi recurrent subset of J(H). H must induce a quasi recurrent component
// that is not a simple cycle.
std::pair<std::vector<Edge>, std::vector<Edge>> filtered_ij(const SymbolicPath& p,
                                                            const std::vector<Edge>& h,
                                                            int base_level);

// The canonical limit of a symbolic path: a filtered screen on the arc
// family left after collapsing the removable forest, with per-level weights
// the limiting coordinate ratios. The trace records every stage; the
// partition C+Z+B+D = D_in and the forest property of the accumulated C are
// asserted at each stage.
struct LimitResult {
    Fatgraph graph;              // ambient of the limiting screen
    std::vector<int> edge_map;   // input edge -> limit edge, -1 if removed
    ScreenPoint point;           // screen + weights on `graph`
    RecursionTrace trace;
};

LimitResult limiting_point(const SymbolicPath& p);

// Monomial path hitting a prescribed limit: given an arc family E (as a
// graph), a sub-family E' with a weighted filtered screen on its collapsed
// graph, levels are the screen levels on E', one below the deepest for
// E - E', and absent for the arcs completing E to a quasi triangulation.
// `eprime_edges` indexes edges of `g_e`; `pt` lives on the graph obtained
// from g_e by collapsing the complement of eprime_edges.
struct PathInput {
    Fatgraph g_e;
    std::vector<Edge> eprime_edges;
    ScreenPoint pt;                 // on collapse(g_e, complement)
    std::vector<int> eprime_map;    // g_e edge -> pt.fs.g edge (for E' edges)
};

SymbolicPath construct_path(const PathInput& in, unsigned completion_seed = 0);

// Convenience: collapse everything outside `eprime_edges`, returning the
// collapsed graph and the edge correspondence.
std::pair<Fatgraph, std::vector<int>> collapse_to_subfamily(const Fatgraph& g,
                                                            const std::vector<Edge>& eprime);

// Predicted limiting screens for paths that slightly raise the rate of part
// of one level.
//
//  * remove-arc case: a single edge whose dual has distinct endpoints, at
//    most one punctured, with an unpunctured endpoint meeting no deeper
//    edge: the arc leaves the family.
//  * isolate case: a single edge with both endpoints on the deeper subgraph:
//    it becomes its own level.
//  * subset case: a proper subset A of a level with A + deeper recurrent:
//    A becomes its own level.
struct RefineResult {
    FilteredScreen fs;
    std::vector<int> edge_map; // identity except the removed arc, if any
};

RefineResult refine_level(const FilteredScreen& fs, int k, const std::vector<Edge>& a);

// Independent check of the symbolic levels: evaluates X_t exactly at sample
// points and fits log-ratio slopes. Entries are empty when the edge is
// exactly zero; `conclusive` is false if a slope misses an integer by more
// than 0.1.
struct SlopeEstimate {
    std::vector<std::optional<int>> level;
    bool conclusive = true;
};

SlopeEstimate numeric_slope_oracle(const SymbolicPath& p, const std::vector<Rat>& ts);

} // namespace pgc

#endif
