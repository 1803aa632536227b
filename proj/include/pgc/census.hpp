#ifndef PGC_CENSUS_HPP
#define PGC_CENSUS_HPP

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pgc/orient.hpp"
#include "pgc/pairing.hpp"
#include "pgc/strata.hpp"

namespace pgc {

// ---------------------------------------------------------------------------
// Enumeration up to isomorphism.
// ---------------------------------------------------------------------------

struct EnumOptions {
    int max_half_edges = 12;
    bool allow_punctured = false; // admit marked vertices
    bool require_qcd = true;      // valence <= 2 only at marked vertices
    bool trivalent_only = false;
};

struct FatgraphClass {
    Fatgraph rep;
    long aut = 0;
};

// Connected fatgraph classes with the given surface type, deduplicated by
// canonical form. Throws CapExceeded past max_half_edges.
std::vector<FatgraphClass> enumerate_fatgraphs(int genus, int punctures, const EnumOptions& opt);

// Classes with exactly profile[i] vertices of valence 2i+3 (all unpunctured);
// the profile must satisfy sum (2i+1) profile[i] = 4g - 4 + 2s.
std::vector<FatgraphClass> combinatorial_class_filter(const std::vector<FatgraphClass>& classes,
                                                      const std::vector<int>& profile, int genus,
                                                      int punctures);

// Signed count sum (-1)^(edges-1) / aut over the unpunctured classes; the
// cell of a class has dimension edges - 1.
Rat orbifold_euler(int genus, int punctures, int max_half_edges = 12);

// All stratum graphs with at most max_edges edges, up to isomorphism.
std::vector<StratumGraph> enumerate_stratum_graphs(int max_edges);

// All nests on g with max level <= max_level.
std::vector<Nest> enumerate_nests(const StratumGraph& g, int max_level);

// All partial orientations on g respecting the puncture-edge direction rule.
std::vector<PartialOrientation> enumerate_partial_orientations(const StratumGraph& g);

// Brute-force compatible-nest search (bounded levels), for cross-checks.
std::optional<Nest> find_compatible_nest(const PartialOrientation& o, int max_level);

// ---------------------------------------------------------------------------
// The cell complex of weighted paired fatgraphs.
// ---------------------------------------------------------------------------

struct PgComplexOptions {
    bool quotient = false;      // drop labels and embedding data
    std::size_t cell_cap = 20000;
};

struct CellComplex {
    struct Cell {
        PairedFatgraph rep;
        int dim = 0;
        std::string key;
        bool orientable_stabilizer = true; // quotient mode only
    };
    std::vector<std::vector<Cell>> cells; // by dimension
    // boundary[d] maps (cell index in dim d-1, cell index in dim d) -> coeff
    std::vector<std::map<std::pair<int, int>, long>> boundary;
    bool quotient = false;

    int dimension() const { return static_cast<int>(cells.size()) - 1; }
    std::vector<int> cells_per_dim() const;
};

// Builds the closure of the top-dimensional cells (duals of maximal arc
// families, every puncture decorated) under the two face moves: collapsing
// an edge with distinct endpoints at most one punctured, and letting a
// quasi recurrent edge degenerate through the quotient construction.
// In labeled mode (quotient = false) cells carry a labeling of the
// punctures; every puncture of the surface appears exactly once per cell.
CellComplex assemble_pg_complex(int genus, int punctures, const PgComplexOptions& opt = {});

struct HomologyResult {
    std::vector<long> betti;      // rational Betti numbers by dimension
    std::vector<long> reduced;    // reduced Betti numbers
    bool boundary_squared_zero = false;
};

// Rational Betti numbers of the signed complex (requires every stabilizer
// orientation-preserving; labeled complexes of the supported surfaces
// qualify). Checks that consecutive boundaries compose to zero.
HomologyResult homology(const CellComplex& c);

// Connectivity count through unsigned incidence, defined in every mode.
int unsigned_component_count(const CellComplex& c);

} // namespace pgc

#endif
