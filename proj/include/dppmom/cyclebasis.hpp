#pragma once

#include <vector>

#include "dppmom/gf2.hpp"
#include "dppmom/graph.hpp"

namespace dppmom::cyclebasis {

/// A simple cycle: closed vertex walk (canonical rotation/direction) plus its
/// incidence vector over the graph's edge_index coordinates.
struct Cycle {
    std::vector<int> vertices; // v0, v1, ..., v_{len-1}; edges close the walk
    gf2::Gf2Vector incidence;
    int length = 0;
};

/**
 * A cycle basis: nu = m - n + kappa(G) independent simple cycles spanning the
 * cycle space. sparsity is the maximum member length (2 when the cycle space
 * is empty). chorded_fallback flags the defensive path where the induced-only
 * candidate pool ran short and a chorded cycle was admitted; it is reported,
 * never silent.
 */
struct CycleBasis {
    std::vector<Cycle> cycles;
    int nu = 0;
    int sparsity = 2;
    bool chorded_fallback = false;
};

/// Horton candidate cycles: for every vertex v and edge {x,y}, the closed walk
/// SP(v,x) + {x,y} + SP(y,v) when it is a simple cycle; deduplicated by
/// incidence vector and sorted by (length, lexicographic incidence).
std::vector<Cycle> horton_candidates(const graph::UGraph& g);

/// Greedy scan of the sorted candidates, keeping each cycle whose incidence is
/// independent of those already kept, per connected component.
CycleBasis shortest_maximal_cycle_basis(const graph::UGraph& g);

/// Max basis-cycle length; 2 for forests.
int cycle_sparsity(const graph::UGraph& g);

/// True iff the cycle has no chord in g (the edges of g inside the cycle's
/// vertex set are exactly the cycle edges).
bool is_chordless(const graph::UGraph& g, const Cycle& c);

/// Builds a Cycle from a closed walk (no repeated vertices); canonicalizes the
/// start/direction and fills the incidence vector.
Cycle make_cycle(const graph::UGraph& g, std::vector<int> walk);

} // namespace dppmom::cyclebasis
