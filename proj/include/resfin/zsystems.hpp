#pragma once

#include <optional>
#include <vector>

#include "resfin/clopen.hpp"
#include "resfin/system.hpp"
#include "resfin/witness.hpp"

namespace resfin {

struct EpsGraph {
    int nodes = 0;
    std::vector<std::vector<int>> out;  // adjacency: out[x] sorted ascending
    Rational epsilon;

    bool has_edge(int x, int y) const;
};

// Edge (x,y) iff d(T x, y) < epsilon, exactly.
EpsGraph build_eps_graph(const FiniteSampleSystem& sample, const Rational& epsilon);

// Nodes lying on a directed cycle (SCC contains an edge).
std::vector<int> chain_recurrent_set(const EpsGraph& g);

// Greedy epsilon-dense subset D of the chain recurrent set, a shortest cycle
// through each x in D (breadth-first, lexicographic tie-break), E = disjoint
// cyclic orbits, zeta = inclusion.
Witness model_from_chains(const FiniteSampleSystem& sample, const Rational& epsilon,
                          const DensityGridCaps& caps = {});

// Lexicographically least union U of window atoms with T(U) strictly inside
// U, or nullopt. Strictness is decided exactly at the refined window.
std::optional<ClopenSet> find_compressible_clopen(const SystemDescriptor& sys, int window,
                                                  const DensityGridCaps& caps = {});

struct RecurrenceVerdict {
    bool found = false;
    long n = 0, m = 0;  // least (n, m) lexicographically when found
};

// Least (n, m) with N <= n, m <= horizon and d(T^n x, T^-m x) < epsilon.
// A miss is a bounded-horizon verdict, not a proof.
RecurrenceVerdict recurrence_scan(const SystemDescriptor& sys, const Point& x,
                                  const Rational& epsilon, long N, long horizon);

}  // namespace resfin
