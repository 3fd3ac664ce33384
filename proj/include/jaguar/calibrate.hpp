#pragma once

#include <cstddef>

#include "jaguar/database.hpp"
#include "jaguar/set_function.hpp"
#include "jaguar/statistics.hpp"

namespace jaguar {

struct CalibrateResult {
    DatabaseInstance d;
    SetFunction g;
    // Tuples in the relations materialized by repairs.
    std::size_t tuples_produced = 0;
    std::size_t repairs = 0;
};

// Restores monotonicity and the statistics invariant of (D, g), keeping
// the cardinality invariant. Runs Dijkstra from ∅ over the graph with
// edges ∅ → X (weight g(X)), Y → X for X ⊂ Y (weight 0) and X → X ∪ Y
// (weight n per term). Each settled set whose distance dropped below g
// gets a relation: a projection for a subset edge, or
// R(X) ⋈ π_{X∪Y}(guard) for a statistics edge. Ties settle by encoding.
//
// Requires: g(X) finite only if R(X) ∈ D, with g(X) >= log_N |R(X)|.
CalibrateResult calibrate(const StatisticsSpec& stats, const DatabaseInstance& d, const SetFunction& g,
                          std::size_t n);

// Shortest distances from ∅ over the same graph, by Bellman-Ford on an
// explicit edge list. Test oracle for calibrate.
SetFunction shortest_path_oracle(const SetFunction& g_in, const StatisticsSpec& stats);

}  // namespace jaguar
