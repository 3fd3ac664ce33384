#pragma once

#include <cstddef>
#include <vector>

#include "jaguar/decomposition.hpp"
#include "jaguar/lp.hpp"
#include "jaguar/query.hpp"
#include "jaguar/set_function.hpp"
#include "jaguar/statistics.hpp"

namespace jaguar {

// Variable index of h(S) is S's encoding; t is variable 2^|V|.
inline int h_var(VarSet s) { return static_cast<int>(s.bits()); }

// Elemental Shannon inequalities over h: h(∅) = 0, h(V − v) <= h(V),
// and h(X+a) + h(X+b) >= h(X+a+b) + h(X) for a, b ∉ X.
// 1 + |V| + C(|V|, 2) · 2^(|V|−2) rows.
std::vector<LinearConstraint> shannon_constraints(int num_vars);

struct SelectorLpResult {
    double value = 0.0;  // +inf when unbounded
    bool unbounded = false;
    SetFunction h;       // optimal polymatroid (finite part when unbounded)
    SetFunction ray;     // growth direction when unbounded
};

// max t s.t. h(Z) >= t for every Z in `bags`, the Shannon inequalities,
// and h(X ∪ Y) − h(X) <= n for every statistics term.
SelectorLpResult solve_selector_lp(const std::vector<VarSet>& bags, const StatisticsSpec& stats, int num_vars);

// Minimal sets of bags meeting every decomposition of the family (one bag
// from each), via Berge's transversal algorithm. Each is a selector's bag
// set with redundant supersets removed; the max in subw is attained on
// these. Sets are sorted by encoding, the list lexicographically.
// Sets `complete` to false when stopping at `limit`.
std::vector<std::vector<VarSet>> minimal_selector_sets(const std::vector<TreeDecomposition>& family,
                                                       std::size_t limit, bool& complete);

struct WidthResult {
    double subw = 0.0;
    bool unbounded = false;
    std::vector<VarSet> selector;  // maximizing bag set
    SetFunction certificate;       // optimal h for that selector
    bool incomplete = false;       // selector enumeration hit the limit
    std::size_t lps_solved = 0;
};

// subw(Q, Δ, n) = max over selectors of solve_selector_lp, over the
// canonical free-connex family.
WidthResult subw(const ConjunctiveQuery& q, const StatisticsSpec& stats, std::size_t limit = kDefaultSelectorLimit);
WidthResult subw(const std::vector<TreeDecomposition>& family, int num_vars, const StatisticsSpec& stats,
                 std::size_t limit = kDefaultSelectorLimit);

}  // namespace jaguar
