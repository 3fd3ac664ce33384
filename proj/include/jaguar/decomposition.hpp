#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "jaguar/database.hpp"
#include "jaguar/query.hpp"

namespace jaguar {

// A tree of distinct bags. Nodes are sorted by bag encoding; `free_core`
// lists the nodes of a connected subtree whose bags are ⊆ F and union to
// F (all nodes for a full query, none for a Boolean one).
struct TreeDecomposition {
    std::vector<VarSet> bags;
    std::vector<std::pair<int, int>> edges;
    std::vector<int> free_core;

    bool operator==(const TreeDecomposition&) const = default;
};

// One bag index per decomposition of a family.
struct BagSelector {
    std::vector<int> choice;
};

inline constexpr std::size_t kDefaultSelectorLimit = 1'000'000;

// Canonical family of free-connex decompositions: maximal-clique bags of
// the chordal completions produced by every vertex elimination ordering
// (non-free variables first when ∅ ⊂ F ⊂ V), deduplicated by bag set,
// plus the fallback {F, V} (or {V}). Sorted by bag encodings.
// Throws LimitError when |V| exceeds `max_vars`.
std::vector<TreeDecomposition> enumerate_free_connex_tds(const ConjunctiveQuery& q, int max_vars);
std::vector<TreeDecomposition> enumerate_free_connex_tds(const ConjunctiveQuery& q);

// The fallback decomposition {F, V}, or {V} when F is ∅ or V.
TreeDecomposition fallback_td(const ConjunctiveQuery& q);

// Empty if `td` is a valid free-connex tree decomposition of `q`:
// atom coverage, tree shape, connected occurrences, distinct bags, and
// the free-core witness when ∅ ⊂ F ⊂ V. Otherwise names the failure.
std::string check_td(const ConjunctiveQuery& q, const TreeDecomposition& td);

// True iff every bag of `td` is in `available`.
bool covers(const std::vector<VarSet>& available, const TreeDecomposition& td);
bool covers(const DatabaseInstance& d, const TreeDecomposition& td);

// Cartesian product of bag choices in lexicographic order. Throws
// LimitError past `limit` selectors and InvariantError on an empty family.
std::vector<BagSelector> bag_selectors(const std::vector<TreeDecomposition>& family,
                                       std::size_t limit = kDefaultSelectorLimit);

std::vector<VarSet> selector_bags(const std::vector<TreeDecomposition>& family, const BagSelector& s);

}  // namespace jaguar
