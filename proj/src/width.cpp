#include "jaguar/width.hpp"

#include <algorithm>
#include <set>

#include "jaguar/error.hpp"

namespace jaguar {

std::vector<LinearConstraint> shannon_constraints(int num_vars) {
    using Sense = LinearConstraint::Sense;
    if (num_vars > kMaxEncodableVars) throw LimitError("too many variables for the Shannon system");
    std::vector<LinearConstraint> out;
    out.push_back({{{h_var(VarSet{}), 1.0}}, Sense::Eq, 0.0, "normalization"});
    const VarSet all = VarSet::full(num_vars);
    for (int v = 0; v < num_vars; ++v) {
        const VarSet rest = all - VarSet::single(v);
        out.push_back({{{h_var(all), 1.0}, {h_var(rest), -1.0}}, Sense::Ge, 0.0, "monotonicity"});
    }
    for (int a = 0; a < num_vars; ++a) {
        for (int b = a + 1; b < num_vars; ++b) {
            const VarSet ab = VarSet::single(a) | VarSet::single(b);
            for_each_subset(all - ab, [&](VarSet x) {
                out.push_back({{{h_var(x | VarSet::single(a)), 1.0},
                                {h_var(x | VarSet::single(b)), 1.0},
                                {h_var(x | ab), -1.0},
                                {h_var(x), -1.0}},
                               Sense::Ge,
                               0.0,
                               "submodularity"});
            });
        }
    }
    return out;
}

SelectorLpResult solve_selector_lp(const std::vector<VarSet>& bags, const StatisticsSpec& stats, int num_vars) {
    using Sense = LinearConstraint::Sense;
    const int size = 1 << num_vars;
    const int t = size;
    LinearProgram lp;
    lp.num_vars = size + 1;
    lp.objective.assign(lp.num_vars, 0.0);
    lp.objective[t] = 1.0;
    for (int s = 0; s < size; ++s) lp.var_names.push_back("h" + std::to_string(s));
    lp.var_names.push_back("t");
    lp.rows = shannon_constraints(num_vars);
    for (VarSet z : bags) lp.rows.push_back({{{h_var(z), 1.0}, {t, -1.0}}, Sense::Ge, 0.0, "bag"});
    for (const StatTerm& term : stats.terms) {
        const VarSet joint = term.x | term.y;
        if (joint == term.x) continue;
        lp.rows.push_back({{{h_var(joint), 1.0}, {h_var(term.x), -1.0}}, Sense::Le, term.exponent, "statistic"});
    }
    const LpResult r = lp_solve(lp);
    SelectorLpResult out;
    out.h = SetFunction(num_vars, 0.0);
    for (int s = 0; s < size; ++s) out.h[VarSet(static_cast<VarSet::Bits>(s))] = std::max(0.0, r.x[s]);
    if (r.status == LpResult::Status::Unbounded) {
        out.unbounded = true;
        out.value = kInf;
        out.ray = SetFunction(num_vars, 0.0);
        for (int s = 0; s < size; ++s) out.ray[VarSet(static_cast<VarSet::Bits>(s))] = r.ray[s];
    } else {
        out.value = r.value;
    }
    return out;
}

std::vector<std::vector<VarSet>> minimal_selector_sets(const std::vector<TreeDecomposition>& family,
                                                       std::size_t limit, bool& complete) {
    if (family.empty()) throw InvariantError("empty decomposition family");
    complete = true;
    using BagSet = std::vector<VarSet>;  // sorted
    auto is_subset = [](const BagSet& a, const BagSet& b) { return std::includes(b.begin(), b.end(), a.begin(), a.end()); };

    std::set<BagSet> current{BagSet{}};
    for (const auto& td : family) {
        std::set<BagSet> next;
        for (const BagSet& s : current) {
            const bool hit = std::any_of(td.bags.begin(), td.bags.end(),
                                         [&](VarSet b) { return std::binary_search(s.begin(), s.end(), b); });
            if (hit) {
                next.insert(s);
                continue;
            }
            for (VarSet b : td.bags) {
                BagSet e = s;
                e.insert(std::upper_bound(e.begin(), e.end(), b), b);
                next.insert(std::move(e));
            }
        }
        std::vector<BagSet> sorted(next.begin(), next.end());
        std::stable_sort(sorted.begin(), sorted.end(), [](const BagSet& a, const BagSet& b) { return a.size() < b.size(); });
        std::vector<BagSet> minimal;
        for (const BagSet& s : sorted) {
            const bool redundant =
                std::any_of(minimal.begin(), minimal.end(), [&](const BagSet& m) { return is_subset(m, s); });
            if (!redundant) minimal.push_back(s);
            if (minimal.size() >= limit) {
                complete = false;
                break;
            }
        }
        current = std::set<BagSet>(minimal.begin(), minimal.end());
    }
    return {current.begin(), current.end()};
}

WidthResult subw(const std::vector<TreeDecomposition>& family, int num_vars, const StatisticsSpec& stats,
                 std::size_t limit) {
    bool complete = true;
    const auto sets = minimal_selector_sets(family, limit, complete);
    WidthResult out;
    out.incomplete = !complete;
    out.subw = -kInf;
    for (const auto& bags : sets) {
        SelectorLpResult r = solve_selector_lp(bags, stats, num_vars);
        ++out.lps_solved;
        if (r.value > out.subw + kTol) {
            out.subw = r.value;
            out.unbounded = r.unbounded;
            out.selector = bags;
            out.certificate = r.unbounded ? r.ray : r.h;
        }
        if (r.unbounded) break;
    }
    return out;
}

WidthResult subw(const ConjunctiveQuery& q, const StatisticsSpec& stats, std::size_t limit) {
    return subw(enumerate_free_connex_tds(q), q.num_vars(), stats, limit);
}

}  // namespace jaguar
