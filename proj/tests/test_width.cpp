#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "jaguar/decomposition.hpp"
#include "jaguar/error.hpp"
#include "jaguar/lp.hpp"
#include "jaguar/width.hpp"
#include "support.hpp"

using namespace jaguar;
using testing::vs;
using Sense = LinearConstraint::Sense;

namespace {

StatTerm term(VarSet y, VarSet x, double n) { return {y, x, n, "", x | y, std::nullopt}; }

StatisticsSpec classic(const char* text) { return classic_stats(parse_query(text)); }

// Independent LP oracle: enumerate vertices of {x : A x <= b} by solving
// every square subsystem and keep the best feasible objective.
double vertex_max(const std::vector<std::vector<double>>& a, const std::vector<double>& b,
                  const std::vector<double>& obj) {
    const int n = static_cast<int>(obj.size());
    const int m = static_cast<int>(a.size());
    double best = -kInf;
    std::vector<int> pick(n);
    std::function<void(int, int)> rec = [&](int start, int depth) {
        if (depth == n) {
            std::vector<std::vector<double>> s(n, std::vector<double>(n + 1));
            for (int i = 0; i < n; ++i) {
                for (int j = 0; j < n; ++j) s[i][j] = a[pick[i]][j];
                s[i][n] = b[pick[i]];
            }
            for (int col = 0; col < n; ++col) {
                int piv = col;
                for (int r = col + 1; r < n; ++r) {
                    if (std::abs(s[r][col]) > std::abs(s[piv][col])) piv = r;
                }
                if (std::abs(s[piv][col]) < 1e-12) return;
                std::swap(s[col], s[piv]);
                for (int r = 0; r < n; ++r) {
                    if (r == col) continue;
                    const double f = s[r][col] / s[col][col];
                    for (int j = col; j <= n; ++j) s[r][j] -= f * s[col][j];
                }
            }
            std::vector<double> x(n);
            for (int i = 0; i < n; ++i) x[i] = s[i][n] / s[i][i];
            for (int r = 0; r < m; ++r) {
                double lhs = 0;
                for (int j = 0; j < n; ++j) lhs += a[r][j] * x[j];
                if (lhs > b[r] + 1e-9) return;
            }
            double v = 0;
            for (int j = 0; j < n; ++j) v += obj[j] * x[j];
            best = std::max(best, v);
            return;
        }
        for (int r = start; r <= m - (n - depth); ++r) {
            pick[depth] = r;
            rec(r + 1, depth + 1);
        }
    };
    rec(0, 0);
    return best;
}

// Bag sets of valid free-connex decompositions with at most `max_bags`
// bags, one tree per bag set, dominated bag sets removed.
std::vector<TreeDecomposition> brute_family(const ConjunctiveQuery& q, int max_bags) {
    const VarSet all = q.all();
    std::vector<VarSet> subsets;
    for_each_subset(all, [&](VarSet s) {
        if (!s.empty()) subsets.push_back(s);
    });
    std::sort(subsets.begin(), subsets.end());
    std::vector<TreeDecomposition> found;

    auto try_tree = [&](const std::vector<VarSet>& bags, const std::vector<std::pair<int, int>>& edges) {
        TreeDecomposition td{bags, edges, {}};
        const int k = static_cast<int>(bags.size());
        if (q.is_full()) {
            td.free_core.resize(k);
            std::iota(td.free_core.begin(), td.free_core.end(), 0);
        } else if (!q.is_boolean()) {
            std::vector<int> comp(k, -1);
            for (int s = 0; s < k && td.free_core.empty(); ++s) {
                if (comp[s] != -1 || !bags[s].subset_of(q.free)) continue;
                std::vector<int> members{s};
                comp[s] = s;
                for (std::size_t i = 0; i < members.size(); ++i) {
                    for (auto [u, v] : edges) {
                        for (auto [from, to] : {std::pair{u, v}, std::pair{v, u}}) {
                            if (from == members[i] && comp[to] == -1 && bags[to].subset_of(q.free)) {
                                comp[to] = s;
                                members.push_back(to);
                            }
                        }
                    }
                }
                VarSet u;
                for (int t : members) u |= bags[t];
                if (u == q.free) {
                    std::sort(members.begin(), members.end());
                    td.free_core = members;
                }
            }
            if (td.free_core.empty()) return false;
        }
        if (!check_td(q, td).empty()) return false;
        found.push_back(td);
        return true;
    };

    std::vector<VarSet> bags;
    std::function<void(std::size_t)> choose = [&](std::size_t start) {
        if (!bags.empty()) {
            VarSet u;
            for (VarSet b : bags) u |= b;
            bool atoms_ok = u == all;
            for (const Atom& a : q.atoms) {
                atoms_ok = atoms_ok && std::any_of(bags.begin(), bags.end(), [&](VarSet b) { return a.schema.subset_of(b); });
            }
            if (atoms_ok) {
                const int k = static_cast<int>(bags.size());
                if (k == 1) {
                    try_tree(bags, {});
                } else {
                    // Every labelled tree once, via its Prüfer sequence.
                    std::vector<int> seq(k - 2, 0);
                    while (true) {
                        std::vector<int> deg(k, 1);
                        for (int v : seq) ++deg[v];
                        std::vector<std::pair<int, int>> edges;
                        for (int v : seq) {
                            int leaf = 0;
                            while (deg[leaf] != 1) ++leaf;
                            edges.emplace_back(std::min(leaf, v), std::max(leaf, v));
                            --deg[leaf];
                            --deg[v];
                        }
                        std::vector<int> rest;
                        for (int v = 0; v < k; ++v) {
                            if (deg[v] == 1) rest.push_back(v);
                        }
                        edges.emplace_back(rest[0], rest[1]);
                        std::sort(edges.begin(), edges.end());
                        if (try_tree(bags, edges)) break;
                        int i = 0;
                        while (i < k - 2 && ++seq[i] == k) seq[i++] = 0;
                        if (i == k - 2) break;
                    }
                }
            }
        }
        if (static_cast<int>(bags.size()) == max_bags) return;
        for (std::size_t i = start; i < subsets.size(); ++i) {
            bags.push_back(subsets[i]);
            choose(i + 1);
            bags.pop_back();
        }
    };
    choose(0);

    auto dominated_by = [](const TreeDecomposition& small, const TreeDecomposition& big) {
        return std::all_of(small.bags.begin(), small.bags.end(), [&](VarSet s) {
            return std::any_of(big.bags.begin(), big.bags.end(), [&](VarSet b) { return s.subset_of(b); });
        });
    };
    std::vector<TreeDecomposition> kept;
    for (std::size_t i = 0; i < found.size(); ++i) {
        bool drop = false;
        for (std::size_t j = 0; j < found.size() && !drop; ++j) {
            if (i == j || !dominated_by(found[j], found[i])) continue;
            // Mutual domination keeps the earlier one.
            drop = !dominated_by(found[i], found[j]) || j < i;
        }
        if (!drop) kept.push_back(found[i]);
    }
    return kept;
}

}  // namespace

TEST_CASE("shannon constraint counts") {
    CHECK(shannon_constraints(1).size() == 2);
    CHECK(shannon_constraints(2).size() == 4);
    CHECK(shannon_constraints(3).size() == 10);
    CHECK(shannon_constraints(4).size() == 1 + 4 + 24);
    CHECK(shannon_constraints(5).size() == 1 + 5 + 10 * 8);
}

TEST_CASE("shannon constraints for two variables") {
    const auto rows = shannon_constraints(2);
    using Coeffs = std::vector<std::pair<int, double>>;
    auto sorted = [](Coeffs c) {
        std::sort(c.begin(), c.end());
        return c;
    };
    // h(∅) = 0
    CHECK(rows[0].sense == Sense::Eq);
    CHECK(sorted(rows[0].coeffs) == Coeffs{{0, 1.0}});
    CHECK(rows[0].rhs == 0.0);
    // h(V − v) <= h(V), written as h(V) − h(V − v) >= 0 or the mirror.
    for (int i = 1; i <= 2; ++i) {
        const auto c = sorted(rows[i].coeffs);
        REQUIRE(c.size() == 2);
        CHECK(c[1].first == 3);
        const double sign = rows[i].sense == Sense::Ge ? 1.0 : -1.0;
        CHECK(c[1].second == sign);
        CHECK(c[0].second == -sign);
    }
    CHECK(sorted(rows[1].coeffs)[0].first != sorted(rows[2].coeffs)[0].first);
    // h(X) + h(Y) >= h(XY) + h(∅)
    const auto sub = sorted(rows[3].coeffs);
    const double sign = rows[3].sense == Sense::Ge ? 1.0 : -1.0;
    CHECK(sub == Coeffs{{0, -sign}, {1, sign}, {2, sign}, {3, -sign}});
    CHECK(rows[3].rhs == 0.0);
}

TEST_CASE("lp solver on small programs") {
    LinearProgram lp;
    lp.num_vars = 1;
    lp.objective = {1.0};
    lp.rows = {{{{0, 1.0}}, Sense::Le, 1.0, "a"}, {{{0, 1.0}}, Sense::Le, 2.0, "b"}};
    LpResult r = lp_solve(lp);
    CHECK(r.status == LpResult::Status::Optimal);
    CHECK(r.value == doctest::Approx(1.0));

    // max x + y, x <= 3, y <= 2, x + y >= 1, x − y = 1
    lp.num_vars = 2;
    lp.objective = {1.0, 1.0};
    lp.rows = {{{{0, 1.0}}, Sense::Le, 3.0, ""},
               {{{1, 1.0}}, Sense::Le, 2.0, ""},
               {{{0, 1.0}, {1, 1.0}}, Sense::Ge, 1.0, ""},
               {{{0, 1.0}, {1, -1.0}}, Sense::Eq, 1.0, ""}};
    r = lp_solve(lp);
    CHECK(r.value == doctest::Approx(5.0));
    CHECK(r.x[0] == doctest::Approx(3.0));
    CHECK(r.x[1] == doctest::Approx(2.0));

    // max x, x − y <= 0: unbounded along (1, 1).
    lp.objective = {1.0, 0.0};
    lp.rows = {{{{0, 1.0}, {1, -1.0}}, Sense::Le, 0.0, ""}};
    r = lp_solve(lp);
    CHECK(r.status == LpResult::Status::Unbounded);
    CHECK(is_inf(r.value));
    REQUIRE(r.ray.size() == 2);
    CHECK(r.ray[0] > 0);
    CHECK(r.ray[0] - r.ray[1] <= 1e-9);

    // x >= 2, x <= 1
    lp.num_vars = 1;
    lp.objective = {1.0};
    lp.rows = {{{{0, 1.0}}, Sense::Ge, 2.0, ""}, {{{0, 1.0}}, Sense::Le, 1.0, ""}};
    CHECK_THROWS_AS(lp_solve(lp), Error);
}

TEST_CASE("lp solver against vertex enumeration") {
    std::mt19937_64 rng(61);
    std::uniform_int_distribution<int> coef(-3, 5);
    for (int round = 0; round < 200; ++round) {
        const int n = 2 + round % 3;
        const int m = n + 2 + round % 3;
        std::vector<std::vector<double>> a;
        std::vector<double> b;
        LinearProgram lp;
        lp.num_vars = n;
        for (int j = 0; j < n; ++j) lp.objective.push_back(coef(rng));
        for (int i = 0; i < m; ++i) {
            std::vector<double> row(n);
            LinearConstraint c;
            for (int j = 0; j < n; ++j) {
                row[j] = coef(rng);
                if (row[j] != 0) c.coeffs.emplace_back(j, row[j]);
            }
            c.rhs = 1 + std::uniform_int_distribution<int>(0, 9)(rng);
            a.push_back(row);
            b.push_back(c.rhs);
            lp.rows.push_back(c);
        }
        // Box keeps the enumeration bounded; x >= 0 rows for the oracle.
        for (int j = 0; j < n; ++j) {
            std::vector<double> row(n, 0.0);
            row[j] = 1;
            a.push_back(row);
            b.push_back(20);
            lp.rows.push_back({{{j, 1.0}}, Sense::Le, 20.0, ""});
            row[j] = -1;
            a.push_back(row);
            b.push_back(0);
        }
        const LpResult r = lp_solve(lp);
        REQUIRE(r.status == LpResult::Status::Optimal);
        CHECK(r.value == doctest::Approx(vertex_max(a, b, lp.objective)).epsilon(1e-9));
    }
}

TEST_CASE("selector lp examples") {
    const ConjunctiveQuery c4 = parse_query(testing::kFourCycle);
    const StatisticsSpec stats = classic_stats(c4);
    // X0 Y1 Z2 W3
    const SelectorLpResult r = solve_selector_lp({vs({0, 1, 2}), vs({1, 2, 3}), vs({0, 1, 2, 3})}, stats, 4);
    CHECK_FALSE(r.unbounded);
    CHECK(r.value == doctest::Approx(1.5).epsilon(1e-9));
    CHECK(check_polymatroid(r.h) == "");
    CHECK(satisfies_stats(r.h, stats));

    const SelectorLpResult capped = solve_selector_lp({vs({0, 1}), vs({0, 1, 2, 3})}, stats, 4);
    CHECK(capped.value <= 1.0 + 1e-9);

    const SelectorLpResult open = solve_selector_lp({vs({0, 1})}, StatisticsSpec{}, 4);
    CHECK(open.unbounded);
    CHECK(is_inf(open.value));
    CHECK(open.ray(vs({0, 1})) > 0);

    StatisticsSpec two;
    two.terms = {term(vs({0}), {}, 1.0), term(vs({1}), {}, 1.0)};
    CHECK(solve_selector_lp({vs({0, 1})}, two, 2).value == doctest::Approx(2.0));
}

TEST_CASE("width golden values") {
    CHECK(subw(parse_query(testing::kFourCycle), classic(testing::kFourCycle)).subw ==
          doctest::Approx(1.5).epsilon(1e-9));
    CHECK(subw(parse_query(testing::kFourCycleBool), classic(testing::kFourCycleBool)).subw ==
          doctest::Approx(1.5).epsilon(1e-9));
    CHECK(subw(parse_query(testing::kTriangle), classic(testing::kTriangle)).subw ==
          doctest::Approx(1.5).epsilon(1e-9));
    CHECK(subw(parse_query(testing::kTwoPathFull), classic(testing::kTwoPathFull)).subw ==
          doctest::Approx(1.0).epsilon(1e-9));
    CHECK(subw(parse_query(testing::kTwoPathProj), classic(testing::kTwoPathProj)).subw ==
          doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("triangle width by vertex enumeration") {
    // Variables h(S) for S ≠ ∅ (index bits − 1); elemental inequalities by
    // definition, edge caps, and nonnegativity.
    std::vector<std::vector<double>> a;
    std::vector<double> b;
    auto row = [&](std::vector<std::pair<int, double>> terms, double rhs) {
        std::vector<double> r(7, 0.0);
        for (auto [s, v] : terms) {
            if (s != 0) r[s - 1] += v;
        }
        a.push_back(r);
        b.push_back(rhs);
    };
    for (int s = 0; s < 8; ++s) {
        for (int v = 0; v < 3; ++v) {
            if (s & (1 << v)) continue;
            row({{s, 1.0}, {s | (1 << v), -1.0}}, 0.0);
            for (int u = v + 1; u < 3; ++u) {
                if (s & (1 << u)) continue;
                row({{s | (1 << v) | (1 << u), 1.0}, {s, 1.0}, {s | (1 << v), -1.0}, {s | (1 << u), -1.0}}, 0.0);
            }
        }
    }
    for (int e : {3, 5, 6}) row({{e, 1.0}}, 1.0);
    for (int s = 1; s < 8; ++s) row({{s, -1.0}}, 0.0);
    std::vector<double> obj(7, 0.0);
    obj[6] = 1.0;
    CHECK(vertex_max(a, b, obj) == doctest::Approx(1.5).epsilon(1e-9));
}

TEST_CASE("empty statistics give unbounded width") {
    const WidthResult w = subw(parse_query(testing::kTriangle), StatisticsSpec{});
    CHECK(w.unbounded);
    CHECK(is_inf(w.subw));
}

TEST_CASE("a functional dependency on one edge keeps the four-cycle width") {
    const ConjunctiveQuery q = parse_query(testing::kFourCycle);
    StatisticsSpec stats = classic_stats(q);
    const double before = subw(q, stats).subw;
    // deg(S; Z | Y) <= 1 with S(Y,Z): X0 Y1 Z2 W3.
    stats.terms.push_back({vs({2}), vs({1}), 0.0, "S", vs({1, 2}), 1.0});
    const WidthResult after = subw(q, stats);
    CHECK(after.subw <= before + 1e-9);
    CHECK(check_polymatroid(after.certificate) == "");
    CHECK(satisfies_stats(after.certificate, stats));

    // X, W and Y = Z independent, each of entropy 1/2: satisfies the edge
    // caps and the dependency, and every decomposition keeps a bag at 3/2.
    SetFunction h(4, 0.0);
    for (std::size_t b = 0; b < h.table_size(); ++b) {
        const VarSet s(static_cast<VarSet::Bits>(b));
        const bool yz = !(s & vs({1, 2})).empty();
        h[s] = 0.5 * ((s & vs({0})).size() + (s & vs({3})).size() + (yz ? 1 : 0));
    }
    CHECK(check_polymatroid(h) == "");
    CHECK(satisfies_stats(h, stats));
    for (const TreeDecomposition& td : brute_family(q, 5)) {
        double worst = 0;
        for (VarSet bag : td.bags) worst = std::max(worst, h(bag));
        CHECK(worst >= 1.5 - 1e-9);
    }
    CHECK(after.subw == doctest::Approx(1.5).epsilon(1e-9));
    CHECK(subw(brute_family(q, 5), 4, stats).subw == doctest::Approx(1.5).epsilon(1e-9));
}

TEST_CASE("dependencies on two opposite edges lower the four-cycle width") {
    const ConjunctiveQuery q = parse_query(testing::kFourCycle);
    StatisticsSpec stats = classic_stats(q);
    // deg(R; Y | X) <= 1 and deg(T; W | Z) <= 1.
    stats.terms.push_back({vs({1}), vs({0}), 0.0, "R", vs({0, 1}), 1.0});
    stats.terms.push_back({vs({3}), vs({2}), 0.0, "T", vs({2, 3}), 1.0});
    const WidthResult w = subw(q, stats);
    CHECK(w.subw == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(w.subw == doctest::Approx(subw(brute_family(q, 5), 4, stats).subw).epsilon(1e-9));
}

TEST_CASE("more or tighter statistics never raise the width") {
    std::mt19937_64 rng(67);
    std::uniform_real_distribution<double> expo(0.2, 1.0);
    for (const char* text : {testing::kTriangle, testing::kFourCycle, testing::kTwoPathProj}) {
        const ConjunctiveQuery q = parse_query(text);
        for (int round = 0; round < 10; ++round) {
            StatisticsSpec stats = classic_stats(q);
            for (auto& t : stats.terms) t.exponent = expo(rng);
            const WidthResult base = subw(q, stats);
            CHECK(check_polymatroid(base.certificate) == "");
            CHECK(satisfies_stats(base.certificate, stats));

            StatisticsSpec tighter = stats;
            tighter.terms[round % tighter.terms.size()].exponent *= 0.5;
            CHECK(subw(q, tighter).subw <= base.subw + 1e-9);

            StatisticsSpec more = stats;
            const Atom& a = q.atoms[round % q.atoms.size()];
            const int v = a.schema.members().front();
            more.terms.push_back({a.schema - VarSet::single(v), VarSet::single(v), expo(rng) * 0.5, a.relation, a.schema,
                                  std::nullopt});
            CHECK(subw(q, more).subw <= base.subw + 1e-9);
        }
    }
}

TEST_CASE("canonical family matches brute-force families") {
    std::mt19937_64 rng(71);
    std::uniform_real_distribution<double> expo(0.2, 1.0);
    const char* queries[] = {testing::kTriangle,
                             testing::kFourCycle,
                             testing::kFourCycleBool,
                             testing::kTwoPathProj,
                             testing::kTwoPathFull,
                             "Q(X,Y) :- R(X,Y), S(Y,Z), T(Z,X).",
                             "Q(X) :- R(X,Y), S(Y,Z).",
                             "Q(X,W) :- R(X,Y), S(Y,Z), T(Z,W).",
                             "Q(X,Z) :- R(X,Y), S(Y,Z), T(Z,W), U(W,X)."};
    for (const char* text : queries) {
        const ConjunctiveQuery q = parse_query(text);
        const auto brute = brute_family(q, q.num_vars() + 1);
        INFO(text << " brute family size " << brute.size());
        REQUIRE_FALSE(brute.empty());
        for (int round = 0; round < 4; ++round) {
            StatisticsSpec stats = classic_stats(q);
            if (round > 0) {
                for (auto& t : stats.terms) t.exponent = expo(rng);
            }
            const WidthResult canonical = subw(q, stats);
            const WidthResult all = subw(brute, q.num_vars(), stats);
            CHECK_FALSE(all.incomplete);
            CHECK(all.subw == doctest::Approx(canonical.subw).epsilon(1e-9));
        }
    }
}
