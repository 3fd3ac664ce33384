#pragma once

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "jaguar/calibrate.hpp"
#include "jaguar/statistics.hpp"
#include "support.hpp"

namespace testing {

using namespace jaguar;

inline double lg(double v, double n) { return std::log(v) / std::log(n); }

struct CalibrateFixture {
    Dictionary dict;
    DatabaseInstance d;
    SetFunction g;
    StatisticsSpec stats;
    std::size_t n = 0;
};

// Three random relations over |V| = nv variables; g from init_g raised by
// random slack; one satisfied degree term per relation, guarded by it.
inline void random_calibrate_fixture(std::mt19937_64& rng, int nv, CalibrateFixture& f) {
    std::uniform_int_distribution<VarSet::Bits> pick(1, (1u << nv) - 1);
    std::uniform_int_distribution<int> val(1, 3);
    std::uniform_int_distribution<int> rows(1, 8);
    for (int k = 0; k < 3; ++k) {
        const VarSet schema(pick(rng));
        std::vector<std::vector<long long>> data;
        const int r = rows(rng);
        for (int i = 0; i < r; ++i) {
            std::vector<long long> row;
            for (int j = 0; j < schema.size(); ++j) row.push_back(val(rng));
            data.push_back(row);
        }
        f.d = f.d.augment(rel(f.dict, schema, data));
    }
    f.n = std::max<std::size_t>(2, f.d.size());
    f.g = init_g(f.d, nv, f.n);
    std::uniform_real_distribution<double> raise(0.0, 0.5);
    std::bernoulli_distribution coin(0.5);
    for (std::size_t b = 0; b < f.g.table_size(); ++b) {
        auto& v = f.g[VarSet(static_cast<VarSet::Bits>(b))];
        if (b != 0 && !is_inf(v) && coin(rng)) v += raise(rng);
    }
    for (const auto& [schema, entry] : f.d.entries()) {
        const VarSet xs = schema & VarSet(pick(rng));
        const VarSet ys = schema - xs;
        if (ys.empty()) continue;
        const double deg = static_cast<double>(degree(*entry.relation, ys, xs));
        const double n = deg <= 1 ? 0.0 : lg(deg, static_cast<double>(f.n)) + raise(rng);
        f.stats.terms.push_back({ys, xs, n, "G", schema, deg});
    }
}

// |R(X)| <= N^g(X) for every relation, and g(X) = ∞ exactly where D has
// no relation.
inline bool cardinality_invariant(const DatabaseInstance& d, const SetFunction& g, std::size_t n) {
    for (std::size_t b = 0; b < g.table_size(); ++b) {
        const VarSet s(static_cast<VarSet::Bits>(b));
        const Relation* r = d.find(s);
        if (r == nullptr) {
            if (!is_inf(g(s))) return false;
            continue;
        }
        if (r->size() > 1 && lg(static_cast<double>(r->size()), static_cast<double>(n)) > g(s) + kTol) return false;
    }
    return true;
}

// Lowers one entry of a calibrated fixture to c (shrinking its relation
// so the cardinality invariant survives), recalibrates, and checks that
// every lowered value stays at or above c. Returns an empty string when
// the fixture has no usable entry or the property holds; `exercised`
// tells the two apart.
inline std::string claim3_failure(std::mt19937_64& rng, int nv, bool& exercised) {
    exercised = false;
    CalibrateFixture f;
    random_calibrate_fixture(rng, nv, f);
    const CalibrateResult base = calibrate(f.stats, f.d, f.g, f.n);
    std::vector<VarSet> candidates;
    for (std::size_t b = 1; b < base.g.table_size(); ++b) {
        const VarSet s(static_cast<VarSet::Bits>(b));
        if (!is_inf(base.g(s)) && base.g(s) > kTol) candidates.push_back(s);
    }
    if (candidates.empty()) return {};
    const VarSet w = candidates[std::uniform_int_distribution<std::size_t>(0, candidates.size() - 1)(rng)];
    const Relation& rw = base.d.at(w);
    const std::size_t keep = std::uniform_int_distribution<std::size_t>(1, rw.size())(rng);
    const double lo = keep <= 1 ? 0.0 : lg(static_cast<double>(keep), static_cast<double>(f.n));
    if (lo >= base.g(w) - kTol) return {};
    const double c = std::uniform_real_distribution<double>(lo, base.g(w) - kTol)(rng);
    std::vector<Value> flat;
    for (std::size_t i = 0; i < keep; ++i) {
        const auto row = rw.row(i);
        flat.insert(flat.end(), row.begin(), row.end());
    }
    const DatabaseInstance d = base.d.augment(Relation::from_rows(w, std::move(flat)), true);
    const SetFunction bar = base.g.with(w, c);
    exercised = true;
    const CalibrateResult r = calibrate(f.stats, d, bar, f.n);
    for (std::size_t b = 0; b < r.g.table_size(); ++b) {
        const VarSet s(static_cast<VarSet::Bits>(b));
        if (r.g(s) < bar(s) - kTol && r.g(s) < c - kTol) {
            return "set #" + std::to_string(b) + " dropped to " + std::to_string(r.g(s)) + " below c = " +
                   std::to_string(c);
        }
    }
    return {};
}

// Up to `count` degree terms that g satisfies, some tight and some slack.
inline StatisticsSpec random_satisfied_stats(std::mt19937_64& rng, const SetFunction& g, int count) {
    StatisticsSpec stats;
    const int nv = g.num_vars();
    std::uniform_int_distribution<VarSet::Bits> pick(0, (1u << nv) - 1);
    std::uniform_real_distribution<double> slack(0.0, 0.5);
    for (int k = 0; k < count; ++k) {
        const VarSet x(pick(rng));
        const VarSet y = VarSet(pick(rng)) - x;
        if (y.empty()) continue;
        double n = slack(rng);
        if (!is_inf(g(x)) && !is_inf(g(x | y))) n += g(x | y) - g(x);
        StatTerm t{y, x, n, "", x | y, std::nullopt};
        if (satisfies_term(g, t)) stats.terms.push_back(t);
    }
    return stats;
}

}  // namespace testing
