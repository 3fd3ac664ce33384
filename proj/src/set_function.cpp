#include "jaguar/set_function.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <tuple>

#include "jaguar/error.hpp"

namespace jaguar {

namespace {

std::string set_name(VarSet s, const Universe* names) {
    if (names != nullptr) return names->render(s);
    return "#" + std::to_string(s.bits());
}

}  // namespace

SetFunction init_g(const DatabaseInstance& d, int num_vars, std::size_t n) {
    if (n < 2) throw InvariantError("init_g requires N >= 2");
    SetFunction g(num_vars, kInf);
    for (const auto& [schema, entry] : d.entries()) {
        const std::size_t size = entry.relation->size();
        // log 0 is excluded upstream by the empty-relation short-circuit.
        g[schema] = size <= 1 ? 0.0 : log_base(static_cast<double>(size), static_cast<double>(n));
    }
    return g;
}

double f_value(const SetFunction& g, VarSet x, VarSet y) {
    const double gx = g(x);
    const double gy = g(y);
    const double gi = g(x & y);
    if (is_inf(gx) || is_inf(gy) || is_inf(gi)) return kInf;
    return gx + gy - gi;
}

TruncationResult min_violation(const SetFunction& g) {
    std::vector<VarSet> finite;
    const VarSet all = g.all();
    for_each_subset(all, [&](VarSet s) {
        if (!is_inf(g(s))) finite.push_back(s);
    });
    std::sort(finite.begin(), finite.end());

    auto violates = [&](VarSet x, VarSet y, double& f) {
        if (x.subset_of(y) || y.subset_of(x)) return false;
        f = f_value(g, x, y);
        if (is_inf(f)) return false;
        const double gu = g(x | y);
        return is_inf(gu) || gu > f + kTol;
    };

    // f is symmetric and the tie-break prefers the smaller x, so visit x < y only.
    double c = kInf;
    for (std::size_t i = 0; i < finite.size(); ++i) {
        for (std::size_t j = i + 1; j < finite.size(); ++j) {
            double f = 0;
            if (violates(finite[i], finite[j], f) && f < c) c = f;
        }
    }
    TruncationResult out;
    out.c = c;
    if (is_inf(c)) return out;

    std::tuple<VarSet, VarSet, VarSet> best{all, all, all};
    bool have = false;
    for (std::size_t i = 0; i < finite.size(); ++i) {
        for (std::size_t j = i + 1; j < finite.size(); ++j) {
            const VarSet x = finite[i];
            const VarSet y = finite[j];
            double f = 0;
            if (!violates(x, y, f) || f > c + kTol) continue;
            const auto key = std::make_tuple(x | y, x, y);
            if (!have || key < best) {
                best = key;
                have = true;
            }
        }
    }
    out.witness = Violation{std::get<1>(best), std::get<2>(best)};
    // Report the witness's own f so that c = f(X, Y) exactly.
    out.c = f_value(g, out.witness->x, out.witness->y);
    return out;
}

bool is_monotone(const SetFunction& g) {
    if (std::abs(g(VarSet{})) > kTol) return false;
    const VarSet all = g.all();
    bool ok = true;
    // Checking single-element extensions suffices for monotonicity.
    for_each_subset(all, [&](VarSet s) {
        for (int v : (all - s).members()) {
            const double lo = g(s);
            const double hi = g(s | VarSet::single(v));
            if (is_inf(hi)) continue;
            if (is_inf(lo) || lo > hi + kTol) ok = false;
        }
    });
    return ok;
}

std::size_t covered_count(const SetFunction& g, double c) {
    std::size_t count = 0;
    for (double v : g.values()) {
        if (is_inf(c) || (!is_inf(v) && v <= c + kTol)) ++count;
    }
    return count;
}

TruncationResult truncate(const SetFunction& g) {
    if (!is_monotone(g)) throw InvariantError("truncate requires a monotone set function with g(∅) = 0");
    TruncationResult out = min_violation(g);
    out.h = g;
    for_each_subset(g.all(), [&](VarSet s) {
        if (g(s) > out.c) out.h[s] = out.c;
        if (is_inf(out.c) || (!is_inf(g(s)) && g(s) <= out.c + kTol)) out.covered.push_back(s);
    });
    std::sort(out.covered.begin(), out.covered.end());
    return out;
}

std::optional<ShannonViolation> find_shannon_violation(const SetFunction& h) {
    using Kind = ShannonViolation::Kind;
    if (is_inf(h(VarSet{})) || std::abs(h(VarSet{})) > kTol) return ShannonViolation{Kind::Normalization, {}, {}};
    const VarSet all = h.all();
    std::optional<ShannonViolation> mono;
    for_each_subset(all, [&](VarSet big) {
        if (mono) return;
        for_each_subset(big, [&](VarSet small) {
            if (mono) return;
            const double lo = h(small);
            const double hi = h(big);
            if (is_inf(hi)) return;
            if (is_inf(lo) || lo > hi + kTol) mono = ShannonViolation{Kind::Monotonicity, small, big};
        });
    });
    if (mono) return mono;
    const TruncationResult t = min_violation(h);
    if (t.witness) return ShannonViolation{Kind::Submodularity, t.witness->x, t.witness->y};
    return std::nullopt;
}

std::string check_polymatroid(const SetFunction& h, const Universe* names) {
    const auto v = find_shannon_violation(h);
    if (!v) return {};
    switch (v->kind) {
        case ShannonViolation::Kind::Normalization:
            return "normalization violated: h(∅) != 0";
        case ShannonViolation::Kind::Monotonicity:
            return "monotonicity violated: h(" + set_name(v->a, names) + ") > h(" + set_name(v->b, names) + ")";
        case ShannonViolation::Kind::Submodularity:
            return "submodularity violated at (" + set_name(v->a, names) + ", " + set_name(v->b, names) + ")";
    }
    return "unknown violation";
}

bool is_polymatroid(const SetFunction& h) { return !find_shannon_violation(h).has_value(); }

bool satisfies_term(const SetFunction& h, const StatTerm& t) {
    const double joint = h(t.x | t.y);
    const double given = h(t.x);
    if (is_inf(given)) return true;
    if (is_inf(joint)) return false;
    return joint - given <= t.exponent + kTol;
}

bool satisfies_stats(const SetFunction& h, const StatisticsSpec& stats) {
    return std::all_of(stats.terms.begin(), stats.terms.end(), [&](const StatTerm& t) { return satisfies_term(h, t); });
}

std::string describe(const SetFunction& g, const Universe& u) {
    std::ostringstream out;
    bool first = true;
    for_each_subset(g.all(), [&](VarSet) {});
    for (std::size_t bits = 0; bits < g.table_size(); ++bits) {
        const VarSet s(static_cast<VarSet::Bits>(bits));
        if (!first) out << ' ';
        first = false;
        out << u.render(s) << ':';
        if (is_inf(g(s))) {
            out << "inf";
        } else {
            out << g(s);
        }
    }
    return out.str();
}

}  // namespace jaguar
