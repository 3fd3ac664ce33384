#include "jaguar/calibrate.hpp"

#include <functional>
#include <queue>
#include <tuple>
#include <vector>

#include "jaguar/error.hpp"

namespace jaguar {

namespace {

struct Pred {
    enum class Kind { None, Subset, Stat };
    Kind kind = Kind::None;
    VarSet from;
    int term = -1;
};

}  // namespace

CalibrateResult calibrate(const StatisticsSpec& stats, const DatabaseInstance& d, const SetFunction& g,
                          [[maybe_unused]] std::size_t n) {
    const VarSet all = g.all();
    CalibrateResult out{d, g, 0, 0};
    SetFunction& dist = out.g;
    std::vector<Pred> pred(g.table_size());
    std::vector<bool> done(g.table_size(), false);

    if (dist(VarSet{}) > 0.0) {
        dist[VarSet{}] = 0.0;
        pred[0].kind = Pred::Kind::Subset;  // the empty path; settles as {()}
    }

    using Item = std::tuple<double, VarSet>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
    for_each_subset(all, [&](VarSet s) {
        if (!is_inf(dist(s))) queue.emplace(dist(s), s);
    });

    auto relax = [&](VarSet to, double value, Pred p) {
        if (value < dist(to)) {
            dist[to] = value;
            pred[to.bits()] = p;
            queue.emplace(value, to);
        }
    };

    while (!queue.empty()) {
        const auto [value, x] = queue.top();
        queue.pop();
        if (done[x.bits()] || value != dist(x)) continue;
        done[x.bits()] = true;

        const Pred& p = pred[x.bits()];
        if (p.kind != Pred::Kind::None) {
            Relation r;
            if (x.empty()) {
                r = Relation::unit();
            } else if (p.kind == Pred::Kind::Subset) {
                r = project(out.d.at(p.from), x);
            } else {
                const StatTerm& t = stats.terms[p.term];
                const Relation* guard = out.d.find(t.guard_schema);
                if (guard == nullptr) throw InvariantError("calibrate: guard relation is missing from D");
                r = join(out.d.at(p.from), project(*guard, t.x | t.y));
            }
            out.tuples_produced += r.size();
            ++out.repairs;
            out.d = out.d.augment(std::move(r), true);
        } else if (!out.d.has(x)) {
            throw InvariantError("calibrate: finite g without a relation (cardinality invariant)");
        }

        for (int v : x.members()) {
            const VarSet sub = x - VarSet::single(v);
            if (!done[sub.bits()]) relax(sub, value, Pred{Pred::Kind::Subset, x, -1});
        }
        for (std::size_t i = 0; i < stats.terms.size(); ++i) {
            const StatTerm& t = stats.terms[i];
            if (t.x != x || t.y.subset_of(x)) continue;
            const VarSet to = x | t.y;
            if (!done[to.bits()]) relax(to, value + t.exponent, Pred{Pred::Kind::Stat, x, static_cast<int>(i)});
        }
    }
    return out;
}

SetFunction shortest_path_oracle(const SetFunction& g_in, const StatisticsSpec& stats) {
    struct Edge {
        std::uint32_t from;
        std::uint32_t to;
        double w;
    };
    const std::size_t size = g_in.table_size();
    // Node `size` is a separate source, so that the edge source → ∅ with
    // weight ḡ(∅) and the trivial empty path are both represented.
    std::vector<Edge> edges;
    const auto source = static_cast<std::uint32_t>(size);
    for (std::uint32_t s = 0; s < size; ++s) {
        if (!is_inf(g_in.values()[s])) edges.push_back({source, s, g_in.values()[s]});
        for (std::uint32_t t = 0; t < size; ++t) {
            if (t != s && (t & s) == t) edges.push_back({s, t, 0.0});
        }
    }
    edges.push_back({source, 0, 0.0});
    for (const StatTerm& t : stats.terms) {
        edges.push_back({t.x.bits(), (t.x | t.y).bits(), t.exponent});
    }
    std::vector<double> dist(size + 1, kInf);
    dist[source] = 0.0;
    for (std::size_t round = 0; round <= size; ++round) {
        bool changed = false;
        for (const Edge& e : edges) {
            if (is_inf(dist[e.from])) continue;
            if (dist[e.from] + e.w < dist[e.to]) {
                dist[e.to] = dist[e.from] + e.w;
                changed = true;
            }
        }
        if (!changed) break;
    }
    SetFunction out(g_in.num_vars(), kInf);
    for (std::uint32_t s = 0; s < size; ++s) out[VarSet(s)] = dist[s];
    return out;
}

}  // namespace jaguar
