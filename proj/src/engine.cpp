#include "jaguar/engine.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "jaguar/calibrate.hpp"
#include "jaguar/error.hpp"
#include "jaguar/oracle.hpp"

namespace jaguar {

namespace {

// Row ids of `r` grouped by their W-projection; groups in key order,
// rows within a group in relation order.
std::vector<std::vector<std::size_t>> groups_by(const Relation& r, VarSet w) {
    const auto cols = columns_of(r.schema(), w);
    std::vector<std::size_t> ids(r.size());
    std::iota(ids.begin(), ids.end(), std::size_t{0});
    auto key_less = [&](std::size_t a, std::size_t b) {
        auto ra = r.row(a);
        auto rb = r.row(b);
        for (int c : cols) {
            if (ra[c] != rb[c]) return ra[c] < rb[c];
        }
        return false;
    };
    std::stable_sort(ids.begin(), ids.end(), key_less);
    std::vector<std::vector<std::size_t>> out;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (i == 0 || key_less(ids[i - 1], ids[i])) out.emplace_back();
        out.back().push_back(ids[i]);
    }
    return out;
}

Relation gather(const Relation& r, const std::vector<std::size_t>& ids) {
    if (r.arity() == 0) return ids.empty() ? Relation(VarSet{}) : Relation::unit();
    std::vector<Value> flat;
    flat.reserve(ids.size() * r.arity());
    for (std::size_t i : ids) {
        auto row = r.row(i);
        flat.insert(flat.end(), row.begin(), row.end());
    }
    return Relation::from_rows(r.schema(), std::move(flat));
}

void append_rows(const Relation& r, std::vector<Value>& flat) { flat.insert(flat.end(), r.data().begin(), r.data().end()); }

}  // namespace

const char* edge_name(EdgeKind e) {
    switch (e) {
        case EdgeKind::Root: return "root";
        case EdgeKind::Light: return "light";
        case EdgeKind::Heavy: return "heavy";
    }
    return "?";
}

const char* status_name(TraceNode::Status s) {
    switch (s) {
        case TraceNode::Status::Branch: return "branch";
        case TraceNode::Status::Leaf: return "leaf";
        case TraceNode::Status::Empty: return "empty";
    }
    return "?";
}

std::pair<Relation, Relation> heavy_light_partition(const Relation& r, VarSet w, double tau) {
    std::vector<std::size_t> heavy;
    std::vector<std::size_t> light;
    for (const auto& group : groups_by(r, w)) {
        auto& dst = static_cast<double>(group.size()) > tau + kTol ? heavy : light;
        dst.insert(dst.end(), group.begin(), group.end());
    }
    return {gather(r, heavy), gather(r, light)};
}

std::size_t equal_degree_chunk(double theta) {
    return static_cast<std::size_t>(std::max(1.0, std::floor(theta + kTol)));
}

std::size_t equal_degree_parts(const Relation& rl, VarSet w, double theta, std::size_t k) {
    const std::size_t chunk = equal_degree_chunk(theta);
    std::size_t need = k;
    for (const auto& group : groups_by(rl, w)) need = std::max(need, (group.size() + chunk - 1) / chunk);
    return need;
}

std::vector<Relation> equal_degree_partition(const Relation& rl, VarSet w, double theta, std::size_t k) {
    if (k == 0) throw InvariantError("equal-degree partition into zero parts");
    const std::size_t chunk = equal_degree_chunk(theta);
    std::vector<std::vector<std::size_t>> parts(k);
    for (const auto& group : groups_by(rl, w)) {
        for (std::size_t i = 0; i < group.size(); ++i) {
            const std::size_t j = i / chunk;
            if (j >= k) {
                throw InvariantError("equal-degree partition: a group of " + std::to_string(group.size()) +
                                     " tuples does not fit in " + std::to_string(k) + " parts of " +
                                     std::to_string(chunk));
            }
            parts[j].push_back(group[i]);
        }
    }
    std::vector<Relation> out;
    for (const auto& ids : parts) out.push_back(gather(rl, ids));
    return out;
}

Relation yannakakis(const TreeDecomposition& td, const DatabaseInstance& d, VarSet free) {
    if (!covers(d, td)) throw InvariantError("yannakakis: decomposition is not covered by D");
    const std::size_t nb = td.bags.size();
    std::vector<Relation> rel;
    for (VarSet bag : td.bags) {
        Relation r = d.at(bag);
        for (const auto& [schema, entry] : d.entries()) {
            if (schema != bag) r = semijoin(r, *entry.relation);
            if (r.empty()) return Relation(free);
        }
        rel.push_back(std::move(r));
    }

    std::vector<std::vector<int>> adj(nb);
    for (auto [a, b] : td.edges) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    const int root = td.free_core.empty() ? 0 : td.free_core.front();
    std::vector<int> order{root};
    std::vector<int> parent(nb, -1);
    std::vector<bool> seen(nb, false);
    seen[root] = true;
    for (std::size_t i = 0; i < order.size(); ++i) {
        for (int nbr : adj[order[i]]) {
            if (!seen[nbr]) {
                seen[nbr] = true;
                parent[nbr] = order[i];
                order.push_back(nbr);
            }
        }
    }
    if (order.size() != nb) throw InvariantError("yannakakis: decomposition is not connected");

    for (std::size_t i = order.size(); i-- > 1;) {
        const int v = order[i];
        rel[parent[v]] = semijoin(rel[parent[v]], rel[v]);
    }
    for (std::size_t i = 1; i < order.size(); ++i) {
        const int v = order[i];
        rel[v] = semijoin(rel[v], rel[parent[v]]);
    }

    if (free.empty()) return rel[root].empty() ? Relation(VarSet{}) : Relation::unit();

    std::vector<bool> in_core(nb, false);
    for (int v : td.free_core) in_core[v] = true;
    Relation acc = Relation::unit();
    for (int v : order) {
        if (in_core[v]) acc = join(acc, rel[v]);
    }
    if (acc.schema() != free) acc = project(acc, free);
    return acc;
}

double potential(const DatabaseInstance& d, std::size_t n, int num_vars) {
    if (n < 2) throw InvariantError("potential requires N >= 2");
    double phi = 0.0;
    for (const auto& [schema, entry] : d.entries()) {
        const std::size_t size = entry.relation->size();
        if (size == 0) return -kInf;
        phi += log_base(static_cast<double>(size), static_cast<double>(n));
    }
    const std::size_t absent = (std::size_t{1} << num_vars) - d.num_relations();
    return phi + static_cast<double>(absent) * (num_vars + 1);
}

namespace {

class Evaluator {
public:
    Evaluator(const ConjunctiveQuery& q, const StatisticsSpec& stats, const EngineConfig& cfg, std::size_t n)
        : q_(q), stats_(stats), cfg_(cfg), n_(n), nv_(q.num_vars()) {
        family_ = enumerate_free_connex_tds(q, cfg.max_vars);
        n_eps_ = std::pow(static_cast<double>(n), cfg.epsilon);
        parts_ = static_cast<std::size_t>(std::max(1.0, std::ceil(n_eps_ - kTol)));
        if (cfg.max_depth != 0) {
            max_depth_ = cfg.max_depth;
        } else {
            const double phi_max = static_cast<double>(std::size_t{1} << nv_) * (nv_ + 1);
            max_depth_ = (std::size_t{1} << nv_) * (static_cast<std::size_t>(std::ceil(phi_max / cfg.epsilon)) + 1) + 8;
        }
        trace_.n = n;
        trace_.epsilon = cfg.epsilon;
        trace_.num_vars = nv_;
    }

    EvalResult run(const DatabaseInstance& d0) {
        const int root = new_node(std::nullopt, EdgeKind::Root, std::nullopt, 0);
        visit(root, d0, std::nullopt, 0);
        EvalResult out;
        if (q_.free.empty()) {
            out.answers = any_ ? Relation::unit() : Relation(VarSet{});
        } else {
            out.answers = Relation::from_rows(q_.free, std::move(flat_));
        }
        for (const auto& node : trace_.nodes) out.join_work += node.work;
        if (cfg_.trace) out.trace = std::move(trace_);
        return out;
    }

private:
    int new_node(std::optional<int> parent, EdgeKind edge, std::optional<int> light_index, int depth) {
        TraceNode node;
        node.id = static_cast<int>(trace_.nodes.size());
        node.parent = parent;
        node.edge = edge;
        node.light_index = light_index;
        node.depth = depth;
        trace_.nodes.push_back(std::move(node));
        return trace_.nodes.back().id;
    }

    TraceNode& node(int id) { return trace_.nodes[id]; }

    void visit(int id, DatabaseInstance d, std::optional<SetFunction> g, int depth) {
        if (static_cast<std::size_t>(depth) > max_depth_) {
            throw InvariantError("recursion depth " + std::to_string(depth) + " exceeds the guard " +
                                 std::to_string(max_depth_));
        }
        if (d.any_empty()) {
            node(id).status = TraceNode::Status::Empty;
            return;
        }
        node(id).phi = potential(d, n_, nv_);
        if (!g) {
            CalibrateResult cal = calibrate(stats_, d, init_g(d, nv_, n_), n_);
            node(id).work += cal.tuples_produced;
            d = std::move(cal.d);
            g = std::move(cal.g);
            if (d.any_empty()) {
                node(id).status = TraceNode::Status::Empty;
                return;
            }
        }
        const TruncationResult t = min_violation(*g);
        node(id).c = t.c;
        node(id).i_size = covered_count(*g, t.c);
        if (cfg_.dump_g) node(id).g = *g;

        for (std::size_t i = 0; i < family_.size(); ++i) {
            if (!covers(d, family_[i])) continue;
            const Relation a = yannakakis(family_[i], d, q_.free);
            node(id).status = TraceNode::Status::Leaf;
            node(id).terminal_td = static_cast<int>(i);
            node(id).answers = a.size();
            if (!a.empty()) any_ = true;
            if (!q_.free.empty()) append_rows(a, flat_);
            return;
        }

        if (!t.witness) throw InvariantError("g is a polymatroid but no decomposition is covered");
        const VarSet x = t.witness->x;
        const VarSet y = t.witness->y;
        const VarSet w = x & y;
        const double theta = std::pow(static_cast<double>(n_), (*g)(y) - (*g)(w));
        const Relation& ry = d.at(y);
        const Relation& rx = d.at(x);
        auto [heavy, light] = heavy_light_partition(ry, w, theta * n_eps_);
        std::vector<Relation> parts = equal_degree_partition(light, w, theta, equal_degree_parts(light, w, theta, parts_));
        {
            TraceNode& me = node(id);
            me.status = TraceNode::Status::Branch;
            me.witness = t.witness;
            me.w = w;
            me.theta = theta;
            me.y_size = ry.size();
            me.heavy_size = heavy.size();
            me.light_size = light.size();
            for (const auto& p : parts) me.part_sizes.push_back(p.size());
        }

        for (std::size_t i = 0; i < parts.size(); ++i) {
            // An empty part joins to nothing; part_sizes already records it.
            if (parts[i].empty()) continue;
            const int child = new_node(id, EdgeKind::Light, static_cast<int>(i) + 1, depth + 1);
            Relation joined = join(rx, parts[i]);
            node(child).join_out = joined.size();
            node(child).work += joined.size();
            DatabaseInstance dl = d.augment(std::move(joined), true);
            if (dl.any_empty()) {
                node(child).status = TraceNode::Status::Empty;
                continue;
            }
            CalibrateResult cal = calibrate(stats_, dl, g->with(x | y, t.c), n_);
            node(child).work += cal.tuples_produced;
            visit(child, std::move(cal.d), std::move(cal.g), depth + 1);
        }

        const int child = new_node(id, EdgeKind::Heavy, std::nullopt, depth + 1);
        if (heavy.empty()) {
            node(child).status = TraceNode::Status::Empty;
            return;
        }
        Relation pw = project(heavy, w);
        node(child).work += pw.size();
        visit(child, d.augment(std::move(pw), true), std::nullopt, depth + 1);
    }

    const ConjunctiveQuery& q_;
    const StatisticsSpec& stats_;
    EngineConfig cfg_;
    std::size_t n_;
    int nv_;
    std::vector<TreeDecomposition> family_;
    double n_eps_ = 1.0;
    std::size_t parts_ = 1;
    std::size_t max_depth_ = 0;
    RecursionTrace trace_;
    std::vector<Value> flat_;
    bool any_ = false;
};

}  // namespace

EvalResult evaluate(const ConjunctiveQuery& q, const StatisticsSpec& stats, const DatabaseInstance& d0,
                    const EngineConfig& config) {
    if (!(config.epsilon > 0.0)) throw InputError("epsilon must be positive");
    const std::size_t n = d0.size();
    if (n <= 1 || d0.any_empty()) {
        EvalResult out;
        out.answers = brute_force(q, d0);
        out.brute_force = true;
        out.trace.n = n;
        out.trace.epsilon = config.epsilon;
        out.trace.num_vars = q.num_vars();
        return out;
    }
    Evaluator ev(q, stats, config, n);
    return ev.run(d0);
}

BaselineResult evaluate_with_td(const ConjunctiveQuery& q, const DatabaseInstance& d0, const TreeDecomposition& td) {
    BaselineResult out;
    DatabaseInstance d = d0;
    for (VarSet bag : td.bags) {
        std::vector<const Atom*> inside;
        std::vector<const Atom*> touching;
        for (const Atom& a : q.atoms) {
            if (a.schema.subset_of(bag)) {
                inside.push_back(&a);
            } else if (!(a.schema & bag).empty()) {
                touching.push_back(&a);
            }
        }
        inside.insert(inside.end(), touching.begin(), touching.end());
        Relation r = Relation::unit();
        for (const Atom* a : inside) {
            const Relation& base = d0.at(a->schema);
            r = join(r, a->schema.subset_of(bag) ? base : project(base, a->schema & bag));
            out.join_work += r.size();
        }
        d = d.augment(std::move(r), true);
    }
    out.answers = yannakakis(td, d, q.free);
    return out;
}

}  // namespace jaguar

namespace jaguar {

TraceShape trace_shape(const RecursionTrace& trace) {
    TraceShape s;
    s.nodes = trace.nodes.size();
    std::vector<int> heavy(trace.nodes.size(), 0);
    std::vector<int> run(trace.nodes.size(), 0);
    for (const TraceNode& n : trace.nodes) {
        if (n.parent) {
            heavy[n.id] = heavy[*n.parent] + (n.edge == EdgeKind::Heavy ? 1 : 0);
            run[n.id] = n.edge == EdgeKind::Light ? run[*n.parent] + 1 : 0;
        }
        if (n.status == TraceNode::Status::Leaf) ++s.leaves;
        s.depth = std::max(s.depth, n.depth);
        s.heavy_edges_max = std::max(s.heavy_edges_max, heavy[n.id]);
        s.light_run_max = std::max(s.light_run_max, run[n.id]);
    }
    return s;
}

}  // namespace jaguar
