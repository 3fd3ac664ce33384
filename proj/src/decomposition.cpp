#include "jaguar/decomposition.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "jaguar/error.hpp"

namespace jaguar {

namespace {

struct Node {
    VarSet bag;
    std::set<int> adj;
    bool alive = true;
};

class Enumerator {
public:
    explicit Enumerator(const ConjunctiveQuery& q) : q_(q), all_(q.all()), free_(q.free) {
        adj_.assign(q.num_vars(), VarSet{});
        for (const auto& atom : q.atoms) {
            for (int v : atom.schema.members()) adj_[v] |= atom.schema - VarSet::single(v);
        }
        restrict_order_ = !free_.empty() && free_ != all_;
    }

    std::vector<TreeDecomposition> run() {
        std::vector<int> order;
        std::vector<VarSet> bags;
        explore(VarSet{}, order, bags);
        return std::move(found_);
    }

private:
    // Neighbours of v in the fill graph after eliminating `gone`: vertices
    // outside gone ∪ {v} reachable from v through eliminated vertices.
    VarSet fill_neighbours(int v, VarSet gone) const {
        VarSet seen = VarSet::single(v);
        VarSet result;
        std::vector<int> stack{v};
        while (!stack.empty()) {
            const int u = stack.back();
            stack.pop_back();
            for (int w : (adj_[u] - seen).members()) {
                seen |= VarSet::single(w);
                if (gone.contains(w)) {
                    stack.push_back(w);
                } else {
                    result |= VarSet::single(w);
                }
            }
        }
        return result;
    }

    void explore(VarSet gone, std::vector<int>& order, std::vector<VarSet>& bags) {
        if (gone == all_) {
            build(order, bags);
            return;
        }
        std::vector<VarSet> key_bags = bags;
        std::sort(key_bags.begin(), key_bags.end());
        if (!visited_.emplace(gone, std::move(key_bags)).second) return;

        VarSet candidates = all_ - gone;
        if (restrict_order_ && !(candidates - free_).empty()) candidates = candidates - free_;
        for (int v : candidates.members()) {
            order.push_back(v);
            bags.push_back(VarSet::single(v) | fill_neighbours(v, gone));
            explore(gone | VarSet::single(v), order, bags);
            bags.pop_back();
            order.pop_back();
        }
    }

    bool may_absorb(VarSet child, VarSet into) const {
        if (!child.subset_of(into)) return false;
        // Keep bags ⊆ F that would otherwise vanish into a non-free bag:
        // they are the free-connex witness.
        if (restrict_order_ && child.subset_of(free_) && !into.subset_of(free_)) return false;
        return true;
    }

    void build(const std::vector<int>& order, const std::vector<VarSet>& bags) {
        const int n = static_cast<int>(order.size());
        std::vector<int> pos(q_.num_vars());
        for (int i = 0; i < n; ++i) pos[order[i]] = i;

        std::vector<Node> nodes(n);
        std::vector<int> roots;
        for (int i = 0; i < n; ++i) {
            nodes[i].bag = bags[i];
            int parent = -1;
            for (int u : (bags[i] - VarSet::single(order[i])).members()) {
                if (parent < 0 || pos[u] < parent) parent = pos[u];
            }
            if (parent < 0) {
                roots.push_back(i);
            } else {
                nodes[i].adj.insert(parent);
                nodes[parent].adj.insert(i);
            }
        }
        // Disconnected hypergraphs give a forest; chain the roots.
        for (std::size_t r = 1; r < roots.size(); ++r) {
            nodes[roots[r - 1]].adj.insert(roots[r]);
            nodes[roots[r]].adj.insert(roots[r - 1]);
        }

        bool changed = true;
        while (changed) {
            changed = false;
            for (int a = 0; a < n && !changed; ++a) {
                if (!nodes[a].alive) continue;
                for (int b : nodes[a].adj) {
                    if (!may_absorb(nodes[a].bag, nodes[b].bag)) continue;
                    for (int c : nodes[a].adj) {
                        if (c == b) continue;
                        nodes[c].adj.erase(a);
                        nodes[c].adj.insert(b);
                        nodes[b].adj.insert(c);
                    }
                    nodes[b].adj.erase(a);
                    nodes[a].adj.clear();
                    nodes[a].alive = false;
                    changed = true;
                    break;
                }
            }
        }

        std::vector<int> alive;
        for (int i = 0; i < n; ++i) {
            if (nodes[i].alive) alive.push_back(i);
        }
        std::sort(alive.begin(), alive.end(), [&](int a, int b) { return nodes[a].bag < nodes[b].bag; });
        std::vector<int> index(n, -1);
        TreeDecomposition td;
        for (std::size_t k = 0; k < alive.size(); ++k) {
            index[alive[k]] = static_cast<int>(k);
            td.bags.push_back(nodes[alive[k]].bag);
        }
        for (int a : alive) {
            for (int b : nodes[a].adj) {
                if (index[a] < index[b]) td.edges.emplace_back(index[a], index[b]);
            }
        }
        std::sort(td.edges.begin(), td.edges.end());
        for (std::size_t k = 1; k < td.bags.size(); ++k) {
            if (td.bags[k] == td.bags[k - 1]) return;
        }
        if (!attach_free_core(td)) return;
        if (seen_bag_sets_.insert(td.bags).second) found_.push_back(std::move(td));
    }

    bool attach_free_core(TreeDecomposition& td) const {
        td.free_core.clear();
        const int n = static_cast<int>(td.bags.size());
        if (free_.empty()) return true;
        if (free_ == all_) {
            td.free_core.resize(n);
            std::iota(td.free_core.begin(), td.free_core.end(), 0);
            return true;
        }
        std::vector<std::vector<int>> adj(n);
        for (auto [a, b] : td.edges) {
            adj[a].push_back(b);
            adj[b].push_back(a);
        }
        std::vector<bool> done(n, false);
        for (int s = 0; s < n; ++s) {
            if (done[s] || !td.bags[s].subset_of(free_)) continue;
            std::vector<int> comp{s};
            done[s] = true;
            VarSet covered;
            for (std::size_t i = 0; i < comp.size(); ++i) {
                covered |= td.bags[comp[i]];
                for (int t : adj[comp[i]]) {
                    if (!done[t] && td.bags[t].subset_of(free_)) {
                        done[t] = true;
                        comp.push_back(t);
                    }
                }
            }
            if (covered == free_) {
                std::sort(comp.begin(), comp.end());
                td.free_core = std::move(comp);
                return true;
            }
        }
        return false;
    }

    const ConjunctiveQuery& q_;
    VarSet all_;
    VarSet free_;
    bool restrict_order_ = false;
    std::vector<VarSet> adj_;
    std::set<std::pair<VarSet, std::vector<VarSet>>> visited_;
    std::set<std::vector<VarSet>> seen_bag_sets_;
    std::vector<TreeDecomposition> found_;
};

}  // namespace

TreeDecomposition fallback_td(const ConjunctiveQuery& q) {
    TreeDecomposition td;
    if (q.free.empty()) {
        td.bags = {q.all()};
    } else if (q.free == q.all()) {
        td.bags = {q.all()};
        td.free_core = {0};
    } else {
        td.bags = {q.free, q.all()};  // F's encoding is below V's
        td.edges = {{0, 1}};
        td.free_core = {0};
    }
    return td;
}

std::vector<TreeDecomposition> enumerate_free_connex_tds(const ConjunctiveQuery& q) {
    return enumerate_free_connex_tds(q, configured_max_vars());
}

std::vector<TreeDecomposition> enumerate_free_connex_tds(const ConjunctiveQuery& q, int max_vars) {
    if (q.num_vars() > max_vars) {
        throw LimitError("query has " + std::to_string(q.num_vars()) + " variables; the limit is " +
                         std::to_string(max_vars) + " (JAGUAR_MAX_VARS)");
    }
    auto family = Enumerator(q).run();
    TreeDecomposition fb = fallback_td(q);
    const bool present = std::any_of(family.begin(), family.end(), [&](const auto& td) { return td.bags == fb.bags; });
    if (!present) family.push_back(std::move(fb));
    std::sort(family.begin(), family.end(), [](const auto& a, const auto& b) { return a.bags < b.bags; });
    return family;
}

std::string check_td(const ConjunctiveQuery& q, const TreeDecomposition& td) {
    const int n = static_cast<int>(td.bags.size());
    if (n == 0) return "no bags";
    for (const auto& atom : q.atoms) {
        if (std::none_of(td.bags.begin(), td.bags.end(), [&](VarSet b) { return atom.schema.subset_of(b); })) {
            return "atom " + atom.relation + " is not contained in any bag";
        }
    }
    for (int i = 0; i < n; ++i) {
        if (!td.bags[i].subset_of(q.all())) return "bag mentions variables outside the query";
        for (int j = i + 1; j < n; ++j) {
            if (td.bags[i] == td.bags[j]) return "bags are not distinct";
        }
    }
    if (static_cast<int>(td.edges.size()) != n - 1) return "edge count does not describe a tree";
    std::vector<std::vector<int>> adj(n);
    for (auto [a, b] : td.edges) {
        if (a < 0 || b < 0 || a >= n || b >= n || a == b) return "edge endpoint out of range";
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    auto reach = [&](int start, auto&& keep) {
        std::vector<bool> seen(n, false);
        std::vector<int> stack{start};
        seen[start] = true;
        int count = 0;
        while (!stack.empty()) {
            const int u = stack.back();
            stack.pop_back();
            ++count;
            for (int w : adj[u]) {
                if (!seen[w] && keep(w)) {
                    seen[w] = true;
                    stack.push_back(w);
                }
            }
        }
        return count;
    };
    if (reach(0, [](int) { return true; }) != n) return "tree is disconnected";
    for (int v = 0; v < q.num_vars(); ++v) {
        std::vector<int> holders;
        for (int i = 0; i < n; ++i) {
            if (td.bags[i].contains(v)) holders.push_back(i);
        }
        if (holders.empty()) return "variable " + q.vars.name(v) + " is in no bag";
        const int got = reach(holders[0], [&](int w) { return td.bags[w].contains(v); });
        if (got != static_cast<int>(holders.size())) return "bags containing " + q.vars.name(v) + " are not connected";
    }
    if (!q.free.empty() && q.free != q.all()) {
        if (td.free_core.empty()) return "free-connex witness missing";
        std::vector<bool> in_core(n, false);
        VarSet covered;
        for (int t : td.free_core) {
            if (t < 0 || t >= n) return "free-core node out of range";
            if (!td.bags[t].subset_of(q.free)) return "free-core bag contains a non-free variable";
            in_core[t] = true;
            covered |= td.bags[t];
        }
        if (covered != q.free) return "free-core bags do not cover the free variables";
        const int got = reach(td.free_core[0], [&](int w) { return in_core[w]; });
        if (got != static_cast<int>(td.free_core.size())) return "free core is not connected";
    }
    return {};
}

bool covers(const std::vector<VarSet>& available, const TreeDecomposition& td) {
    return std::all_of(td.bags.begin(), td.bags.end(), [&](VarSet b) {
        return std::find(available.begin(), available.end(), b) != available.end();
    });
}

bool covers(const DatabaseInstance& d, const TreeDecomposition& td) {
    return std::all_of(td.bags.begin(), td.bags.end(), [&](VarSet b) { return d.has(b); });
}

std::vector<BagSelector> bag_selectors(const std::vector<TreeDecomposition>& family, std::size_t limit) {
    if (family.empty()) throw InvariantError("empty decomposition family");
    std::size_t total = 1;
    for (const auto& td : family) {
        if (td.bags.empty()) throw InvariantError("decomposition without bags");
        if (total > limit / td.bags.size()) throw LimitError("bag selector count exceeds the configured limit");
        total *= td.bags.size();
    }
    if (total > limit) throw LimitError("bag selector count exceeds the configured limit");
    std::vector<BagSelector> out;
    out.reserve(total);
    BagSelector cur{std::vector<int>(family.size(), 0)};
    while (true) {
        out.push_back(cur);
        int k = static_cast<int>(family.size()) - 1;
        while (k >= 0 && cur.choice[k] + 1 == static_cast<int>(family[k].bags.size())) {
            cur.choice[k] = 0;
            --k;
        }
        if (k < 0) break;
        ++cur.choice[k];
    }
    return out;
}

std::vector<VarSet> selector_bags(const std::vector<TreeDecomposition>& family, const BagSelector& s) {
    std::vector<VarSet> out;
    for (std::size_t i = 0; i < family.size(); ++i) out.push_back(family[i].bags.at(s.choice.at(i)));
    return out;
}

}  // namespace jaguar
