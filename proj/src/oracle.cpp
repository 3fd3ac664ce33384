#include "jaguar/oracle.hpp"

#include <fstream>
#include <random>
#include <unordered_set>

#include <json.hpp>

#include "jaguar/error.hpp"

namespace jaguar {

namespace {

constexpr std::uint32_t kUnbound = 0xffffffffu;

struct Binding {
    std::vector<std::uint32_t> value;  // kUnbound or a Value id, per variable
};

void emit(const ConjunctiveQuery& q, const Binding& b, std::vector<Value>& out, bool& any) {
    any = true;
    for (int v : q.free.members()) out.push_back(static_cast<Value>(b.value[v]));
}

Relation finish(VarSet free, std::vector<Value> flat, bool any) {
    if (free.empty()) return any ? Relation::unit() : Relation(VarSet{});
    return Relation::from_rows(free, std::move(flat));
}

}  // namespace

Relation brute_force(const ConjunctiveQuery& q, const DatabaseInstance& d, std::size_t budget) {
    std::vector<const Relation*> rels;
    std::vector<std::vector<int>> vars_of;
    for (const Atom& a : q.atoms) {
        const Relation* r = d.find(a.schema);
        if (r == nullptr) throw InputError("no relation for atom " + a.relation);
        rels.push_back(r);
        vars_of.push_back(a.schema.members());
    }
    Binding b{std::vector<std::uint32_t>(q.num_vars(), kUnbound)};
    std::vector<Value> out;
    bool any = false;
    std::size_t steps = 0;

    auto visit = [&](auto&& self, std::size_t depth) -> void {
        if (depth == rels.size()) {
            emit(q, b, out, any);
            return;
        }
        const Relation& r = *rels[depth];
        const auto& vars = vars_of[depth];
        std::vector<int> newly;
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (++steps > budget) throw LimitError("brute force budget exceeded");
            auto row = r.row(i);
            bool ok = true;
            newly.clear();
            for (std::size_t k = 0; k < vars.size(); ++k) {
                auto& slot = b.value[vars[k]];
                const auto val = static_cast<std::uint32_t>(row[k]);
                if (slot == kUnbound) {
                    slot = val;
                    newly.push_back(vars[k]);
                } else if (slot != val) {
                    ok = false;
                    break;
                }
            }
            if (ok) self(self, depth + 1);
            for (int v : newly) b.value[v] = kUnbound;
        }
    };
    visit(visit, 0);
    return finish(q.free, std::move(out), any);
}

Relation brute_force_by_assignment(const ConjunctiveQuery& q, const DatabaseInstance& d, std::size_t budget) {
    const int nv = q.num_vars();
    // Active domain of v: values seen in v's column of every atom over v.
    std::vector<std::vector<Value>> domain(nv);
    std::vector<bool> seeded(nv, false);
    for (const Atom& a : q.atoms) {
        const Relation& r = d.at(a.schema);
        const auto vars = a.schema.members();
        for (std::size_t k = 0; k < vars.size(); ++k) {
            std::vector<Value> col;
            for (std::size_t i = 0; i < r.size(); ++i) col.push_back(r.row(i)[k]);
            std::sort(col.begin(), col.end());
            col.erase(std::unique(col.begin(), col.end()), col.end());
            auto& dom = domain[vars[k]];
            if (!seeded[vars[k]]) {
                dom = std::move(col);
                seeded[vars[k]] = true;
            } else {
                std::vector<Value> both;
                std::set_intersection(dom.begin(), dom.end(), col.begin(), col.end(), std::back_inserter(both));
                dom = std::move(both);
            }
        }
    }
    std::vector<Value> assignment(nv);
    std::vector<Value> out;
    bool any = false;
    std::size_t steps = 0;
    std::vector<Value> probe;

    auto visit = [&](auto&& self, int v) -> void {
        if (v == nv) {
            for (const Atom& a : q.atoms) {
                probe.clear();
                for (int u : a.schema.members()) probe.push_back(assignment[u]);
                if (!d.at(a.schema).contains(probe)) return;
            }
            any = true;
            for (int u : q.free.members()) out.push_back(assignment[u]);
            return;
        }
        for (Value x : domain[v]) {
            if (++steps > budget) throw LimitError("assignment enumeration budget exceeded");
            assignment[v] = x;
            self(self, v + 1);
        }
    };
    visit(visit, 0);
    return finish(q.free, std::move(out), any);
}

ConjunctiveQuery four_cycle_query(bool boolean) {
    return parse_query(boolean ? "Q() :- R(X,Y), S(Y,Z), T(Z,W), U(W,X)."
                               : "Q(X,Y,Z,W) :- R(X,Y), S(Y,Z), T(Z,W), U(W,X).");
}

std::map<std::string, Table> square_tables(std::size_t m) {
    if (m < 2 || m % 2 != 0) throw InputError("square instance needs an even m >= 2, got " + std::to_string(m));
    const std::size_t half = m / 2;
    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 1; i <= half; ++i) rows.push_back({std::to_string(i), "1"});
    for (std::size_t i = 2; i <= half; ++i) rows.push_back({"1", std::to_string(i)});
    std::map<std::string, Table> out;
    out["R"] = Table{{"X", "Y"}, rows};
    out["S"] = Table{{"Y", "Z"}, rows};
    out["T"] = Table{{"Z", "W"}, rows};
    out["U"] = Table{{"W", "X"}, rows};
    return out;
}

DatabaseInstance gen_square(std::size_t m, Dictionary& dict) {
    return instance_for(four_cycle_query(), square_tables(m), dict);
}

std::map<std::string, Table> gen_random_tables(std::uint64_t seed, const std::vector<RandomRelationSpec>& specs,
                                               std::size_t domain_size) {
    if (domain_size == 0) throw InputError("domain size must be positive");
    std::mt19937_64 rng(seed);
    std::map<std::string, Table> out;
    for (const auto& spec : specs) {
        if (spec.vars.empty()) throw InputError("relation '" + spec.name + "' has no variables");
        // domain_size^arity, saturated at 2^62.
        constexpr std::uint64_t cap = std::uint64_t{1} << 62;
        std::uint64_t total = 1;
        for (std::size_t i = 0; i < spec.vars.size() && total < cap; ++i) {
            total = total > cap / domain_size ? cap : total * domain_size;
        }
        if (spec.size > total) {
            throw InputError("relation '" + spec.name + "': size " + std::to_string(spec.size) +
                             " exceeds domain_size^arity");
        }
        const std::uint64_t space = total;
        // Floyd's sampling without replacement.
        std::unordered_set<std::uint64_t> chosen;
        std::vector<std::uint64_t> order;
        for (std::uint64_t j = space - spec.size; j < space; ++j) {
            std::uniform_int_distribution<std::uint64_t> pick(0, j);
            std::uint64_t t = pick(rng);
            if (!chosen.insert(t).second) {
                chosen.insert(j);
                t = j;
            }
            order.push_back(t);
        }
        std::sort(order.begin(), order.end());
        Table table{spec.vars, {}};
        for (std::uint64_t code : order) {
            std::vector<std::string> row(spec.vars.size());
            for (std::size_t k = spec.vars.size(); k-- > 0;) {
                row[k] = std::to_string(code % domain_size + 1);
                code /= domain_size;
            }
            table.rows.push_back(std::move(row));
        }
        if (!out.emplace(spec.name, std::move(table)).second) {
            throw InputError("relation '" + spec.name + "' specified twice");
        }
    }
    return out;
}

DatabaseInstance gen_random(std::uint64_t seed, const ConjunctiveQuery& q, const std::vector<std::size_t>& sizes,
                            std::size_t domain_size, Dictionary& dict) {
    if (sizes.size() != q.atoms.size()) throw InputError("one size per atom expected");
    std::vector<RandomRelationSpec> specs;
    for (std::size_t i = 0; i < q.atoms.size(); ++i) {
        specs.push_back({q.atoms[i].relation, q.vars.names_of(q.atoms[i].schema), sizes[i]});
    }
    return instance_for(q, gen_random_tables(seed, specs, domain_size), dict);
}

std::vector<RandomRelationSpec> parse_random_spec(const std::string& json_text, std::size_t& domain_size) {
    std::vector<RandomRelationSpec> out;
    try {
        const auto j = nlohmann::json::parse(json_text);
        domain_size = j.at("domain").get<std::size_t>();
        for (const auto& r : j.at("relations")) {
            out.push_back({r.at("name").get<std::string>(), r.at("vars").get<std::vector<std::string>>(),
                           r.at("size").get<std::size_t>()});
        }
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("bad random-instance spec: ") + e.what());
    }
    return out;
}

void write_tables(const std::filesystem::path& dir, const std::map<std::string, Table>& tables) {
    std::filesystem::create_directories(dir);
    for (const auto& [name, t] : tables) {
        std::ofstream out(dir / (name + ".tsv"));
        if (!out) throw InputError("cannot write into '" + dir.string() + "'");
        for (std::size_t i = 0; i < t.header.size(); ++i) out << (i ? "\t" : "") << t.header[i];
        out << '\n';
        for (const auto& row : t.rows) {
            for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "\t" : "") << row[i];
            out << '\n';
        }
    }
}

}  // namespace jaguar
