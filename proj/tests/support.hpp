#pragma once

#include <random>
#include <string>
#include <vector>

#include "jaguar/database.hpp"
#include "jaguar/query.hpp"
#include "jaguar/relation.hpp"
#include "jaguar/set_function.hpp"

namespace testing {

using namespace jaguar;

inline VarSet vs(std::initializer_list<int> vars) {
    VarSet s;
    for (int v : vars) s |= VarSet::single(v);
    return s;
}

// Rows given in ascending-variable order of `schema`.
inline Relation rel(Dictionary& dict, VarSet schema, const std::vector<std::vector<long long>>& rows) {
    std::vector<Value> flat;
    for (const auto& r : rows) {
        for (long long v : r) flat.push_back(dict.intern_int(v));
    }
    if (schema.empty()) return rows.empty() ? Relation(schema) : Relation::unit();
    return Relation::from_rows(schema, std::move(flat));
}

// Rows of `r` rendered back to integers, in relation order.
inline std::vector<std::vector<long long>> rows_of(const Dictionary& dict, const Relation& r) {
    std::vector<std::vector<long long>> out;
    for (std::size_t i = 0; i < r.size(); ++i) {
        std::vector<long long> row;
        for (Value v : r.row(i)) row.push_back(std::stoll(dict.text(v)));
        out.push_back(std::move(row));
    }
    std::sort(out.begin(), out.end());
    return out;
}

inline const char* kTriangle = "Q(X,Y,Z) :- R(X,Y), S(Y,Z), T(X,Z).";
inline const char* kFourCycle = "Q(X,Y,Z,W) :- R(X,Y), S(Y,Z), T(Z,W), U(W,X).";
inline const char* kFourCycleBool = "Q() :- R(X,Y), S(Y,Z), T(Z,W), U(W,X).";
inline const char* kTwoPathProj = "Q(X,Z) :- R(X,Y), S(Y,Z).";
inline const char* kTwoPathFull = "Q(X,Y,Z) :- R(X,Y), S(Y,Z).";
inline const char* kFiveCycle = "Q(A,B,C,D,E) :- R(A,B), S(B,C), T(C,D), U(D,E), P(E,A).";

// Random monotone g with g(∅) = 0: entries from {0, 0.25, ..., 3, ∞},
// then closed upward by max over subsets.
inline SetFunction random_monotone(std::mt19937_64& rng, int nv, double inf_prob = 0.2) {
    SetFunction g(nv, 0.0);
    std::uniform_int_distribution<int> step(0, 12);
    std::bernoulli_distribution inf(inf_prob);
    for (std::size_t b = 1; b < g.table_size(); ++b) {
        g[VarSet(static_cast<VarSet::Bits>(b))] = inf(rng) ? kInf : 0.25 * step(rng);
    }
    // Max-closure in increasing encoding order: every subset precedes its supersets.
    for (std::size_t b = 1; b < g.table_size(); ++b) {
        const VarSet s(static_cast<VarSet::Bits>(b));
        for (int v : s.members()) {
            const double sub = g(s - VarSet::single(v));
            if (sub > g(s)) g[s] = sub;
        }
    }
    return g;
}

}  // namespace testing
