#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "jaguar/value.hpp"
#include "jaguar/varset.hpp"

namespace jaguar {

// Column positions, within a relation over `schema`, of the members of
// `sub` (in ascending variable order). Requires sub ⊆ schema.
std::vector<int> columns_of(VarSet schema, VarSet sub);

// A finite set of tuples over a schema. Rows are stored row-major in one
// flat buffer, sorted lexicographically and free of duplicates, so two
// relations are equal iff their schemas and buffers are equal.
//
// The nullary schema has exactly two relations: the empty one and {()}.
class Relation {
public:
    explicit Relation(VarSet schema = VarSet{}) : schema_(schema), arity_(schema.size()) {}

    // Builds a relation from row-major values; sorts and deduplicates.
    static Relation from_rows(VarSet schema, std::vector<Value> flat);
    // Takes rows already sorted and distinct (a filtered sorted relation).
    static Relation from_sorted_rows(VarSet schema, std::vector<Value> flat);
    // The nullary relation {()}.
    static Relation unit();

    VarSet schema() const { return schema_; }
    int arity() const { return arity_; }
    std::size_t size() const { return rows_; }
    bool empty() const { return rows_ == 0; }

    std::span<const Value> row(std::size_t i) const {
        return {data_.data() + i * static_cast<std::size_t>(arity_), static_cast<std::size_t>(arity_)};
    }
    const std::vector<Value>& data() const { return data_; }
    bool contains(std::span<const Value> tuple) const;

    // π_X of this relation, computed once and kept for the relation's
    // lifetime. Copies share the memo. Not thread-safe.
    const Relation& projection(VarSet x) const;

    bool operator==(const Relation& other) const {
        return schema_ == other.schema_ && rows_ == other.rows_ && data_ == other.data_;
    }

private:
    struct Projections;

    VarSet schema_;
    int arity_ = 0;
    std::size_t rows_ = 0;
    std::vector<Value> data_;
    mutable std::shared_ptr<Projections> projections_;
};

using RelationPtr = std::shared_ptr<const Relation>;

// π_X(R). Throws SchemaError unless X ⊆ R.schema.
Relation project(const Relation& r, VarSet x);

// { t ∈ R : π_K(t) ∈ π_K(S) } with K = R.schema ∩ S.schema.
Relation semijoin(const Relation& r, const Relation& s);

// Natural join. Probes the larger input against a sorted index on the
// smaller one: O((|R| + |S|) log + |output| log).
Relation join(const Relation& r, const Relation& s);

// R ∩ S for relations over the same schema.
Relation intersect(const Relation& r, const Relation& s);

// R ∪ S for relations over the same schema.
Relation unite(const Relation& r, const Relation& s);

// deg_R(Y | X = x) = |π_Y(σ_{X=x}(R))|; `x` lists X's values in variable order.
std::size_t degree_at(const Relation& r, VarSet y, VarSet x, std::span<const Value> x_values);

// deg_R(Y | X) = max over x of degree_at; 0 for an empty relation.
std::size_t degree(const Relation& r, VarSet y, VarSet x);

}  // namespace jaguar
