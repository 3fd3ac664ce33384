#include "jaguar/relation.hpp"

#include <algorithm>
#include <numeric>

#include "jaguar/error.hpp"

namespace jaguar {

namespace {

bool row_less(const Value* a, const Value* b, int arity) {
    return std::lexicographical_compare(a, a + arity, b, b + arity);
}

// Sorts row-major `flat` and drops duplicate rows; returns the row count.
std::size_t sort_unique_rows(int arity, std::vector<Value>& flat) {
    if (arity == 0) {
        // A nullary relation is either {} or {()}; the caller encodes which.
        return 0;
    }
    const std::size_t n = flat.size() / arity;
    if (arity == 1) {
        std::sort(flat.begin(), flat.end());
        flat.erase(std::unique(flat.begin(), flat.end()), flat.end());
        return flat.size();
    }
    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0U);
    const Value* base = flat.data();
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        return row_less(base + std::size_t{a} * arity, base + std::size_t{b} * arity, arity);
    });
    std::vector<Value> out;
    out.reserve(flat.size());
    const Value* prev = nullptr;
    for (std::uint32_t i : order) {
        const Value* cur = base + std::size_t{i} * arity;
        if (prev != nullptr && std::equal(prev, prev + arity, cur)) continue;
        out.insert(out.end(), cur, cur + arity);
        prev = cur;
    }
    flat.swap(out);
    return flat.size() / arity;
}

void append_columns(std::vector<Value>& out, std::span<const Value> row, const std::vector<int>& cols) {
    for (int c : cols) out.push_back(row[c]);
}

// A read-only index over a relation's rows sorted by a subset of columns.
class KeyIndex {
public:
    KeyIndex(const Relation& r, std::vector<int> key_cols) : rel_(r), key_cols_(std::move(key_cols)) {
        order_.resize(r.size());
        std::iota(order_.begin(), order_.end(), 0U);
        std::sort(order_.begin(), order_.end(), [&](std::uint32_t a, std::uint32_t b) {
            return compare(rel_.row(a), rel_.row(b)) < 0;
        });
    }

    // Row ids whose key columns equal `key`.
    std::span<const std::uint32_t> lookup(std::span<const Value> key) const {
        auto lo = std::lower_bound(order_.begin(), order_.end(), key, [&](std::uint32_t id, std::span<const Value> k) {
            return compare_key(rel_.row(id), k) < 0;
        });
        auto hi = std::upper_bound(lo, order_.end(), key, [&](std::span<const Value> k, std::uint32_t id) {
            return compare_key(rel_.row(id), k) > 0;
        });
        return {order_.data() + (lo - order_.begin()), static_cast<std::size_t>(hi - lo)};
    }

private:
    int compare(std::span<const Value> a, std::span<const Value> b) const {
        for (int c : key_cols_) {
            if (a[c] != b[c]) return a[c] < b[c] ? -1 : 1;
        }
        return 0;
    }
    int compare_key(std::span<const Value> row, std::span<const Value> key) const {
        for (std::size_t i = 0; i < key_cols_.size(); ++i) {
            const Value v = row[key_cols_[i]];
            if (v != key[i]) return v < key[i] ? -1 : 1;
        }
        return 0;
    }

    const Relation& rel_;
    std::vector<int> key_cols_;
    std::vector<std::uint32_t> order_;
};

}  // namespace

std::vector<int> columns_of(VarSet schema, VarSet sub) {
    if (!sub.subset_of(schema)) throw SchemaError("variable set is not contained in the relation schema");
    std::vector<int> cols;
    cols.reserve(sub.size());
    for (int v : sub.members()) cols.push_back(schema.rank_of(v));
    return cols;
}

Relation Relation::from_rows(VarSet schema, std::vector<Value> flat) {
    Relation r(schema);
    if (r.arity_ == 0) {
        throw SchemaError("nullary relations are built with Relation::unit() or Relation()");
    }
    if (flat.size() % r.arity_ != 0) throw SchemaError("row buffer length is not a multiple of the arity");
    r.rows_ = sort_unique_rows(r.arity_, flat);
    r.data_ = std::move(flat);
    return r;
}

Relation Relation::from_sorted_rows(VarSet schema, std::vector<Value> flat) {
    Relation r(schema);
    if (r.arity_ == 0) return flat.empty() ? Relation() : unit();
    r.rows_ = flat.size() / r.arity_;
    r.data_ = std::move(flat);
    return r;
}

Relation Relation::unit() {
    Relation r;
    r.rows_ = 1;
    return r;
}

bool Relation::contains(std::span<const Value> tuple) const {
    if (static_cast<int>(tuple.size()) != arity_) return false;
    if (arity_ == 0) return rows_ == 1;
    std::size_t lo = 0, hi = rows_;
    while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        auto r = row(mid);
        if (std::lexicographical_compare(r.begin(), r.end(), tuple.begin(), tuple.end())) {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    return lo < rows_ && std::equal(tuple.begin(), tuple.end(), row(lo).begin());
}

Relation project(const Relation& r, VarSet x) {
    const auto cols = columns_of(r.schema(), x);
    if (x == r.schema()) return r;
    if (x.empty()) return r.empty() ? Relation() : Relation::unit();
    std::vector<Value> flat;
    flat.reserve(r.size() * cols.size());
    for (std::size_t i = 0; i < r.size(); ++i) append_columns(flat, r.row(i), cols);
    return Relation::from_rows(x, std::move(flat));
}

struct Relation::Projections {
    std::vector<std::pair<VarSet, Relation>> entries;
};

const Relation& Relation::projection(VarSet x) const {
    if (x == schema_) return *this;
    if (!projections_) projections_ = std::make_shared<Projections>();
    for (const auto& [key, rel] : projections_->entries) {
        if (key == x) return rel;
    }
    Relation p = project(*this, x);
    // One slot per subset up front, so handed-out references stay valid.
    if (projections_->entries.empty()) projections_->entries.reserve(std::size_t{1} << arity_);
    projections_->entries.emplace_back(x, std::move(p));
    return projections_->entries.back().second;
}

Relation semijoin(const Relation& r, const Relation& s) {
    const VarSet key = r.schema() & s.schema();
    if (key.empty()) return s.empty() ? Relation(r.schema()) : r;
    const Relation& keys = s.projection(key);
    const auto cols = columns_of(r.schema(), key);
    std::vector<Value> kept;
    bool all = true;
    bool prefix = true;
    for (std::size_t k = 0; k < cols.size(); ++k) prefix = prefix && cols[k] == static_cast<int>(k);
    if (prefix && keys.size() <= 8 * r.size()) {
        // Key columns lead r's rows, so both sides are sorted on the key: merge.
        const std::size_t kw = cols.size();
        std::size_t j = 0;
        for (std::size_t i = 0; i < r.size(); ++i) {
            auto row = r.row(i);
            while (j < keys.size() && row_less(keys.row(j).data(), row.data(), static_cast<int>(kw))) ++j;
            if (j < keys.size() && std::equal(row.begin(), row.begin() + kw, keys.row(j).begin())) {
                kept.insert(kept.end(), row.begin(), row.end());
            } else {
                all = false;
            }
        }
        if (all) return r;
        return Relation::from_sorted_rows(r.schema(), std::move(kept));
    }
    std::vector<Value> probe(cols.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
        auto row = r.row(i);
        for (std::size_t k = 0; k < cols.size(); ++k) probe[k] = row[cols[k]];
        if (keys.contains(probe)) {
            kept.insert(kept.end(), row.begin(), row.end());
        } else {
            all = false;
        }
    }
    if (all) return r;
    if (r.arity() == 0) return Relation();
    return Relation::from_sorted_rows(r.schema(), std::move(kept));
}

Relation join(const Relation& r, const Relation& s) {
    const VarSet out_schema = r.schema() | s.schema();
    if (r.empty() || s.empty()) return Relation(out_schema);
    if (r.arity() == 0) return s;
    if (s.arity() == 0) return r;

    const bool build_on_r = r.size() < s.size();
    const Relation& build = build_on_r ? r : s;
    const Relation& probe = build_on_r ? s : r;
    const VarSet key = r.schema() & s.schema();

    const KeyIndex index(build, columns_of(build.schema(), key));
    const auto probe_key_cols = columns_of(probe.schema(), key);

    // For each output column: which side it comes from and its position.
    struct Source {
        bool from_build;
        int col;
    };
    std::vector<Source> sources;
    for (int v : out_schema.members()) {
        if (probe.schema().contains(v)) {
            sources.push_back({false, probe.schema().rank_of(v)});
        } else {
            sources.push_back({true, build.schema().rank_of(v)});
        }
    }

    std::vector<Value> flat;
    std::vector<Value> probe_key(probe_key_cols.size());
    for (std::size_t i = 0; i < probe.size(); ++i) {
        auto prow = probe.row(i);
        for (std::size_t k = 0; k < probe_key_cols.size(); ++k) probe_key[k] = prow[probe_key_cols[k]];
        for (std::uint32_t id : index.lookup(probe_key)) {
            auto brow = build.row(id);
            for (const Source& src : sources) flat.push_back(src.from_build ? brow[src.col] : prow[src.col]);
        }
    }
    if (flat.empty()) return Relation(out_schema);
    return Relation::from_rows(out_schema, std::move(flat));
}

Relation intersect(const Relation& r, const Relation& s) {
    if (r.schema() != s.schema()) throw SchemaError("intersection of relations over different schemas");
    if (r.arity() == 0) return (!r.empty() && !s.empty()) ? Relation::unit() : Relation();
    std::vector<Value> flat;
    std::size_t i = 0, j = 0;
    const int a = r.arity();
    while (i < r.size() && j < s.size()) {
        auto x = r.row(i);
        auto y = s.row(j);
        if (row_less(x.data(), y.data(), a)) {
            ++i;
        } else if (row_less(y.data(), x.data(), a)) {
            ++j;
        } else {
            flat.insert(flat.end(), x.begin(), x.end());
            ++i;
            ++j;
        }
    }
    if (flat.empty()) return Relation(r.schema());
    return Relation::from_rows(r.schema(), std::move(flat));
}

Relation unite(const Relation& r, const Relation& s) {
    if (r.schema() != s.schema()) throw SchemaError("union of relations over different schemas");
    if (r.arity() == 0) return (!r.empty() || !s.empty()) ? Relation::unit() : Relation();
    std::vector<Value> flat = r.data();
    flat.insert(flat.end(), s.data().begin(), s.data().end());
    if (flat.empty()) return Relation(r.schema());
    return Relation::from_rows(r.schema(), std::move(flat));
}

std::size_t degree_at(const Relation& r, VarSet y, VarSet x, std::span<const Value> x_values) {
    const auto xcols = columns_of(r.schema(), x);
    const auto ycols = columns_of(r.schema(), y - x);
    if (x_values.size() != xcols.size()) throw SchemaError("degree_at: tuple arity does not match X");
    std::vector<Value> ys;
    std::size_t matches = 0;
    for (std::size_t i = 0; i < r.size(); ++i) {
        auto row = r.row(i);
        bool ok = true;
        for (std::size_t k = 0; k < xcols.size() && ok; ++k) ok = row[xcols[k]] == x_values[k];
        if (!ok) continue;
        ++matches;
        append_columns(ys, row, ycols);
    }
    if (matches == 0) return 0;
    if (ycols.empty()) return 1;
    return sort_unique_rows(static_cast<int>(ycols.size()), ys);
}

std::size_t degree(const Relation& r, VarSet y, VarSet x) {
    if (!x.subset_of(r.schema()) || !y.subset_of(r.schema())) {
        throw SchemaError("degree: variables are not contained in the relation schema");
    }
    if (r.empty()) return 0;
    const VarSet rest = y - x;
    if (rest.empty()) return 1;
    if (x.empty()) return project(r, rest).size();

    // Rows of π_{X ∪ (Y\X)} laid out as X-columns then (Y\X)-columns, sorted;
    // the degree is the longest run sharing an X prefix.
    const auto xcols = columns_of(r.schema(), x);
    const auto ycols = columns_of(r.schema(), rest);
    const int kx = static_cast<int>(xcols.size());
    const int width = kx + static_cast<int>(ycols.size());
    std::vector<Value> flat;
    flat.reserve(r.size() * width);
    for (std::size_t i = 0; i < r.size(); ++i) {
        append_columns(flat, r.row(i), xcols);
        append_columns(flat, r.row(i), ycols);
    }
    const std::size_t n = sort_unique_rows(width, flat);
    std::size_t best = 0, run = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const Value* cur = flat.data() + i * width;
        if (i > 0 && std::equal(cur, cur + kx, cur - width)) {
            ++run;
        } else {
            run = 1;
        }
        best = std::max(best, run);
    }
    return best;
}

}  // namespace jaguar
