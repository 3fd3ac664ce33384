#include "jaguar/database.hpp"

#include <algorithm>

#include "jaguar/error.hpp"

namespace jaguar {

DatabaseInstance DatabaseInstance::augment(Relation r, bool derived) const {
    return augment(std::make_shared<const Relation>(std::move(r)), derived);
}

DatabaseInstance DatabaseInstance::augment(RelationPtr r, bool derived) const {
    DatabaseInstance out = *this;
    const VarSet schema = r->schema();
    auto it = out.entries_.find(schema);
    if (it == out.entries_.end()) {
        out.entries_.emplace(schema, Entry{std::move(r), derived});
        return out;
    }
    Entry& existing = it->second;
    if (existing.relation != r && *existing.relation != *r) {
        auto merged = intersect(*existing.relation, *r);
        if (merged != *existing.relation) existing.relation = std::make_shared<const Relation>(std::move(merged));
    }
    existing.derived = existing.derived && derived;
    return out;
}

const Relation* DatabaseInstance::find(VarSet schema) const {
    auto it = entries_.find(schema);
    return it == entries_.end() ? nullptr : it->second.relation.get();
}

const Relation& DatabaseInstance::at(VarSet schema) const { return *ptr(schema); }

const RelationPtr& DatabaseInstance::ptr(VarSet schema) const {
    auto it = entries_.find(schema);
    if (it == entries_.end()) throw InvariantError("no relation over the requested schema in the instance");
    return it->second.relation;
}

bool DatabaseInstance::is_derived(VarSet schema) const {
    auto it = entries_.find(schema);
    return it != entries_.end() && it->second.derived;
}

std::size_t DatabaseInstance::size() const {
    std::size_t n = 0;
    for (const auto& [schema, e] : entries_) n += e.relation->size();
    return n;
}

bool DatabaseInstance::any_empty() const {
    return std::any_of(entries_.begin(), entries_.end(), [](const auto& kv) { return kv.second.relation->empty(); });
}

std::vector<VarSet> DatabaseInstance::schemas() const {
    std::vector<VarSet> out;
    out.reserve(entries_.size());
    for (const auto& [schema, e] : entries_) out.push_back(schema);
    return out;
}

bool DatabaseInstance::operator==(const DatabaseInstance& other) const {
    if (entries_.size() != other.entries_.size()) return false;
    for (const auto& [schema, e] : entries_) {
        const Relation* o = other.find(schema);
        if (o == nullptr || *o != *e.relation) return false;
    }
    return true;
}

}  // namespace jaguar
