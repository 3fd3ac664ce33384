#pragma once

#include <cstddef>
#include <map>
#include <vector>

#include "jaguar/relation.hpp"

namespace jaguar {

// A signature-unique database instance: at most one relation per schema.
// Relations are shared immutable values, so copying an instance is cheap
// and recursive branches can extend a common parent independently.
class DatabaseInstance {
public:
    struct Entry {
        RelationPtr relation;
        // Materialized by the engine rather than loaded as base data.
        bool derived = false;
    };

    // D ⊎ {R}: adds R if no relation over R's schema exists, otherwise
    // replaces the existing one with its intersection with R.
    DatabaseInstance augment(Relation r, bool derived = false) const;
    DatabaseInstance augment(RelationPtr r, bool derived = false) const;

    bool has(VarSet schema) const { return entries_.count(schema) != 0; }
    const Relation* find(VarSet schema) const;
    // Throws InvariantError if absent.
    const Relation& at(VarSet schema) const;
    const RelationPtr& ptr(VarSet schema) const;
    bool is_derived(VarSet schema) const;

    // Total number of tuples across all relations.
    std::size_t size() const;
    std::size_t num_relations() const { return entries_.size(); }
    bool any_empty() const;

    std::vector<VarSet> schemas() const;
    const std::map<VarSet, Entry>& entries() const { return entries_; }

    bool operator==(const DatabaseInstance& other) const;

private:
    std::map<VarSet, Entry> entries_;
};

}  // namespace jaguar
