#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "jaguar/varset.hpp"

namespace jaguar {

struct Atom {
    std::string relation;
    VarSet schema;

    bool operator==(const Atom&) const = default;
};

// Q(F) :- R1(X1), ..., Rm(Xm). Variables are numbered by first
// appearance in the query text (head first).
struct ConjunctiveQuery {
    std::string name = "Q";
    Universe vars;
    // Free variables in head order; `free` is the same set.
    std::vector<int> head;
    VarSet free;
    // Canonical order: relation name, then schema encoding. Exact
    // duplicates are merged.
    std::vector<Atom> atoms;

    VarSet all() const { return vars.all(); }
    int num_vars() const { return vars.size(); }
    bool is_boolean() const { return free.empty(); }
    bool is_full() const { return free == all(); }
    // Schema of the first atom over `relation`, if any.
    const Atom* find_atom(std::string_view relation) const;
};

// Grammar:
//   query   := head ":-" body "."
//   head    := NAME "(" varlist? ")"
//   body    := atom ("," atom)*
//   atom    := NAME "(" varlist ")"
//   varlist := VAR ("," VAR)*
// Throws ParseError (byte offset) on syntax errors, constants in atoms,
// repeated variables within an atom or the head, and head variables that
// occur in no atom.
ConjunctiveQuery parse_query(std::string_view text);

// Canonical text: head in head order, atoms in canonical order with
// variables in universe order.
std::string render_query(const ConjunctiveQuery& q);

// Same head variable names and the same set of atoms by variable names.
bool equivalent(const ConjunctiveQuery& a, const ConjunctiveQuery& b);

}  // namespace jaguar
