#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "jaguar/data_io.hpp"
#include "jaguar/database.hpp"
#include "jaguar/query.hpp"

namespace jaguar {

inline constexpr std::size_t kDefaultOracleBudget = 500'000'000;

// Reference semantics: a left-deep nested loop over the atoms in
// canonical order, binding variables tuple by tuple and rejecting
// inconsistent bindings, then π_F with deduplication. Independent of
// the engine's join code. Throws LimitError after `budget` tuple visits.
Relation brute_force(const ConjunctiveQuery& q, const DatabaseInstance& d,
                     std::size_t budget = kDefaultOracleBudget);

// Second reference: enumerate every assignment of V over the per-variable
// active domains and keep those satisfying all atoms. Small inputs only.
Relation brute_force_by_assignment(const ConjunctiveQuery& q, const DatabaseInstance& d,
                                   std::size_t budget = kDefaultOracleBudget);

// Q(X,Y,Z,W) :- R(X,Y), S(Y,Z), T(Z,W), U(W,X), or its Boolean form.
ConjunctiveQuery four_cycle_query(bool boolean = false);

// R = S = T = U = ([m/2] × {1}) ∪ ({1} × [m/2]) over the four-cycle
// schemas, each with m − 1 tuples. Throws InputError for odd m or m < 2.
std::map<std::string, Table> square_tables(std::size_t m);
DatabaseInstance gen_square(std::size_t m, Dictionary& dict);

struct RandomRelationSpec {
    std::string name;
    std::vector<std::string> vars;
    std::size_t size = 0;
};

// Uniform sampling without replacement of `size` tuples per relation over
// the domain {1..domain_size}, from a std::mt19937_64 seeded with `seed`.
// Throws InputError when a size exceeds domain_size^arity.
std::map<std::string, Table> gen_random_tables(std::uint64_t seed, const std::vector<RandomRelationSpec>& specs,
                                               std::size_t domain_size);

// One relation per atom of `q` with the given sizes (in atom order).
DatabaseInstance gen_random(std::uint64_t seed, const ConjunctiveQuery& q, const std::vector<std::size_t>& sizes,
                            std::size_t domain_size, Dictionary& dict);

// Parses {"domain": n, "relations": [{"name": .., "vars": [..], "size": n}]}.
std::vector<RandomRelationSpec> parse_random_spec(const std::string& json_text, std::size_t& domain_size);

// Writes each table as `<name>.tsv` into `dir` (created if needed).
void write_tables(const std::filesystem::path& dir, const std::map<std::string, Table>& tables);

}  // namespace jaguar
