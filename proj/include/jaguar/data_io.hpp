#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "jaguar/database.hpp"
#include "jaguar/query.hpp"

namespace jaguar {

// A TSV file as text: header (variable names) and rows.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

// Reads one `<Rel>.tsv` file. Throws ParseError (1-based line) on a
// missing or malformed header and on ragged rows.
Table read_tsv(const std::filesystem::path& path);

// All `*.tsv` files of a directory keyed by relation name (file stem).
std::map<std::string, Table> read_data_dir(const std::filesystem::path& dir);

// Converts a table to a relation over the query's variables. Header
// names must be query variables forming exactly `schema`.
Relation table_to_relation(const Table& t, const std::string& relation, VarSet schema, const Universe& vars,
                           Dictionary& dict);

// Builds the instance matching the schema of `q` from the tables: one
// relation per atom; atoms over the same schema are intersected. Throws
// InputError naming the first missing relation.
DatabaseInstance instance_for(const ConjunctiveQuery& q, const std::map<std::string, Table>& tables,
                              Dictionary& dict);

// read_data_dir followed by instance_for.
DatabaseInstance load_instance(const std::filesystem::path& dir, const ConjunctiveQuery& q, Dictionary& dict);

// Writes `r` as TSV with columns in `columns` order (a permutation of the
// schema), rows sorted by Dictionary::display_less.
void write_tsv(std::ostream& out, const Relation& r, const std::vector<int>& columns, const Universe& vars,
               const Dictionary& dict);
void write_tsv_file(const std::filesystem::path& path, const Relation& r, const std::vector<int>& columns,
                    const Universe& vars, const Dictionary& dict);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace jaguar
