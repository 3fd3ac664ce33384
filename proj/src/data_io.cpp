#include "jaguar/data_io.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>

#include "jaguar/error.hpp"

namespace jaguar {

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t tab = line.find('\t', start);
        out.push_back(line.substr(start, tab == std::string::npos ? std::string::npos : tab - start));
        if (tab == std::string::npos) break;
        start = tab + 1;
    }
    return out;
}

}  // namespace

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Table read_tsv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path.string() + "'");
    Table t;
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!have_header) {
            if (line.empty()) throw ParseError(path.string() + ": missing header row", line_no);
            t.header = split_tabs(line);
            for (const auto& h : t.header) {
                if (h.empty()) throw ParseError(path.string() + ": empty column name in header", line_no);
            }
            have_header = true;
            continue;
        }
        if (line.empty()) continue;
        auto fields = split_tabs(line);
        if (fields.size() != t.header.size()) {
            throw ParseError(path.string() + ": row has " + std::to_string(fields.size()) + " fields, header has " +
                                 std::to_string(t.header.size()),
                             line_no);
        }
        t.rows.push_back(std::move(fields));
    }
    if (!have_header) throw ParseError(path.string() + ": missing header row", 1);
    return t;
}

std::map<std::string, Table> read_data_dir(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir)) throw InputError("'" + dir.string() + "' is not a directory");
    std::map<std::string, Table> out;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (!entry.is_regular_file() || entry.path().extension() != ".tsv") continue;
        out.emplace(entry.path().stem().string(), read_tsv(entry.path()));
    }
    return out;
}

Relation table_to_relation(const Table& t, const std::string& relation, VarSet schema, const Universe& vars,
                           Dictionary& dict) {
    VarSet header_set;
    std::vector<int> col_of_field;
    for (const auto& name : t.header) {
        auto id = vars.find(name);
        if (!id) throw InputError("relation '" + relation + "': unknown variable '" + name + "' in header");
        if (header_set.contains(*id)) throw InputError("relation '" + relation + "': repeated column '" + name + "'");
        header_set |= VarSet::single(*id);
        col_of_field.push_back(*id);
    }
    if (header_set != schema) {
        throw InputError("relation '" + relation + "': header (" + vars.render(header_set) +
                         ") does not match the query atom (" + vars.render(schema) + ")");
    }
    for (int& v : col_of_field) v = schema.rank_of(v);

    const int arity = schema.size();
    std::vector<Value> flat(t.rows.size() * arity);
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        for (std::size_t f = 0; f < t.rows[i].size(); ++f) {
            flat[i * arity + col_of_field[f]] = dict.intern(t.rows[i][f]);
        }
    }
    return Relation::from_rows(schema, std::move(flat));
}

DatabaseInstance instance_for(const ConjunctiveQuery& q, const std::map<std::string, Table>& tables,
                              Dictionary& dict) {
    DatabaseInstance d;
    for (const auto& atom : q.atoms) {
        auto it = tables.find(atom.relation);
        if (it == tables.end()) throw InputError("relation '" + atom.relation + "' has no data file");
        d = d.augment(table_to_relation(it->second, atom.relation, atom.schema, q.vars, dict));
    }
    return d;
}

DatabaseInstance load_instance(const std::filesystem::path& dir, const ConjunctiveQuery& q, Dictionary& dict) {
    return instance_for(q, read_data_dir(dir), dict);
}

void write_tsv(std::ostream& out, const Relation& r, const std::vector<int>& columns, const Universe& vars,
               const Dictionary& dict) {
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i > 0) out << '\t';
        out << vars.name(columns[i]);
    }
    out << '\n';
    std::vector<int> cols;
    for (int v : columns) cols.push_back(r.schema().rank_of(v));

    std::vector<std::size_t> order(r.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        auto ra = r.row(a);
        auto rb = r.row(b);
        for (int c : cols) {
            if (ra[c] != rb[c]) return dict.display_less(ra[c], rb[c]);
        }
        return false;
    });
    for (std::size_t i : order) {
        auto row = r.row(i);
        for (std::size_t k = 0; k < cols.size(); ++k) {
            if (k > 0) out << '\t';
            out << dict.text(row[cols[k]]);
        }
        out << '\n';
    }
}

void write_tsv_file(const std::filesystem::path& path, const Relation& r, const std::vector<int>& columns,
                    const Universe& vars, const Dictionary& dict) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write '" + path.string() + "'");
    write_tsv(out, r, columns, vars, dict);
}

}  // namespace jaguar
