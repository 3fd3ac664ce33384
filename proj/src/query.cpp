#include "jaguar/query.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <utility>

#include "jaguar/error.hpp"

namespace jaguar {

namespace {

bool is_name_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_name_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

class QueryParser {
public:
    explicit QueryParser(std::string_view text) : text_(text) {}

    ConjunctiveQuery parse() {
        ConjunctiveQuery q;
        q.name = name("query name");
        expect('(');
        std::vector<std::pair<std::string, std::size_t>> head_vars;
        skip_ws();
        if (peek() != ')') head_vars = varlist();
        expect(')');
        expect_turnstile();

        for (const auto& [var, pos] : head_vars) {
            if (q.vars.find(var)) throw ParseError("variable '" + var + "' repeated in the head", pos);
            q.head.push_back(q.vars.intern(var));
        }

        std::vector<Atom> atoms;
        VarSet body_vars;
        do {
            skip_ws();
            const std::size_t atom_pos = pos_;
            Atom atom;
            atom.relation = name("relation name");
            expect('(');
            skip_ws();
            if (peek() == ')') throw ParseError("atom '" + atom.relation + "' has no variables", atom_pos);
            for (const auto& [var, pos] : varlist()) {
                const int id = q.vars.intern(var);
                if (atom.schema.contains(id)) {
                    throw ParseError("variable '" + var + "' repeated in atom '" + atom.relation + "'", pos);
                }
                atom.schema |= VarSet::single(id);
            }
            expect(')');
            body_vars |= atom.schema;
            atoms.push_back(std::move(atom));
            skip_ws();
        } while (accept(','));
        expect('.');
        skip_ws();
        if (pos_ != text_.size()) throw ParseError("unexpected text after the final '.'", pos_);

        for (const auto& [var, pos] : head_vars) {
            if (!body_vars.contains(*q.vars.find(var))) {
                throw ParseError("free variable '" + var + "' does not occur in any atom", pos);
            }
        }
        for (int v : q.head) q.free |= VarSet::single(v);

        std::sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) {
            return std::tie(a.relation, a.schema) < std::tie(b.relation, b.schema);
        });
        atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
        q.atoms = std::move(atoms);
        return q;
    }

private:
    char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (peek() != c) return false;
        ++pos_;
        return true;
    }

    void expect(char c) {
        if (!accept(c)) {
            std::string msg = "expected '";
            msg += c;
            msg += "'";
            throw ParseError(msg + found(), pos_);
        }
    }

    void expect_turnstile() {
        skip_ws();
        if (text_.substr(pos_, 2) != ":-") throw ParseError("expected ':-'" + found(), pos_);
        pos_ += 2;
    }

    std::string found() const {
        if (pos_ >= text_.size()) return " but reached end of input";
        return std::string(" but found '") + text_[pos_] + "'";
    }

    std::string name(const char* what) {
        skip_ws();
        const std::size_t start = pos_;
        const char c = peek();
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '"' || c == '\'') {
            throw ParseError("constants are not supported in queries", start);
        }
        if (!is_name_start(c)) throw ParseError(std::string("expected ") + what + found(), start);
        while (pos_ < text_.size() && is_name_char(text_[pos_])) ++pos_;
        return std::string(text_.substr(start, pos_ - start));
    }

    std::vector<std::pair<std::string, std::size_t>> varlist() {
        std::vector<std::pair<std::string, std::size_t>> out;
        do {
            skip_ws();
            const std::size_t at = pos_;
            out.emplace_back(name("variable"), at);
        } while (accept(','));
        return out;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

std::string join_names(const Universe& u, const std::vector<int>& vars) {
    std::string out;
    for (std::size_t i = 0; i < vars.size(); ++i) {
        if (i > 0) out += ',';
        out += u.name(vars[i]);
    }
    return out;
}

}  // namespace

const Atom* ConjunctiveQuery::find_atom(std::string_view relation) const {
    for (const auto& a : atoms) {
        if (a.relation == relation) return &a;
    }
    return nullptr;
}

ConjunctiveQuery parse_query(std::string_view text) { return QueryParser(text).parse(); }

std::string render_query(const ConjunctiveQuery& q) {
    std::string out = q.name + "(" + join_names(q.vars, q.head) + ") :- ";
    for (std::size_t i = 0; i < q.atoms.size(); ++i) {
        if (i > 0) out += ", ";
        out += q.atoms[i].relation + "(" + join_names(q.vars, q.atoms[i].schema.members()) + ")";
    }
    out += ".";
    return out;
}

bool equivalent(const ConjunctiveQuery& a, const ConjunctiveQuery& b) {
    auto head_names = [](const ConjunctiveQuery& q) {
        std::vector<std::string> out;
        for (int v : q.head) out.push_back(q.vars.name(v));
        return out;
    };
    auto atom_set = [](const ConjunctiveQuery& q) {
        std::set<std::pair<std::string, std::set<std::string>>> out;
        for (const auto& atom : q.atoms) {
            auto names = q.vars.names_of(atom.schema);
            out.emplace(atom.relation, std::set<std::string>(names.begin(), names.end()));
        }
        return out;
    };
    return a.name == b.name && head_names(a) == head_names(b) && atom_set(a) == atom_set(b);
}

}  // namespace jaguar
