#include "jaguar/statistics.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

#include "jaguar/error.hpp"

namespace jaguar {

namespace {

constexpr double kTolerance = 1e-9;

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

VarSet parse_varlist(std::string_view text, const ConjunctiveQuery& q, std::size_t line) {
    VarSet out;
    const std::string body = trim(text);
    if (body.empty()) return out;
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const std::string var = trim(item);
        if (var.empty()) throw ParseError("empty variable name in statistics", line);
        auto id = q.vars.find(var);
        if (!id) throw ParseError("unknown variable '" + var + "' in statistics", line);
        out |= VarSet::single(*id);
    }
    return out;
}

bool term_holds(const Relation& guard, const StatTerm& t, std::size_t n) {
    const std::size_t deg = degree(guard, t.y, t.x);
    if (deg == 0) return true;
    if (t.bound) return static_cast<double>(deg) <= *t.bound * (1 + kTolerance);
    return log_base(static_cast<double>(deg), static_cast<double>(n)) <= t.exponent + kTolerance;
}

// Describes a tuple x of `guard` whose degree breaks the term.
std::string violation_witness(const Relation& guard, const StatTerm& t, std::size_t n, const Universe& u,
                              const Dictionary* dict) {
    const Relation xs = project(guard, t.x);
    const double limit = t.bound ? *t.bound : std::pow(static_cast<double>(n), t.exponent);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const std::size_t deg = degree_at(guard, t.y, t.x, xs.row(i));
        if (static_cast<double>(deg) > limit * (1 + kTolerance)) {
            std::string where;
            auto members = t.x.members();
            for (std::size_t k = 0; k < members.size(); ++k) {
                if (k > 0) where += ", ";
                where += u.name(members[k]) + "=";
                const Value v = xs.row(i)[k];
                where += dict != nullptr ? dict->text(v) : "#" + std::to_string(static_cast<std::uint32_t>(v));
            }
            if (where.empty()) where = "the whole relation";
            return where + " has degree " + std::to_string(deg);
        }
    }
    return "degree " + std::to_string(degree(guard, t.y, t.x));
}

}  // namespace

double log_base(double value, double n) { return std::log(value) / std::log(n); }

std::string render_term(const Universe& u, const StatTerm& t) {
    std::string out = "deg(" + t.guard + "; ";
    auto names = [&](VarSet s) {
        std::string r;
        for (int v : s.members()) {
            if (!r.empty()) r += ',';
            r += u.name(v);
        }
        return r;
    };
    out += names(t.y) + "|" + names(t.x) + ")";
    return out;
}

StatisticsSpec parse_stats(std::string_view text, const ConjunctiveQuery& q, const DatabaseInstance& d,
                           std::size_t n, const Dictionary* dict) {
    if (n < 2) throw InputError("statistics need an instance with at least 2 tuples");
    StatisticsSpec spec;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view raw = text.substr(start, end - start);
        start = end + 1;
        ++line_no;
        if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
        const std::string line = trim(raw);
        if (line.empty()) {
            if (end == text.size()) break;
            continue;
        }

        if (line.rfind("deg(", 0) != 0) throw ParseError("statistics line must start with 'deg('", line_no);
        const std::size_t semi = line.find(';');
        const std::size_t bar = line.find('|');
        const std::size_t close = line.find(')');
        if (semi == std::string::npos || bar == std::string::npos || close == std::string::npos || !(semi < bar && bar < close)) {
            throw ParseError("expected 'deg(<relation>; <vars>|<vars>)'", line_no);
        }
        const std::string rest = trim(std::string_view(line).substr(close + 1));
        if (rest.rfind("<=", 0) != 0) throw ParseError("expected '<=' after the degree term", line_no);
        const std::string number = trim(std::string_view(rest).substr(2));
        double bound = 0;
        try {
            std::size_t used = 0;
            bound = std::stod(number, &used);
            if (used != number.size()) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            throw ParseError("invalid bound '" + number + "'", line_no);
        }
        if (!(bound >= 1.0) || !std::isfinite(bound)) {
            throw ParseError("degree bound must be a finite number >= 1", line_no);
        }

        StatTerm term;
        term.guard = trim(std::string_view(line).substr(4, semi - 4));
        term.y = parse_varlist(std::string_view(line).substr(semi + 1, bar - semi - 1), q, line_no);
        term.x = parse_varlist(std::string_view(line).substr(bar + 1, close - bar - 1), q, line_no);
        term.bound = bound;
        term.exponent = log_base(bound, static_cast<double>(n));
        if (term.y.empty()) throw ParseError("degree term needs at least one conditioned variable", line_no);

        const Atom* atom = q.find_atom(term.guard);
        if (atom == nullptr) throw InputError("guard relation '" + term.guard + "' is not in the query");
        term.guard_schema = atom->schema;
        if (!(term.x | term.y).subset_of(atom->schema)) {
            throw InputError("guard '" + term.guard + "' does not contain the variables of " + render_term(q.vars, term));
        }
        const Relation* guard = d.find(atom->schema);
        if (guard == nullptr) throw InputError("guard relation '" + term.guard + "' is missing from the instance");
        if (!term_holds(*guard, term, n)) {
            throw InputError("statistic " + render_term(q.vars, term) + " <= " + number + " is violated: " +
                             violation_witness(*guard, term, n, q.vars, dict));
        }
        spec.terms.push_back(std::move(term));
    }
    return spec;
}

StatisticsSpec default_stats(const ConjunctiveQuery& q, const DatabaseInstance& d, std::size_t n) {
    StatisticsSpec spec;
    for (const auto& atom : q.atoms) {
        const Relation& r = d.at(atom.schema);
        StatTerm t;
        t.y = atom.schema;
        t.guard = atom.relation;
        t.guard_schema = atom.schema;
        t.bound = static_cast<double>(r.size());
        t.exponent = r.size() <= 1 ? 0.0 : log_base(static_cast<double>(r.size()), static_cast<double>(n));
        spec.terms.push_back(std::move(t));
    }
    return spec;
}

StatisticsSpec classic_stats(const ConjunctiveQuery& q) {
    StatisticsSpec spec;
    for (const auto& atom : q.atoms) {
        StatTerm t;
        t.y = atom.schema;
        t.guard = atom.relation;
        t.guard_schema = atom.schema;
        t.exponent = 1.0;
        spec.terms.push_back(std::move(t));
    }
    return spec;
}

std::string check_instance(const ConjunctiveQuery& q, const DatabaseInstance& d, const StatisticsSpec& stats,
                           std::size_t n, const Dictionary* dict) {
    for (const auto& atom : q.atoms) {
        if (!d.has(atom.schema)) return "relation '" + atom.relation + "' is missing from the instance";
    }
    for (const auto& t : stats.terms) {
        const Relation* guard = d.find(t.guard_schema);
        if (guard == nullptr) return "guard of " + render_term(q.vars, t) + " is missing";
        if (!(t.x | t.y).subset_of(t.guard_schema)) return "guard of " + render_term(q.vars, t) + " is too small";
        if (t.exponent < 0) return "negative exponent for " + render_term(q.vars, t);
        if (n >= 2 && !term_holds(*guard, t, n)) {
            return "statistic " + render_term(q.vars, t) + " is violated: " +
                   violation_witness(*guard, t, n, q.vars, dict);
        }
    }
    return {};
}

void validate_instance(const ConjunctiveQuery& q, const DatabaseInstance& d, const StatisticsSpec& stats,
                       std::size_t n, const Dictionary* dict) {
    if (auto problem = check_instance(q, d, stats, n, dict); !problem.empty()) throw InputError(problem);
}

}  // namespace jaguar
