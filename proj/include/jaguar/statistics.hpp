#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "jaguar/database.hpp"
#include "jaguar/query.hpp"

namespace jaguar {

// One degree constraint log_N deg_G(Y|X) <= exponent, guarded by the
// query relation `guard` whose schema contains X ∪ Y.
struct StatTerm {
    VarSet y;
    VarSet x;
    double exponent = 0.0;
    std::string guard;
    VarSet guard_schema;
    // Absolute bound the exponent was derived from, when known.
    std::optional<double> bound;
};

struct StatisticsSpec {
    std::vector<StatTerm> terms;
};

// ln(value) / ln(n). Requires n >= 2.
double log_base(double value, double n);

// Parses lines of the form `deg(G; Y-vars|X-vars) <= B` (`#` starts a
// comment, the X side may be empty). Exponents are ln B / ln N. The guard
// must be a relation of `q`; the instance must satisfy every bound.
// Syntax errors are ParseErrors carrying the 1-based line number;
// missing guards, bad guard schemas, and violated bounds are InputErrors.
StatisticsSpec parse_stats(std::string_view text, const ConjunctiveQuery& q, const DatabaseInstance& d,
                           std::size_t n, const Dictionary* dict = nullptr);

// One cardinality term (X|∅) per atom R(X) with exponent log_N |R|.
StatisticsSpec default_stats(const ConjunctiveQuery& q, const DatabaseInstance& d, std::size_t n);

// Edge-domination constraints: (X|∅) with exponent 1 for every atom.
StatisticsSpec classic_stats(const ConjunctiveQuery& q);

// Empty string if D includes the schema of Q and satisfies every term;
// otherwise a description of the first problem found.
std::string check_instance(const ConjunctiveQuery& q, const DatabaseInstance& d, const StatisticsSpec& stats,
                           std::size_t n, const Dictionary* dict = nullptr);

// Throws InputError with the message from check_instance.
void validate_instance(const ConjunctiveQuery& q, const DatabaseInstance& d, const StatisticsSpec& stats,
                       std::size_t n, const Dictionary* dict = nullptr);

std::string render_term(const Universe& u, const StatTerm& t);

}  // namespace jaguar
