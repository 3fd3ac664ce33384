#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "jaguar/database.hpp"
#include "jaguar/statistics.hpp"
#include "jaguar/varset.hpp"

namespace jaguar {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
// Absolute tolerance for every comparison between set-function values.
inline constexpr double kTol = 1e-9;

inline bool is_inf(double v) { return v == kInf; }

// A total map 2^V → R+ ∪ {∞}, stored densely by VarSet encoding.
class SetFunction {
public:
    SetFunction() = default;
    SetFunction(int num_vars, double fill) : num_vars_(num_vars), values_(std::size_t{1} << num_vars, fill) {}

    int num_vars() const { return num_vars_; }
    std::size_t table_size() const { return values_.size(); }
    VarSet all() const { return VarSet::full(num_vars_); }

    double operator()(VarSet s) const { return values_[s.bits()]; }
    double& operator[](VarSet s) { return values_[s.bits()]; }
    const std::vector<double>& values() const { return values_; }

    // g[s → v]
    SetFunction with(VarSet s, double v) const {
        SetFunction out = *this;
        out[s] = v;
        return out;
    }

    bool operator==(const SetFunction&) const = default;

private:
    int num_vars_ = 0;
    std::vector<double> values_;
};

// g(X) = log_N |R(X)| for every R(X) ∈ D, ∞ elsewhere. Requires N >= 2.
SetFunction init_g(const DatabaseInstance& d, int num_vars, std::size_t n);

// f(X, Y) = g(X) + g(Y) − g(X ∩ Y); ∞ if g(X) or g(Y) is ∞.
double f_value(const SetFunction& g, VarSet x, VarSet y);

struct Violation {
    VarSet x;
    VarSet y;
};

struct TruncationResult {
    double c = kInf;
    std::optional<Violation> witness;
    SetFunction h;
    std::vector<VarSet> covered;  // I = {X : g(X) <= c}
};

// c = min f(X, Y) over pairs with g(X ∪ Y) > f(X, Y) (+ tolerance), and
// the first minimising pair ordered by (f, X ∪ Y, X, Y). `h` and
// `covered` are left empty.
TruncationResult min_violation(const SetFunction& g);

// min_violation plus h = min(g, c) and I = {X : g(X) <= c}. Throws
// InvariantError if g is not monotone or g(∅) != 0.
TruncationResult truncate(const SetFunction& g);

// |{X : g(X) <= c}|, with c = ∞ counting every set.
std::size_t covered_count(const SetFunction& g, double c);

struct ShannonViolation {
    enum class Kind { Normalization, Monotonicity, Submodularity };
    Kind kind;
    // Monotonicity: a ⊂ b with h(a) > h(b). Submodularity: the pair (a, b)
    // with the smallest f, ordered as in min_violation.
    VarSet a;
    VarSet b;
};

// Exhaustive Shannon check: normalisation, then monotonicity on all
// X ⊆ Y, then submodularity on all pairs.
std::optional<ShannonViolation> find_shannon_violation(const SetFunction& h);
// Empty on success, otherwise a readable description of the violation.
std::string check_polymatroid(const SetFunction& h, const Universe* names = nullptr);
bool is_polymatroid(const SetFunction& h);

// Monotone with g(∅) = 0 (∞ allowed).
bool is_monotone(const SetFunction& g);

// h(Y ∪ X) − h(X) <= n per term. Fails when h(Y ∪ X) = ∞ and h(X) is
// finite; holds when h(X) = ∞ (including the ∞/∞ case).
bool satisfies_term(const SetFunction& h, const StatTerm& t);
bool satisfies_stats(const SetFunction& h, const StatisticsSpec& stats);

// Sets listed as "X,Y:value" style text, for diagnostics.
std::string describe(const SetFunction& g, const Universe& u);

}  // namespace jaguar
