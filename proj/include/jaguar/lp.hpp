#pragma once

#include <string>
#include <utility>
#include <vector>

namespace jaguar {

struct LinearConstraint {
    enum class Sense { Le, Ge, Eq };
    std::vector<std::pair<int, double>> coeffs;
    Sense sense = Sense::Le;
    double rhs = 0.0;
    std::string label;
};

// maximize objective · x subject to `rows` and x >= 0.
struct LinearProgram {
    int num_vars = 0;
    std::vector<double> objective;
    std::vector<LinearConstraint> rows;
    std::vector<std::string> var_names;

    std::string dump() const;
};

struct LpResult {
    enum class Status { Optimal, Unbounded };
    Status status = Status::Optimal;
    double value = 0.0;  // +inf when unbounded
    std::vector<double> x;
    // When unbounded: x + λ·ray is feasible for all λ >= 0 and the
    // objective grows along it.
    std::vector<double> ray;
};

inline constexpr double kLpTol = 1e-9;

// Two-phase dense tableau simplex with Bland's rule. Throws Error on an
// infeasible program (with the program dump).
LpResult lp_solve(const LinearProgram& lp);

}  // namespace jaguar
