#include "jaguar/lp.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "jaguar/error.hpp"

namespace jaguar {

std::string LinearProgram::dump() const {
    std::ostringstream out;
    auto name = [&](int v) { return v < static_cast<int>(var_names.size()) ? var_names[v] : "x" + std::to_string(v); };
    out << "maximize";
    for (int v = 0; v < num_vars; ++v) {
        if (objective[v] != 0.0) out << ' ' << std::showpos << objective[v] << std::noshowpos << ' ' << name(v);
    }
    out << '\n';
    for (const auto& r : rows) {
        for (auto [v, a] : r.coeffs) out << std::showpos << a << std::noshowpos << ' ' << name(v) << ' ';
        out << (r.sense == LinearConstraint::Sense::Le ? "<=" : r.sense == LinearConstraint::Sense::Ge ? ">=" : "=")
            << ' ' << r.rhs;
        if (!r.label.empty()) out << "  # " << r.label;
        out << '\n';
    }
    return out.str();
}

namespace {

// Tableau rows 0..m-1 hold constraints (last column = rhs); the basis
// lists the basic column of each row.
class Tableau {
public:
    Tableau(std::size_t m, std::size_t cols) : m_(m), cols_(cols), a_(m * (cols + 1), 0.0), basis_(m, 0) {}

    double& at(std::size_t r, std::size_t c) { return a_[r * (cols_ + 1) + c]; }
    double& rhs(std::size_t r) { return at(r, cols_); }
    std::vector<std::size_t>& basis() { return basis_; }
    std::size_t rows() const { return m_; }
    std::size_t cols() const { return cols_; }

    void pivot(std::size_t r, std::size_t c) {
        const double p = at(r, c);
        for (std::size_t j = 0; j <= cols_; ++j) at(r, j) /= p;
        for (std::size_t i = 0; i < m_; ++i) {
            if (i == r) continue;
            const double f = at(i, c);
            if (f == 0.0) continue;
            for (std::size_t j = 0; j <= cols_; ++j) at(i, j) -= f * at(r, j);
            at(i, c) = 0.0;
        }
        basis_[r] = c;
    }

    // Reduced costs of maximizing `cost` (over allowed columns).
    std::vector<double> reduced(const std::vector<double>& cost) {
        std::vector<double> d(cost);
        for (std::size_t i = 0; i < m_; ++i) {
            const double cb = cost[basis_[i]];
            if (cb == 0.0) continue;
            for (std::size_t j = 0; j < cols_; ++j) d[j] -= cb * at(i, j);
        }
        return d;
    }

    // Runs Bland's rule. Returns the entering column of an unbounded
    // direction, or cols() when optimal.
    std::size_t optimize(const std::vector<double>& cost, const std::vector<bool>& allowed) {
        for (std::size_t iter = 0;; ++iter) {
            if (iter > 100000) throw Error("simplex: iteration limit reached");
            const std::vector<double> d = reduced(cost);
            std::size_t enter = cols_;
            for (std::size_t j = 0; j < cols_; ++j) {
                if (allowed[j] && d[j] > kLpTol) {
                    enter = j;
                    break;
                }
            }
            if (enter == cols_) return cols_;
            std::size_t leave = m_;
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < m_; ++i) {
                const double a = at(i, enter);
                if (a <= kLpTol) continue;
                const double ratio = rhs(i) / a;
                if (ratio < best - kLpTol || (ratio <= best + kLpTol && leave < m_ && basis_[i] < basis_[leave])) {
                    if (ratio < best - kLpTol) best = ratio;
                    leave = i;
                }
            }
            if (leave == m_) return enter;
            pivot(leave, enter);
        }
    }

private:
    std::size_t m_;
    std::size_t cols_;
    std::vector<double> a_;
    std::vector<std::size_t> basis_;
};

}  // namespace

LpResult lp_solve(const LinearProgram& lp) {
    using Sense = LinearConstraint::Sense;
    const std::size_t n = lp.num_vars;
    const std::size_t m = lp.rows.size();
    if (lp.objective.size() != n) throw Error("lp_solve: objective size mismatch");

    // Normalize to rhs >= 0, then count slack and artificial columns.
    std::vector<LinearConstraint> rows = lp.rows;
    for (auto& r : rows) {
        if (r.rhs < 0) {
            r.rhs = -r.rhs;
            for (auto& [v, a] : r.coeffs) a = -a;
            if (r.sense == Sense::Le) {
                r.sense = Sense::Ge;
            } else if (r.sense == Sense::Ge) {
                r.sense = Sense::Le;
            }
        }
    }
    std::size_t slacks = 0;
    std::size_t artificials = 0;
    for (const auto& r : rows) {
        if (r.sense != Sense::Eq) ++slacks;
        if (r.sense != Sense::Le) ++artificials;
    }
    const std::size_t cols = n + slacks + artificials;
    Tableau t(m, cols);
    std::size_t s = n;
    std::size_t art = n + slacks;
    std::vector<bool> is_art(cols, false);
    for (std::size_t i = 0; i < m; ++i) {
        const auto& r = rows[i];
        for (auto [v, a] : r.coeffs) {
            if (v < 0 || static_cast<std::size_t>(v) >= n) throw Error("lp_solve: variable index out of range");
            t.at(i, v) += a;
        }
        t.rhs(i) = r.rhs;
        if (r.sense == Sense::Le) {
            t.at(i, s) = 1.0;
            t.basis()[i] = s++;
        } else {
            if (r.sense == Sense::Ge) t.at(i, s++) = -1.0;
            t.at(i, art) = 1.0;
            is_art[art] = true;
            t.basis()[i] = art++;
        }
    }

    std::vector<bool> allowed(cols, true);
    if (artificials > 0) {
        std::vector<double> phase1(cols, 0.0);
        for (std::size_t j = 0; j < cols; ++j) {
            if (is_art[j]) phase1[j] = -1.0;
        }
        t.optimize(phase1, allowed);
        double infeas = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            if (is_art[t.basis()[i]]) infeas += t.rhs(i);
        }
        if (infeas > 1e-7) throw Error("lp_solve: program is infeasible\n" + lp.dump());
        // Drive remaining (zero-valued) artificials out of the basis.
        for (std::size_t i = 0; i < m; ++i) {
            if (!is_art[t.basis()[i]]) continue;
            for (std::size_t j = 0; j < cols; ++j) {
                if (!is_art[j] && std::abs(t.at(i, j)) > kLpTol) {
                    t.pivot(i, j);
                    break;
                }
            }
        }
        for (std::size_t j = 0; j < cols; ++j) {
            if (is_art[j]) allowed[j] = false;
        }
    }

    std::vector<double> cost(cols, 0.0);
    for (std::size_t j = 0; j < n; ++j) cost[j] = lp.objective[j];
    const std::size_t enter = t.optimize(cost, allowed);

    LpResult out;
    out.x.assign(n, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        if (t.basis()[i] < n) out.x[t.basis()[i]] = t.rhs(i);
    }
    if (enter != cols) {
        out.status = LpResult::Status::Unbounded;
        out.value = std::numeric_limits<double>::infinity();
        out.ray.assign(n, 0.0);
        if (enter < n) out.ray[enter] = 1.0;
        for (std::size_t i = 0; i < m; ++i) {
            if (t.basis()[i] < n) out.ray[t.basis()[i]] = -t.at(i, enter);
        }
        return out;
    }
    out.value = 0.0;
    for (std::size_t j = 0; j < n; ++j) out.value += lp.objective[j] * out.x[j];
    return out;
}

}  // namespace jaguar
