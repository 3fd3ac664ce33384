#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "jaguar/database.hpp"
#include "jaguar/decomposition.hpp"
#include "jaguar/query.hpp"
#include "jaguar/set_function.hpp"
#include "jaguar/statistics.hpp"

namespace jaguar {

struct EngineConfig {
    double epsilon = 0.5;
    int max_vars = configured_max_vars();
    // Zero selects 2^|V| · (⌈φ_max/ε⌉ + 1) + 8.
    std::size_t max_depth = 0;
    bool trace = true;
    // Keep the calibrated g of every node in the trace.
    bool dump_g = false;
};

enum class EdgeKind { Root, Light, Heavy };

struct TraceNode {
    enum class Status { Branch, Leaf, Empty };

    int id = 0;
    std::optional<int> parent;
    EdgeKind edge = EdgeKind::Root;
    std::optional<int> light_index;  // 1-based
    Status status = Status::Leaf;
    int depth = 0;

    // φ of the database this call received (before any calibration).
    double phi = 0.0;
    // After calibration; absent for Empty nodes.
    double c = kInf;
    std::size_t i_size = 0;
    std::optional<Violation> witness;
    VarSet w;
    double theta = 0.0;
    std::size_t y_size = 0;
    std::size_t heavy_size = 0;
    std::size_t light_size = 0;
    std::vector<std::size_t> part_sizes;

    // |R(X) ⋈ part| from the parent's line-14 join (light children only).
    std::size_t join_out = 0;
    // Tuples materialized for this node: its incoming join or heavy
    // projection plus every calibration repair.
    std::size_t work = 0;
    std::optional<int> terminal_td;
    std::size_t answers = 0;
    std::optional<SetFunction> g;
};

struct RecursionTrace {
    std::size_t n = 0;
    double epsilon = 0.0;
    int num_vars = 0;
    std::vector<TraceNode> nodes;  // pre-order; nodes[i].id == i
};

struct EvalResult {
    Relation answers;  // over F, sorted and deduplicated
    RecursionTrace trace;
    bool brute_force = false;  // N <= 1 or an empty base relation
    std::size_t join_work = 0;
};

// Splits R by the size of each W-group: heavy = groups larger than tau.
std::pair<Relation, Relation> heavy_light_partition(const Relation& r, VarSet w, double tau);

// Chunk size ⌊theta⌋ (snapped up within tolerance, at least 1), so a part
// never has a W-degree above theta.
std::size_t equal_degree_chunk(double theta);
// max(k, chunks needed by the largest W-group of rl).
std::size_t equal_degree_parts(const Relation& rl, VarSet w, double theta, std::size_t k);

// Cuts every W-group (in relation order) into chunks of
// equal_degree_chunk(theta) tuples; chunk j goes to part j. Throws
// InvariantError if a group needs more than k chunks.
std::vector<Relation> equal_degree_partition(const Relation& rl, VarSet w, double theta, std::size_t k);

// Yannakakis over a covered free-connex decomposition: every bag relation
// is semijoin-reduced with all of D, then fully reduced along the tree,
// and the free-core bags are joined and projected onto `free`.
Relation yannakakis(const TreeDecomposition& td, const DatabaseInstance& d, VarSet free);

// φ(D) = Σ_{R(X)∈D} log_N |R(X)| + (number of X ⊆ V without a relation) · (|V| + 1).
double potential(const DatabaseInstance& d, std::size_t n, int num_vars);

EvalResult evaluate(const ConjunctiveQuery& q, const StatisticsSpec& stats, const DatabaseInstance& d0,
                    const EngineConfig& config = {});

struct BaselineResult {
    Relation answers;
    std::size_t join_work = 0;
};

// Materializes every bag of `td` as the join of the projections of the
// atoms meeting it, then runs yannakakis. Used as the single-decomposition
// reference in benchmarks.
BaselineResult evaluate_with_td(const ConjunctiveQuery& q, const DatabaseInstance& d0, const TreeDecomposition& td);

const char* edge_name(EdgeKind e);
const char* status_name(TraceNode::Status s);

}  // namespace jaguar

namespace jaguar {

struct TraceShape {
    std::size_t nodes = 0;
    std::size_t leaves = 0;
    int depth = 0;
    // Most heavy edges on one root-to-leaf path.
    int heavy_edges_max = 0;
    // Longest run of consecutive light edges on one path.
    int light_run_max = 0;
};

TraceShape trace_shape(const RecursionTrace& trace);

}  // namespace jaguar
