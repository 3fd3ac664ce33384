#include "jaguar/cli.hpp"

#include <chrono>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "jaguar/data_io.hpp"
#include "jaguar/engine.hpp"
#include "jaguar/error.hpp"
#include "jaguar/json_io.hpp"
#include "jaguar/oracle.hpp"
#include "jaguar/width.hpp"

namespace jaguar {

namespace {

class UsageError : public Error {
public:
    using Error::Error;
};

struct Options {
    std::string query;
    std::string data;
    std::string stats;
    bool classic = false;
    double epsilon = 0.5;
    std::string trace;
    std::string output;
    bool dump_tds = false;
    bool dump_g = false;
    std::uint64_t seed = 1;
    std::string spec;
    std::string out_dir;
    std::size_t m = 0;
    std::size_t m_min = 64;
    std::size_t m_max = 4096;
    bool baseline = false;
    bool csv = false;
};

ConjunctiveQuery load_query(const std::string& path) { return parse_query(read_text_file(path)); }

StatisticsSpec load_stats(const Options& o, const ConjunctiveQuery& q, const DatabaseInstance& d,
                          const Dictionary& dict) {
    if (!o.stats.empty() && o.classic) throw UsageError("--stats and --classic are mutually exclusive");
    const std::size_t n = d.size();
    StatisticsSpec stats;
    if (o.classic) {
        stats = classic_stats(q);
    } else if (n < 2) {
        return stats;  // degenerate instance; evaluation falls back to brute force
    } else if (!o.stats.empty()) {
        stats = parse_stats(read_text_file(o.stats), q, d, n, &dict);
    } else {
        stats = default_stats(q, d, n);
    }
    if (n >= 2) validate_instance(q, d, stats, n, &dict);
    return stats;
}

void write_json(const std::string& path, const Json& j, std::ostream& fallback) {
    if (path.empty()) {
        fallback << j.dump(2) << '\n';
        return;
    }
    std::ofstream f(path);
    if (!f) throw InputError("cannot write '" + path + "'");
    f << j.dump(2) << '\n';
}

void write_answers(const Options& o, const ConjunctiveQuery& q, const Relation& a, const Dictionary& dict,
                   std::ostream& out) {
    if (o.output.empty()) {
        write_tsv(out, a, q.head, q.vars, dict);
    } else {
        write_tsv_file(o.output, a, q.head, q.vars, dict);
    }
}

int cmd_eval(const Options& o, std::ostream& out) {
    const ConjunctiveQuery q = load_query(o.query);
    if (o.dump_tds) {
        out << family_json(enumerate_free_connex_tds(q), q.vars).dump(2) << '\n';
        return 0;
    }
    Dictionary dict;
    const DatabaseInstance d = load_instance(o.data, q, dict);
    const StatisticsSpec stats = load_stats(o, q, d, dict);
    EngineConfig cfg;
    cfg.epsilon = o.epsilon;
    cfg.dump_g = o.dump_g;
    const EvalResult r = evaluate(q, stats, d, cfg);
    write_answers(o, q, r.answers, dict, out);
    if (!o.trace.empty()) write_json(o.trace, trace_json(r.trace, q.vars), out);
    return 0;
}

int cmd_width(const Options& o, std::ostream& out) {
    const ConjunctiveQuery q = load_query(o.query);
    const auto family = enumerate_free_connex_tds(q);
    if (o.dump_tds) {
        out << family_json(family, q.vars).dump(2) << '\n';
        return 0;
    }
    StatisticsSpec stats;
    if (o.classic && o.stats.empty()) {
        stats = classic_stats(q);
    } else if (!o.data.empty()) {
        Dictionary dict;
        const DatabaseInstance d = load_instance(o.data, q, dict);
        stats = load_stats(o, q, d, dict);
    } else {
        throw UsageError("width needs --classic, or --data with optional --stats");
    }
    const WidthResult w = subw(family, q.num_vars(), stats);
    write_json(o.output, width_json(w, q.vars), out);
    return 0;
}

int cmd_gen_square(const Options& o) {
    write_tables(o.out_dir, square_tables(o.m));
    std::ofstream qf(std::filesystem::path(o.out_dir) / "query.cq");
    qf << render_query(four_cycle_query()) << '\n';
    return 0;
}

int cmd_gen_random(const Options& o) {
    std::size_t domain = 0;
    const auto specs = parse_random_spec(read_text_file(o.spec), domain);
    write_tables(o.out_dir, gen_random_tables(o.seed, specs, domain));
    return 0;
}

int cmd_oracle(const Options& o, std::ostream& out) {
    const ConjunctiveQuery q = load_query(o.query);
    Dictionary dict;
    const DatabaseInstance d = load_instance(o.data, q, dict);
    write_answers(o, q, brute_force(q, d), dict, out);
    return 0;
}

int cmd_bench(const Options& o, std::ostream& out) {
    if (o.m_min < 2 || o.m_min > o.m_max) throw UsageError("bench needs 2 <= --m-min <= --m-max");
    const char* header[] = {"m", "N", "epsilon", "join_work_tuples", "heavy_edges_max", "light_run_max", "wall_ms"};
    if (o.csv) {
        for (int i = 0; i < 7; ++i) out << (i ? "," : "") << header[i];
        out << '\n';
    } else {
        for (int i = 0; i < 7; ++i) out << std::setw(i ? 18 : 8) << header[i];
        out << '\n';
    }
    const ConjunctiveQuery q = four_cycle_query();
    const auto family = enumerate_free_connex_tds(q);
    for (std::size_t m = o.m_min + (o.m_min % 2); m <= o.m_max; m *= 2) {
        Dictionary dict;
        const DatabaseInstance d = gen_square(m, dict);
        const std::size_t n = d.size();
        std::size_t work = 0;
        TraceShape shape;
        const auto start = std::chrono::steady_clock::now();
        if (o.baseline) {
            work = evaluate_with_td(q, d, family.front()).join_work;
        } else {
            EngineConfig cfg;
            cfg.epsilon = o.epsilon;
            const StatisticsSpec stats = o.classic ? classic_stats(q) : default_stats(q, d, n);
            const EvalResult r = evaluate(q, stats, d, cfg);
            work = r.join_work;
            shape = trace_shape(r.trace);
        }
        const double ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        std::ostringstream wall;
        wall << std::fixed << std::setprecision(3) << ms;
        const std::string cells[] = {std::to_string(m),
                                     std::to_string(n),
                                     (std::ostringstream() << o.epsilon).str(),
                                     std::to_string(work),
                                     std::to_string(shape.heavy_edges_max),
                                     std::to_string(shape.light_run_max),
                                     wall.str()};
        for (int i = 0; i < 7; ++i) {
            if (o.csv) {
                out << (i ? "," : "") << cells[i];
            } else {
                out << std::setw(i ? 18 : 8) << cells[i];
            }
        }
        out << '\n';
    }
    return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Conjunctive query evaluation with heavy/light recursion and submodular width"};
    app.require_subcommand(1);

    auto* eval = app.add_subcommand("eval", "Evaluate a query over a data directory");
    eval->add_option("--query", o.query, "Query file")->required()->check(CLI::ExistingFile);
    eval->add_option("--data", o.data, "Directory of <Rel>.tsv files");
    eval->add_option("--stats", o.stats, "Degree constraints file")->check(CLI::ExistingFile);
    eval->add_flag("--classic", o.classic, "Use |R| <= N for every atom");
    eval->add_option("--epsilon", o.epsilon, "Heavy/light threshold exponent")->check(CLI::PositiveNumber);
    eval->add_option("--trace", o.trace, "Write the recursion trace as JSON");
    eval->add_option("--output", o.output, "Answer TSV (default: stdout)");
    eval->add_flag("--dump-tds", o.dump_tds, "Print the decomposition family as JSON and exit");
    eval->add_flag("--dump-g", o.dump_g, "Include g in every trace node");

    auto* width = app.add_subcommand("width", "Compute the submodular width");
    width->add_option("--query", o.query, "Query file")->required()->check(CLI::ExistingFile);
    width->add_option("--data", o.data, "Directory of <Rel>.tsv files");
    width->add_option("--stats", o.stats, "Degree constraints file")->check(CLI::ExistingFile);
    width->add_flag("--classic", o.classic, "Use |R| <= N for every atom");
    width->add_option("--output", o.output, "JSON output (default: stdout)");
    width->add_flag("--dump-tds", o.dump_tds, "Print the decomposition family as JSON and exit");

    auto* gen = app.add_subcommand("gen", "Generate instances");
    gen->require_subcommand(1);
    auto* square = gen->add_subcommand("square", "Four-cycle instance ([m/2] x {1}) u ({1} x [m/2])");
    square->add_option("--m", o.m, "Even size parameter")->required();
    square->add_option("--out", o.out_dir, "Output directory")->required();
    auto* random = gen->add_subcommand("random", "Seeded uniform random relations");
    random->add_option("--seed", o.seed, "RNG seed");
    random->add_option("--spec", o.spec, "JSON spec")->required()->check(CLI::ExistingFile);
    random->add_option("--out", o.out_dir, "Output directory")->required();

    auto* oracle = app.add_subcommand("oracle", "Brute-force evaluation");
    oracle->add_option("--query", o.query, "Query file")->required()->check(CLI::ExistingFile);
    oracle->add_option("--data", o.data, "Directory of <Rel>.tsv files")->required();
    oracle->add_option("--output", o.output, "Answer TSV (default: stdout)");

    auto* bench = app.add_subcommand("bench", "Join work on square instances for m = m-min, 2 m-min, ...");
    bench->add_option("--m-min", o.m_min, "Smallest m");
    bench->add_option("--m-max", o.m_max, "Largest m");
    bench->add_option("--epsilon", o.epsilon, "Heavy/light threshold exponent")->check(CLI::PositiveNumber);
    bench->add_flag("--baseline", o.baseline, "Materialize the first decomposition instead");
    bench->add_flag("--classic", o.classic, "Use |R| <= N for every atom");
    bench->add_flag("--csv", o.csv, "CSV output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }

    try {
        if (*eval) {
            if (o.data.empty() && !o.dump_tds) throw UsageError("eval needs --data");
            return cmd_eval(o, out);
        }
        if (*width) return cmd_width(o, out);
        if (*square) return cmd_gen_square(o);
        if (*random) return cmd_gen_random(o);
        if (*oracle) return cmd_oracle(o, out);
        if (*bench) return cmd_bench(o, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const InvariantError& e) {
        err << "internal error: " << e.what() << '\n';
        return 3;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return 3;
    }
    return 1;
}

}  // namespace jaguar
