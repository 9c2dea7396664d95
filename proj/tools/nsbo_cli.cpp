// nsbo_cli.cpp -- command line front end: solve, bench, gen, validate, oracle.
//
// Exit codes: 0 success, 2 usage or bad flag values, 3 invalid input files,
// 4 oracle search space over the guard.
#include <nsbo/nsbo.hpp>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

namespace {

nsbo::Instance read_instance(const std::string& path) {
    if (path == "-") return nsbo::load_instance(std::cin, "stdin");
    return nsbo::load_instance_file(path);
}

/// Loads and fully validates, or throws InputError listing every violation.
nsbo::Instance read_valid_instance(const std::string& path) {
    nsbo::Instance inst = read_instance(path);
    const std::vector<std::string> violations = nsbo::validate(inst);
    if (!violations.empty()) {
        std::string msg = path + " is not a valid instance:";
        for (const std::string& v : violations) msg += "\n  " + v;
        throw nsbo::InputError(msg);
    }
    return inst;
}

/// Stream sink that is std::cout by default and a file when a path is given.
class OutputTarget {
public:
    explicit OutputTarget(const std::string& path) {
        if (path.empty()) return;
        file_.open(path);
        if (!file_) throw nsbo::InputError("cannot write to " + path);
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

private:
    std::ofstream file_;
};

nsbo::ContributionWeights weights_from_flag(const std::vector<double>& values) {
    if (values.size() < 2)
        throw std::invalid_argument("--weights needs at least two comma-separated values: wp,w1[,w2,...]");
    nsbo::ContributionWeights w;
    w.pattern_cost = values[0];
    w.grade.assign(values.begin() + 1, values.end());
    return w;
}

struct SolveOptions {
    std::string instance_path;
    std::string mode = "op";
    nsbo::RunConfig cfg;
    std::vector<double> weights_flag;
    std::string trace_path;
    std::string output_path;
    double target = 0.0;
    bool has_target = false;
};

int run_solve(SolveOptions& opt) {
    opt.cfg.mode = nsbo::parse_mode(opt.mode);
    if (!opt.weights_flag.empty()) opt.cfg.weights = weights_from_flag(opt.weights_flag);
    if (opt.has_target) opt.cfg.target_fitness = opt.target;

    const nsbo::Instance inst = read_valid_instance(opt.instance_path);
    const nsbo::RunReport report = nsbo::run(inst, opt.cfg);

    if (!opt.trace_path.empty()) {
        std::ofstream trace(opt.trace_path);
        if (!trace) throw nsbo::InputError("cannot write to " + opt.trace_path);
        nsbo::write_trace_csv(trace, report);
    }
    OutputTarget out(opt.output_path);
    out.stream() << nsbo::report_to_json(report).dump(2) << '\n';
    return 0;
}

struct GenOptions {
    std::string spec_path;
    std::string output_path;
    nsbo::GenSpec spec;
    std::string profile;
    std::vector<std::string> set_flags;  // names the caller actually passed
};

int run_gen(const CLI::App* cmd, GenOptions& opt) {
    nsbo::GenSpec spec;
    if (!opt.spec_path.empty()) {
        std::ifstream in(opt.spec_path);
        if (!in) throw nsbo::InputError("cannot open spec file: " + opt.spec_path);
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(in);
        } catch (const nlohmann::json::parse_error& e) {
            throw nsbo::InputError(opt.spec_path + ": " + e.what());
        }
        spec = nsbo::spec_from_json(j);
    }
    // explicit flags win over the spec file
    const auto passed = [&](const std::string& flag) { return cmd->count(flag) > 0; };
    if (passed("--nurses")) spec.n_nurses = opt.spec.n_nurses;
    if (passed("--grades")) spec.grades = opt.spec.grades;
    if (passed("--day-fraction")) spec.day_fraction = opt.spec.day_fraction;
    if (passed("--day-counts")) spec.day_shift_counts = opt.spec.day_shift_counts;
    if (passed("--night-counts")) spec.night_shift_counts = opt.spec.night_shift_counts;
    if (passed("--tightness")) spec.demand_tightness = opt.spec.demand_tightness;
    if (passed("--profile")) spec.cost_profile = nsbo::parse_cost_profile(opt.profile);
    if (passed("--seed")) spec.seed = opt.spec.seed;
    if (passed("--both-fraction")) spec.both_fraction = opt.spec.both_fraction;
    if (passed("--both-counts")) spec.both_shift_counts = opt.spec.both_shift_counts;
    if (passed("--cap")) spec.combined_catalog_cap = opt.spec.combined_catalog_cap;

    const nsbo::Instance inst = nsbo::generate(spec);
    OutputTarget out(opt.output_path);
    out.stream() << nsbo::instance_to_json(inst).dump(2) << '\n';
    return 0;
}

int run_validate(const std::string& path) {
    nsbo::Instance inst;
    try {
        inst = read_instance(path);
    } catch (const nsbo::InputError& e) {
        std::cerr << e.what() << '\n';
        return 3;
    }
    const std::vector<std::string> violations = nsbo::validate(inst);
    if (!violations.empty()) {
        for (const std::string& v : violations) std::cerr << v << '\n';
        return 3;
    }
    std::cout << "ok: " << inst.grades << " grades, " << inst.patterns.size() << " patterns, "
              << inst.nurses.size() << " nurses\n";
    return 0;
}

struct OracleOptions {
    std::string instance_path;
    double wdemand = 200.0;
    double guard = 1e7;
    std::string output_path;
};

int run_oracle(const OracleOptions& opt) {
    const nsbo::Instance inst = read_valid_instance(opt.instance_path);
    const nsbo::OracleResult best = nsbo::brute_force_optimum(inst, opt.wdemand, opt.guard);
    nlohmann::json j;
    j["fitness"] = best.fitness;
    j["total_preference"] = best.total_preference;
    j["undercover_units"] = best.undercover_units;
    j["feasible"] = best.feasible;
    j["min_undercover"] = best.min_undercover;
    j["assignment"] = nlohmann::json::array();
    for (int p : best.assignment) j["assignment"].push_back(p + 1);
    OutputTarget out(opt.output_path);
    out.stream() << j.dump(2) << '\n';
    return 0;
}

struct BenchOptions {
    std::string suite_dir;
    std::vector<std::string> modes = {"rd", "cp", "op"};
    int seeds = 20;
    std::uint64_t seed_base = 1;
    nsbo::RunConfig cfg;
    std::vector<double> weights_flag;
    double guard = 1e7;
    int threads = 1;
    std::string output_path;
};

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

int run_bench(BenchOptions& opt) {
    if (opt.suite_dir.empty()) {
        if (const char* env = std::getenv("NSBO_SUITE_DIR")) opt.suite_dir = env;
    }
    if (opt.suite_dir.empty())
        throw std::invalid_argument("no suite directory: pass --suite or set NSBO_SUITE_DIR");
    if (opt.seeds < 1) throw std::invalid_argument("--seeds must be at least 1");
    if (opt.threads < 1) throw std::invalid_argument("--threads must be at least 1");
    if (!opt.weights_flag.empty()) opt.cfg.weights = weights_from_flag(opt.weights_flag);
    std::vector<nsbo::RunMode> modes;
    for (const std::string& m : opt.modes) modes.push_back(nsbo::parse_mode(m));

    std::vector<std::filesystem::path> files;
    {
        std::error_code ec;
        std::filesystem::directory_iterator it(opt.suite_dir, ec);
        if (ec) throw nsbo::InputError("cannot read suite directory: " + opt.suite_dir);
        for (const auto& entry : it)
            if (entry.path().extension() == ".json" && entry.path().filename() != "manifest.json")
                files.push_back(entry.path());
    }
    if (files.empty()) throw nsbo::InputError("no instances in suite directory: " + opt.suite_dir);
    std::sort(files.begin(), files.end());

    OutputTarget out(opt.output_path);
    out.stream() << "instance,mode,best,mean,inf,optimal,within3,wall_s\n";

    for (const std::filesystem::path& file : files) {
        const nsbo::Instance inst = read_valid_instance(file.string());
        std::optional<nsbo::OracleResult> optimum;
        try {
            optimum = nsbo::brute_force_optimum(inst, opt.cfg.demand_penalty, opt.guard);
        } catch (const nsbo::GuardExceeded&) {
            optimum.reset();
        }

        for (nsbo::RunMode mode : modes) {
            std::vector<nsbo::RunReport> reports(opt.seeds);
            const auto t0 = std::chrono::steady_clock::now();
            const auto chunk = [&](int lo, int hi) {
                for (int s = lo; s < hi; ++s) {
                    nsbo::RunConfig cfg = opt.cfg;
                    cfg.mode = mode;
                    cfg.rule_universe.clear();
                    cfg.seed = opt.seed_base + static_cast<std::uint64_t>(s);
                    if (optimum && !cfg.target_fitness) cfg.target_fitness = optimum->fitness;
                    reports[s] = nsbo::run(inst, cfg);
                }
            };
            const int workers = std::min(opt.threads, opt.seeds);
            if (workers <= 1) {
                chunk(0, opt.seeds);
            } else {
                std::vector<std::thread> pool;
                const int per = (opt.seeds + workers - 1) / workers;
                for (int w = 0; w < workers; ++w) {
                    const int lo = w * per, hi = std::min(opt.seeds, lo + per);
                    if (lo < hi) pool.emplace_back(chunk, lo, hi);
                }
                for (std::thread& t : pool) t.join();
            }
            const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

            double mean = 0.0;
            double best = std::numeric_limits<double>::infinity();
            int infeasible = 0, optimal = 0, within3 = 0;
            for (const nsbo::RunReport& r : reports) {
                mean += r.best.feasible ? r.best.fitness : 255.0;
                infeasible += r.best.feasible ? 0 : 1;
                if (r.best.feasible) best = std::min(best, r.best.fitness);
                if (optimum) {
                    optimal += r.best.fitness <= optimum->fitness + 1e-9;
                    within3 += r.best.fitness <= optimum->fitness + 3.0 + 1e-9;
                }
            }
            mean /= opt.seeds;

            out.stream() << file.stem().string() << ',' << nsbo::mode_name(mode) << ','
                         << (infeasible == opt.seeds ? "NA" : format_number(best)) << ','
                         << format_number(mean) << ',' << infeasible << ','
                         << (optimum ? std::to_string(optimal) : "NA") << ','
                         << (optimum ? std::to_string(within3) : "NA") << ',';
            char wall_buf[32];
            std::snprintf(wall_buf, sizeof wall_buf, "%.3f", wall);
            out.stream() << wall_buf << '\n';
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bayesian-network rule-string solver for weekly nurse scheduling"};
    app.require_subcommand(1);

    SolveOptions solve_opt;
    CLI::App* solve = app.add_subcommand("solve", "run the solver on an instance file");
    solve->add_option("instance", solve_opt.instance_path, "instance file (- for stdin)")->required();
    solve->add_option("--mode", solve_opt.mode, "rd, cp, or op")->capture_default_str();
    solve->add_option("--generations", solve_opt.cfg.generations)->capture_default_str();
    solve->add_option("--population", solve_opt.cfg.population)->capture_default_str();
    solve->add_option("--elites", solve_opt.cfg.elites)->capture_default_str();
    solve->add_option("--seed", solve_opt.cfg.seed)->capture_default_str();
    solve->add_option("--k", solve_opt.cfg.k_cheapest, "pool size for the cheapest-pattern rule")
        ->capture_default_str();
    solve->add_option("--weights", solve_opt.weights_flag, "contribution weights wp,w1,w2,...")->delimiter(',');
    solve->add_option("--wdemand", solve_opt.cfg.demand_penalty, "penalty per missing unit of cover")
        ->capture_default_str();
    solve->add_option("--alpha", solve_opt.cfg.alpha, "Laplace smoothing for learned probabilities")
        ->capture_default_str();
    solve->add_option("--selection", solve_opt.cfg.selection_size, "parents per generation (0 = half)")
        ->capture_default_str();
    solve->add_option("--threads", solve_opt.cfg.threads)->capture_default_str();
    solve->add_option("--target", solve_opt.target, "stop once best fitness reaches this");
    solve->add_flag("--self-check", solve_opt.cfg.self_check, "verify internal bookkeeping every generation");
    solve->add_option("--trace", solve_opt.trace_path, "write per-generation csv here");
    solve->add_option("--output", solve_opt.output_path, "report file (default stdout)");

    GenOptions gen_opt;
    CLI::App* gen = app.add_subcommand("gen", "generate a synthetic instance");
    gen->add_option("--spec", gen_opt.spec_path, "json recipe file");
    gen->add_option("--nurses", gen_opt.spec.n_nurses)->capture_default_str();
    gen->add_option("--grades", gen_opt.spec.grades)->capture_default_str();
    gen->add_option("--day-fraction", gen_opt.spec.day_fraction)->capture_default_str();
    gen->add_option("--day-counts", gen_opt.spec.day_shift_counts, "weekly day-shift counts")->delimiter(',');
    gen->add_option("--night-counts", gen_opt.spec.night_shift_counts, "weekly night-shift counts")->delimiter(',');
    gen->add_option("--tightness", gen_opt.spec.demand_tightness)->capture_default_str();
    gen->add_option("--profile", gen_opt.profile, "cost profile: mixed or uniform");
    gen->add_option("--seed", gen_opt.spec.seed)->capture_default_str();
    gen->add_option("--both-fraction", gen_opt.spec.both_fraction)->capture_default_str();
    gen->add_option("--both-counts", gen_opt.spec.both_shift_counts)->delimiter(',');
    gen->add_option("--cap", gen_opt.spec.combined_catalog_cap, "max sampled combined patterns")
        ->capture_default_str();
    gen->add_option("--output", gen_opt.output_path, "instance file (default stdout)");

    std::string validate_path = "-";
    CLI::App* validate_cmd = app.add_subcommand("validate", "check an instance file (default stdin)");
    validate_cmd->add_option("instance", validate_path, "instance file (- for stdin)");

    OracleOptions oracle_opt;
    CLI::App* oracle = app.add_subcommand("oracle", "exhaustively solve a small instance");
    oracle->add_option("instance", oracle_opt.instance_path, "instance file (- for stdin)")->required();
    oracle->add_option("--wdemand", oracle_opt.wdemand)->capture_default_str();
    oracle->add_option("--guard", oracle_opt.guard, "largest allowed search space")->capture_default_str();
    oracle->add_option("--output", oracle_opt.output_path, "result file (default stdout)");

    BenchOptions bench_opt;
    CLI::App* bench = app.add_subcommand("bench", "run a suite of instances across modes");
    bench->add_option("--suite", bench_opt.suite_dir, "instance directory (default $NSBO_SUITE_DIR)");
    bench->add_option("--modes", bench_opt.modes, "subset of rd,cp,op")->delimiter(',');
    bench->add_option("--seeds", bench_opt.seeds, "runs per instance and mode")->capture_default_str();
    bench->add_option("--seed-base", bench_opt.seed_base, "first seed")->capture_default_str();
    bench->add_option("--generations", bench_opt.cfg.generations)->capture_default_str();
    bench->add_option("--population", bench_opt.cfg.population)->capture_default_str();
    bench->add_option("--elites", bench_opt.cfg.elites)->capture_default_str();
    bench->add_option("--k", bench_opt.cfg.k_cheapest)->capture_default_str();
    bench->add_option("--weights", bench_opt.weights_flag, "contribution weights wp,w1,w2,...")->delimiter(',');
    bench->add_option("--wdemand", bench_opt.cfg.demand_penalty)->capture_default_str();
    bench->add_option("--alpha", bench_opt.cfg.alpha)->capture_default_str();
    bench->add_option("--guard", bench_opt.guard, "largest oracle search space")->capture_default_str();
    bench->add_option("--threads", bench_opt.threads, "parallel runs")->capture_default_str();
    bench->add_option("--output", bench_opt.output_path, "csv file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (solve->parsed()) {
            solve_opt.has_target = solve->count("--target") > 0;
            return run_solve(solve_opt);
        }
        if (gen->parsed()) return run_gen(gen, gen_opt);
        if (validate_cmd->parsed()) return run_validate(validate_path);
        if (oracle->parsed()) return run_oracle(oracle_opt);
        if (bench->parsed()) return run_bench(bench_opt);
    } catch (const nsbo::GuardExceeded& e) {
        std::cerr << e.what() << '\n';
        return 4;
    } catch (const nsbo::InputError& e) {
        std::cerr << e.what() << '\n';
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << e.what() << '\n';
        return 2;
    }
    return 0;
}
