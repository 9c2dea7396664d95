// engine.hpp -- the population loop: select, learn, sample, decode, replace.
//
// Three modes share one loop and differ only in where the sampling model
// comes from: Op learns a chain model from the selected parents each
// generation, CP keeps a fixed uniform model over the rule universe, and Rd
// always emits the single rule in its universe.
//
// Reproducibility: a run is a pure function of the instance and the config.
// Four independent streams are derived from the root seed (initial strings,
// parent selection, offspring sampling, and a seed-splitter that hands every
// decode its own stream), so offspring can be decoded in any order or on any
// number of threads without changing the result.
#pragma once

#include <nsbo/bayesnet.hpp>
#include <nsbo/rng.hpp>
#include <nsbo/rules.hpp>

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <numeric>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

namespace nsbo {

enum class RunMode { Rd, CP, Op };

inline const char* mode_name(RunMode mode) {
    switch (mode) {
        case RunMode::Rd: return "rd";
        case RunMode::CP: return "cp";
        case RunMode::Op: return "op";
    }
    return "?";
}

inline RunMode parse_mode(const std::string& text) {
    if (text == "rd") return RunMode::Rd;
    if (text == "cp") return RunMode::CP;
    if (text == "op") return RunMode::Op;
    throw std::invalid_argument("unknown mode \"" + text + "\" (expected rd, cp, or op)");
}

struct Individual {
    RuleString rules;
    Roster roster;
};

struct RunConfig {
    RunMode mode = RunMode::Op;
    int generations = 2000;
    int population = 140;
    int elites = 40;
    double demand_penalty = 200.0;
    int k_cheapest = 5;
    ContributionWeights weights;
    double alpha = 0.0;
    std::uint64_t seed = 1;
    int selection_size = 0;  // 0 resolves to population / 2
    int threads = 1;
    std::optional<double> target_fitness;  // stop once the best reaches this
    bool self_check = false;
    std::vector<RuleId> rule_universe;  // empty resolves to the mode default
};

/// Fills defaults and rejects inconsistent settings.
inline RunConfig resolve_config(RunConfig cfg) {
    if (cfg.population < 2) throw std::invalid_argument("population must be at least 2");
    if (cfg.elites < 1 || cfg.elites >= cfg.population)
        throw std::invalid_argument("elites must be in [1, population)");
    if (cfg.generations < 0) throw std::invalid_argument("generations must be non-negative");
    if (cfg.k_cheapest < 1) throw std::invalid_argument("k must be at least 1");
    if (cfg.alpha < 0.0) throw std::invalid_argument("alpha must be non-negative");
    if (cfg.demand_penalty < 0.0) throw std::invalid_argument("demand penalty must be non-negative");
    if (cfg.threads < 1) throw std::invalid_argument("threads must be at least 1");
    if (cfg.weights.pattern_cost < 0.0) throw std::invalid_argument("cost weight must be non-negative");
    for (double w : cfg.weights.grade)
        if (w < 0.0) throw std::invalid_argument("grade weights must be non-negative");

    if (cfg.selection_size == 0) cfg.selection_size = cfg.population / 2;
    if (cfg.selection_size < 1) throw std::invalid_argument("selection size must be at least 1");

    if (cfg.rule_universe.empty()) {
        if (cfg.mode == RunMode::Rd)
            cfg.rule_universe = {RuleId::Random};
        else
            cfg.rule_universe = {RuleId::Random, RuleId::KCheapest, RuleId::Cover, RuleId::Contribution};
    }
    std::vector<bool> seen(kNumRules, false);
    for (RuleId r : cfg.rule_universe) {
        const int v = static_cast<int>(r);
        if (v < 0 || v >= kNumRules) throw std::invalid_argument("rule universe entry out of range");
        if (seen[v]) throw std::invalid_argument("rule universe has duplicates");
        seen[v] = true;
    }
    if (cfg.mode == RunMode::Rd && cfg.rule_universe.size() != 1)
        throw std::invalid_argument("single-rule mode needs a universe of exactly one rule");
    return cfg;
}

/// Roulette parent selection, weight 1 / (1 + fitness), with replacement.
inline std::vector<std::size_t> select(std::span<const Individual> population, std::size_t count,
                                       RandomStream& rng) {
    if (population.empty()) throw std::invalid_argument("select: empty population");
    std::vector<double> weights(population.size());
    for (std::size_t i = 0; i < population.size(); ++i) weights[i] = 1.0 / (1.0 + population[i].roster.fitness);
    std::vector<std::size_t> picked(count);
    for (std::size_t i = 0; i < count; ++i) picked[i] = rng.roulette(weights);
    return picked;
}

class SearchState {
public:
    SearchState(const Instance& inst, const RunConfig& cfg)
        : inst_(&inst),
          cfg_(resolve_config(cfg)),
          ctx_(make_context(inst)),
          init_rng_(derive_seed(cfg_.seed, kInitTag)),
          select_rng_(derive_seed(cfg_.seed, kSelectTag)),
          sample_rng_(derive_seed(cfg_.seed, kSampleTag)),
          split_rng_(derive_seed(cfg_.seed, kSplitTag)) {
        params_.k_cheapest = cfg_.k_cheapest;
        params_.weights = cfg_.weights;
        params_.demand_penalty = cfg_.demand_penalty;

        const int n = static_cast<int>(inst.nurses.size());
        std::vector<RuleString> strings(cfg_.population, RuleString(n));
        for (RuleString& s : strings)
            for (int t = 0; t < n; ++t) s[t] = cfg_.rule_universe[init_rng_.pick(cfg_.rule_universe.size())];
        population_ = evaluate_batch(std::move(strings));
        record_trace();
        if (cfg_.self_check) self_check();
    }

    /// One generation: model, offspring, elitist replacement.
    void step() {
        const ChainModel model = build_model();
        if (cfg_.self_check && !is_stochastic(model))
            throw std::logic_error("self-check: learned model rows are not distributions");
        std::vector<RuleString> strings;
        strings.reserve(cfg_.population - cfg_.elites);
        for (int i = 0; i < cfg_.population - cfg_.elites; ++i) strings.push_back(sample(model, sample_rng_));
        std::vector<Individual> offspring = evaluate_batch(std::move(strings));

        std::vector<std::size_t> order(population_.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [this](std::size_t a, std::size_t b) {
            return population_[a].roster.fitness < population_[b].roster.fitness;
        });
        std::vector<Individual> next;
        next.reserve(cfg_.population);
        for (int e = 0; e < cfg_.elites; ++e) next.push_back(population_[order[e]]);
        for (Individual& child : offspring) next.push_back(std::move(child));
        population_ = std::move(next);
        ++generation_;
        record_trace();
        if (cfg_.self_check) self_check();
    }

    const RunConfig& config() const { return cfg_; }
    const std::vector<Individual>& population() const { return population_; }
    int generation() const { return generation_; }
    const std::vector<double>& trace_best() const { return trace_best_; }
    const std::vector<char>& trace_feasible() const { return trace_feasible_; }

    const Individual& best() const {
        std::size_t best_i = 0;
        for (std::size_t i = 1; i < population_.size(); ++i)
            if (population_[i].roster.fitness < population_[best_i].roster.fitness) best_i = i;
        return population_[best_i];
    }

    /// Test hook: replaces the population with decoded copies of the given
    /// rule strings. Draws decode seeds from the usual splitter.
    void set_population(std::vector<RuleString> strings) {
        if (static_cast<int>(strings.size()) != cfg_.population)
            throw std::invalid_argument("set_population: wrong population size");
        population_ = evaluate_batch(std::move(strings));
        trace_best_.back() = best().roster.fitness;
        trace_feasible_.back() = best().roster.feasible ? 1 : 0;
    }

private:
    static constexpr std::uint64_t kInitTag = 1, kSelectTag = 2, kSampleTag = 3, kSplitTag = 4;

    ChainModel build_model() {
        const int n = static_cast<int>(inst_->nurses.size());
        switch (cfg_.mode) {
            case RunMode::Rd: return constant_chain(n, kNumRules, cfg_.rule_universe[0]);
            case RunMode::CP: return support_chain(n, kNumRules, cfg_.rule_universe);
            case RunMode::Op: {
                const std::vector<std::size_t> parents = select(population_, cfg_.selection_size, select_rng_);
                std::vector<RuleString> selected;
                selected.reserve(parents.size());
                for (std::size_t p : parents) selected.push_back(population_[p].rules);
                return learn(selected, kNumRules, cfg_.alpha);
            }
        }
        throw std::logic_error("unreachable mode");
    }

    std::vector<Individual> evaluate_batch(std::vector<RuleString> strings) {
        std::vector<std::uint64_t> seeds(strings.size());
        for (std::uint64_t& s : seeds) s = split_rng_.next();
        std::vector<Individual> out(strings.size());
        const auto chunk = [&](std::size_t lo, std::size_t hi) {
            for (std::size_t i = lo; i < hi; ++i) {
                RandomStream rng(seeds[i]);
                Roster roster = decode(ctx_, strings[i], params_, rng);
                out[i] = Individual{std::move(strings[i]), std::move(roster)};
            }
        };
        const std::size_t workers = std::min<std::size_t>(cfg_.threads, strings.size());
        if (workers <= 1) {
            chunk(0, strings.size());
        } else {
            std::vector<std::thread> pool;
            pool.reserve(workers);
            const std::size_t per = (strings.size() + workers - 1) / workers;
            for (std::size_t w = 0; w < workers; ++w) {
                const std::size_t lo = w * per, hi = std::min(strings.size(), lo + per);
                if (lo < hi) pool.emplace_back(chunk, lo, hi);
            }
            for (std::thread& t : pool) t.join();
        }
        return out;
    }

    void record_trace() {
        const Individual& b = best();
        trace_best_.push_back(b.roster.fitness);
        trace_feasible_.push_back(b.roster.feasible ? 1 : 0);
    }

    void self_check() const {
        try {
            for (const Individual& ind : population_) {
                if (ind.rules.size() != inst_->nurses.size())
                    throw std::logic_error("self-check: rule string length drifted");
                const Roster again = evaluate_assignment(*inst_, ind.roster.assignment, cfg_.demand_penalty);
                if (again.fitness != ind.roster.fitness || again.total_preference != ind.roster.total_preference ||
                    again.undercover_units != ind.roster.undercover_units || again.feasible != ind.roster.feasible)
                    throw std::logic_error("self-check: cached roster disagrees with reevaluation");
            }
        } catch (const std::invalid_argument& e) {
            throw std::logic_error(std::string("self-check: ") + e.what());
        }
        for (std::size_t g = 1; g < trace_best_.size(); ++g)
            if (trace_best_[g] > trace_best_[g - 1])
                throw std::logic_error("self-check: best fitness worsened despite elitism");
    }

    const Instance* inst_;
    RunConfig cfg_;
    DecodeContext ctx_;
    DecodeParams params_;
    RandomStream init_rng_, select_rng_, sample_rng_, split_rng_;
    std::vector<Individual> population_;
    int generation_ = 0;
    std::vector<double> trace_best_;
    std::vector<char> trace_feasible_;
};

struct RunReport {
    RunConfig config;  // resolved
    std::vector<double> best_fitness_per_generation;  // entry 0 is the initial population
    std::vector<char> trace_feasible;
    Roster best;
    RuleString best_rules;
    int generations_to_best = 0;
    int generations_run = 0;
    bool early_stopped = false;
    double wall_seconds = 0.0;
};

inline RunReport run(const Instance& inst, const RunConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    SearchState state(inst, cfg);
    const RunConfig& resolved = state.config();
    const auto reached = [&] {
        return resolved.target_fitness && state.best().roster.fitness <= *resolved.target_fitness;
    };
    int steps = 0;
    while (steps < resolved.generations && !reached()) {
        state.step();
        ++steps;
    }

    RunReport report;
    report.config = resolved;
    report.best_fitness_per_generation = state.trace_best();
    report.trace_feasible = state.trace_feasible();
    const Individual& champion = state.best();
    report.best = champion.roster;
    report.best_rules = champion.rules;
    report.generations_run = steps;
    report.early_stopped = steps < resolved.generations;
    report.generations_to_best = 0;
    for (std::size_t g = 0; g < report.best_fitness_per_generation.size(); ++g)
        if (report.best_fitness_per_generation[g] == champion.roster.fitness) {
            report.generations_to_best = static_cast<int>(g);
            break;
        }
    report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

/// Everything except the "timing" section is a pure function of instance and
/// config; determinism checks compare the dump with "timing" erased.
inline nlohmann::json report_to_json(const RunReport& report) {
    const RunConfig& cfg = report.config;
    nlohmann::json config;
    config["mode"] = mode_name(cfg.mode);
    config["generations"] = cfg.generations;
    config["population"] = cfg.population;
    config["elites"] = cfg.elites;
    config["demand_penalty"] = cfg.demand_penalty;
    config["k_cheapest"] = cfg.k_cheapest;
    config["weights"] = {{"pattern_cost", cfg.weights.pattern_cost}, {"grade", cfg.weights.grade}};
    config["alpha"] = cfg.alpha;
    config["seed"] = cfg.seed;
    config["selection_size"] = cfg.selection_size;
    config["self_check"] = cfg.self_check;
    if (cfg.target_fitness)
        config["target_fitness"] = *cfg.target_fitness;
    else
        config["target_fitness"] = nullptr;
    config["rule_universe"] = nlohmann::json::array();
    for (RuleId r : cfg.rule_universe) config["rule_universe"].push_back(rule_name(r));

    nlohmann::json result;
    result["best_fitness"] = report.best.fitness;
    result["feasible"] = report.best.feasible;
    result["total_preference"] = report.best.total_preference;
    result["undercover_units"] = report.best.undercover_units;
    result["assignment"] = nlohmann::json::array();
    for (int j : report.best.assignment) result["assignment"].push_back(j + 1);
    result["best_rules"] = nlohmann::json::array();
    for (RuleId r : report.best_rules) result["best_rules"].push_back(rule_name(r));
    result["generations_run"] = report.generations_run;
    result["generations_to_best"] = report.generations_to_best;
    result["early_stopped"] = report.early_stopped;

    nlohmann::json trace;
    trace["best_fitness"] = report.best_fitness_per_generation;
    trace["feasible"] = nlohmann::json::array();
    for (char f : report.trace_feasible) trace["feasible"].push_back(f ? 1 : 0);

    nlohmann::json j;
    j["config"] = std::move(config);
    j["result"] = std::move(result);
    j["trace"] = std::move(trace);
    j["timing"] = {{"wall_seconds", report.wall_seconds}, {"threads", cfg.threads}};
    return j;
}

inline void write_trace_csv(std::ostream& out, const RunReport& report) {
    out << "generation,best_fitness,feasible\n";
    for (std::size_t g = 0; g < report.best_fitness_per_generation.size(); ++g)
        out << g << ',' << report.best_fitness_per_generation[g] << ','
            << (report.trace_feasible[g] ? 1 : 0) << '\n';
}

}  // namespace nsbo
