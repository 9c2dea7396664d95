// mode_comparison.cpp -- generate a small ward, solve it exactly, then show
// how the three run modes stack up against the true optimum.
#include <nsbo/nsbo.hpp>

#include <cstdio>

using namespace nsbo;

int main() {
    GenSpec spec;
    spec.n_nurses = 4;
    spec.grades = 2;
    spec.day_shift_counts = {5};
    spec.night_shift_counts = {4};
    spec.demand_tightness = 1.0;
    spec.seed = 203;
    const Instance ward = generate(spec);

    const OracleResult exact = brute_force_optimum(ward, 200.0);
    std::printf("exact optimum: fitness %.0f (%s), preference %d, undercover %d\n\n", exact.fitness,
                exact.feasible ? "feasible" : "infeasible", exact.total_preference, exact.undercover_units);

    std::printf("%-6s %10s %10s %9s %8s\n", "mode", "mean", "best", "feasible", "optimal");
    for (const RunMode mode : {RunMode::Rd, RunMode::CP, RunMode::Op}) {
        double mean = 0.0, best = 1e300;
        int feasible = 0, optimal = 0;
        const int seeds = 10;
        for (int s = 1; s <= seeds; ++s) {
            RunConfig cfg;
            cfg.mode = mode;
            cfg.generations = 200;
            cfg.population = 140;
            cfg.elites = 40;
            cfg.seed = static_cast<std::uint64_t>(s);
            cfg.target_fitness = exact.fitness;  // stop early once matched
            const RunReport rep = run(ward, cfg);
            mean += rep.best.fitness / seeds;
            best = std::min(best, rep.best.fitness);
            if (rep.best.feasible) ++feasible;
            if (rep.best.fitness <= exact.fitness + 1e-9) ++optimal;
        }
        std::printf("%-6s %10.1f %10.0f %6d/%d %6d/%d\n", mode_name(mode), mean, best, feasible, seeds,
                    optimal, seeds);
    }
    return 0;
}
