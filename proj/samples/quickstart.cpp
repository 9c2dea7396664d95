// quickstart.cpp -- build a three-nurse ward in code, decode one rule string,
// then let the full search loose on it.
#include <nsbo/nsbo.hpp>

#include <cstdio>

using namespace nsbo;

namespace {

ShiftPattern pattern_from(int id, const char (&slots)[kSlotCount + 1]) {
    std::array<std::uint8_t, kSlotCount> covers{};
    for (int k = 0; k < kSlotCount; ++k) covers[k] = slots[k] == '1';
    return ShiftPattern::make(id, covers);
}

}  // namespace

int main() {
    Instance ward;
    ward.grades = 2;

    // Two 4-day patterns, two 3-night patterns. Slots 0-6 are days Mon-Sun,
    // slots 7-13 the matching nights.
    ward.patterns = {
        pattern_from(0, "11110000000000"),
        pattern_from(1, "01111000000000"),
        pattern_from(2, "00000001110000"),
        pattern_from(3, "00000000111000"),
    };

    const auto nurse = [](int id, int grade, std::map<int, int> costs) {
        Nurse n;
        n.id = id;
        n.grade = grade;
        n.days_if_days = 4;
        n.nights_if_nights = 3;
        n.preference_cost = std::move(costs);
        return n;
    };
    ward.nurses = {
        nurse(0, 0, {{0, 5}, {1, 40}, {2, 0}, {3, 60}}),
        nurse(1, 1, {{0, 10}, {1, 10}, {2, 25}, {3, 25}}),
        nurse(2, 1, {{0, 0}, {1, 80}, {2, 30}, {3, 10}}),
    };

    ward.demand = Demand(2);
    ward.demand.at(1, 0) = 1;  // Tuesday day needs one senior
    ward.demand.at(1, 1) = 2;  // ... and two of any grade
    ward.demand.at(8, 1) = 1;  // Tuesday night needs one of any grade

    for (const std::string& problem : validate(ward)) std::fprintf(stderr, "invalid: %s\n", problem.c_str());

    // Decode a single rule string by hand: nurse 0 takes its cheapest
    // pattern, the other two go wherever cover is thinnest.
    RandomStream rng(7);
    const RuleString rules = {RuleId::KCheapest, RuleId::Cover, RuleId::Cover};
    DecodeParams params;
    params.k_cheapest = 1;
    const Roster one = decode(ward, rules, params, rng);
    std::printf("hand-picked rules: fitness %.0f, preference %d, undercover %d\n", one.fitness,
                one.total_preference, one.undercover_units);
    for (std::size_t i = 0; i < one.assignment.size(); ++i)
        std::printf("  nurse %zu -> pattern %d\n", i, one.assignment[i]);

    // Now the full learned search.
    RunConfig cfg;
    cfg.mode = RunMode::Op;
    cfg.generations = 50;
    cfg.population = 30;
    cfg.elites = 8;
    cfg.seed = 1;
    const RunReport rep = run(ward, cfg);
    std::printf("search: fitness %.0f (%s) after %d generations, best first seen at %d\n", rep.best.fitness,
                rep.best.feasible ? "feasible" : "infeasible", rep.generations_run, rep.generations_to_best);
    return 0;
}
