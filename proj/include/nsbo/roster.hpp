// roster.hpp -- complete weekly assignments and their cost.
#pragma once

#include <nsbo/instance.hpp>

#include <algorithm>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace nsbo {

struct Roster {
    std::vector<int> assignment;  // nurse -> pattern id
    int total_preference = 0;
    int undercover_units = 0;  // missing units of graded cover, summed over (slot, grade)
    double fitness = 0.0;      // total_preference + penalty * undercover_units
    bool feasible = false;     // every (slot, grade) demand met
};

/// Scores a complete assignment from scratch. Patterns outside a nurse's
/// feasible set are refused.
inline Roster evaluate_assignment(const Instance& inst, std::span<const int> assignment, double demand_penalty) {
    const int n = static_cast<int>(inst.nurses.size());
    if (static_cast<int>(assignment.size()) != n)
        throw std::invalid_argument("evaluate_assignment: expected one pattern per nurse");

    Roster r;
    r.assignment.assign(assignment.begin(), assignment.end());
    std::vector<int> covered(kSlotCount * inst.grades, 0);
    for (int i = 0; i < n; ++i) {
        const Nurse& nurse = inst.nurses[i];
        const int j = assignment[i];
        if (j < 0 || j >= static_cast<int>(inst.patterns.size()) || !nurse.preference_cost.count(j) ||
            !matches_weekly_counts(inst.patterns[j], nurse))
            throw std::invalid_argument("evaluate_assignment: nurse " + std::to_string(i + 1) +
                                        " assigned a pattern outside the feasible set");
        r.total_preference += nurse.preference_cost.at(j);
        for (int k = 0; k < kSlotCount; ++k)
            if (inst.patterns[j].covers[k])
                for (int s = nurse.grade; s < inst.grades; ++s) ++covered[k * inst.grades + s];
    }
    for (int k = 0; k < kSlotCount; ++k)
        for (int s = 0; s < inst.grades; ++s)
            r.undercover_units += std::max(0, inst.demand.at(k, s) - covered[k * inst.grades + s]);
    r.fitness = r.total_preference + demand_penalty * r.undercover_units;
    r.feasible = r.undercover_units == 0;
    return r;
}

}  // namespace nsbo
