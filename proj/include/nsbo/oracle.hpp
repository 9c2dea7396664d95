// oracle.hpp -- exhaustive reference answers for small inputs.
//
// Everything here re-derives feasibility, coverage, and cost from first
// principles on purpose: the solver headers are not included, so the two
// implementations can be checked against each other. Keep it that way.
#pragma once

#include <nsbo/instance.hpp>

#include <algorithm>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace nsbo {

/// The search space is larger than the caller's guard allows.
struct GuardExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct OracleResult {
    std::vector<int> assignment;  // lexicographically smallest minimizer
    double fitness = 0.0;
    int total_preference = 0;
    int undercover_units = 0;
    bool feasible = false;
    int min_undercover = 0;  // smallest undercover any complete assignment achieves
};

namespace oracle_detail {

inline std::vector<std::vector<int>> feasible_sets(const Instance& inst) {
    std::vector<std::vector<int>> sets;
    for (const Nurse& nurse : inst.nurses) {
        std::vector<int> ids;
        for (const auto& [pattern_id, cost] : nurse.preference_cost) {
            if (pattern_id < 0 || pattern_id >= static_cast<int>(inst.patterns.size()))
                throw std::invalid_argument("oracle: preference for unknown pattern");
            const ShiftPattern& p = inst.patterns[pattern_id];
            int days = 0, nights = 0;
            for (int k = 0; k < kDayCount; ++k) days += p.covers[k];
            for (int k = kDayCount; k < kSlotCount; ++k) nights += p.covers[k];
            bool ok = false;
            if (days > 0 && nights == 0)
                ok = days == nurse.days_if_days;
            else if (nights > 0 && days == 0)
                ok = nights == nurse.nights_if_nights;
            else if (days > 0 && nights > 0)
                ok = nurse.both_if_both.has_value() && days + nights == *nurse.both_if_both;
            if (ok) ids.push_back(pattern_id);
        }
        if (ids.empty())
            throw std::invalid_argument("oracle: nurse " + std::to_string(nurse.id + 1) +
                                        " has no feasible pattern");
        sets.push_back(std::move(ids));
    }
    return sets;
}

}  // namespace oracle_detail

/// Scores one complete assignment from first principles.
inline OracleResult oracle_eval(const Instance& inst, std::span<const int> assignment, double demand_penalty = 200.0) {
    const std::vector<std::vector<int>> sets = oracle_detail::feasible_sets(inst);
    if (assignment.size() != sets.size()) throw std::invalid_argument("oracle: wrong assignment length");

    OracleResult r;
    r.assignment.assign(assignment.begin(), assignment.end());
    std::vector<int> covered(kSlotCount * inst.grades, 0);
    for (std::size_t i = 0; i < sets.size(); ++i) {
        const int j = assignment[i];
        if (std::find(sets[i].begin(), sets[i].end(), j) == sets[i].end())
            throw std::invalid_argument("oracle: assignment leaves a feasible set");
        r.total_preference += inst.nurses[i].preference_cost.at(j);
        for (int k = 0; k < kSlotCount; ++k)
            if (inst.patterns[j].covers[k])
                for (int s = inst.nurses[i].grade; s < inst.grades; ++s) ++covered[k * inst.grades + s];
    }
    for (int k = 0; k < kSlotCount; ++k)
        for (int s = 0; s < inst.grades; ++s) {
            const int gap = inst.demand.at(k, s) - covered[k * inst.grades + s];
            if (gap > 0) r.undercover_units += gap;
        }
    r.fitness = r.total_preference + demand_penalty * r.undercover_units;
    r.feasible = r.undercover_units == 0;
    r.min_undercover = r.undercover_units;
    return r;
}

/// Full enumeration of all assignments, refusing search spaces beyond the
/// guard. Ties in fitness keep the first assignment in ascending order.
inline OracleResult brute_force_optimum(const Instance& inst, double demand_penalty = 200.0, double guard = 1e7) {
    const std::vector<std::vector<int>> sets = oracle_detail::feasible_sets(inst);
    const int n = static_cast<int>(sets.size());

    double space = 1.0;
    for (const std::vector<int>& ids : sets) space *= static_cast<double>(ids.size());
    if (space > guard)
        throw GuardExceeded("search space of " + std::to_string(space) + " assignments exceeds the guard of " +
                            std::to_string(guard));

    std::vector<int> covered(kSlotCount * inst.grades, 0);
    int deficit = 0;
    for (int v : inst.demand.required) deficit += std::max(0, v);

    OracleResult best;
    best.fitness = std::numeric_limits<double>::infinity();
    best.min_undercover = std::numeric_limits<int>::max();
    std::vector<int> current(n, -1);
    int preference = 0;

    // Every covered slot adjusts the running deficit in O(1).
    const auto put = [&](int nurse, int pattern, int direction) {
        const ShiftPattern& p = inst.patterns[pattern];
        for (int k = 0; k < kSlotCount; ++k) {
            if (!p.covers[k]) continue;
            for (int s = inst.nurses[nurse].grade; s < inst.grades; ++s) {
                int& c = covered[k * inst.grades + s];
                if (direction > 0) {
                    if (c < inst.demand.at(k, s)) --deficit;
                    ++c;
                } else {
                    --c;
                    if (c < inst.demand.at(k, s)) ++deficit;
                }
            }
        }
        preference += direction * inst.nurses[nurse].preference_cost.at(pattern);
    };

    const auto walk = [&](auto&& self, int nurse) -> void {
        if (nurse == n) {
            const double fitness = preference + demand_penalty * deficit;
            best.min_undercover = std::min(best.min_undercover, deficit);
            if (fitness < best.fitness) {
                best.fitness = fitness;
                best.assignment = current;
                best.total_preference = preference;
                best.undercover_units = deficit;
            }
            return;
        }
        for (int j : sets[nurse]) {
            current[nurse] = j;
            put(nurse, j, 1);
            self(self, nurse + 1);
            put(nurse, j, -1);
            current[nurse] = -1;
        }
    };
    walk(walk, 0);

    best.feasible = best.undercover_units == 0;
    return best;
}

/// Literal-tally chain frequencies, the reference for the learned model.
struct CountingModel {
    std::vector<double> initial;
    std::vector<std::vector<std::vector<double>>> transitions;
};

inline CountingModel counting_oracle(const std::vector<std::vector<int>>& selected, int n_symbols,
                                     double alpha = 0.0) {
    if (selected.empty()) throw std::invalid_argument("counting oracle: empty set");
    const std::size_t len = selected.front().size();
    if (len == 0) throw std::invalid_argument("counting oracle: empty strings");
    for (const std::vector<int>& s : selected) {
        if (s.size() != len) throw std::invalid_argument("counting oracle: ragged set");
        for (int v : s)
            if (v < 0 || v >= n_symbols) throw std::invalid_argument("counting oracle: symbol out of range");
    }

    CountingModel model;
    model.initial.assign(n_symbols, 0.0);
    for (const std::vector<int>& s : selected) model.initial[s[0]] += 1.0;
    for (double& v : model.initial) v = (v + alpha) / (selected.size() + alpha * n_symbols);

    for (std::size_t t = 0; t + 1 < len; ++t) {
        std::vector<std::vector<double>> step(n_symbols, std::vector<double>(n_symbols, 0.0));
        std::vector<double> parent(n_symbols, 0.0);
        for (const std::vector<int>& s : selected) {
            step[s[t]][s[t + 1]] += 1.0;
            parent[s[t]] += 1.0;
        }
        for (int p = 0; p < n_symbols; ++p) {
            const double denom = parent[p] + alpha * n_symbols;
            for (int c = 0; c < n_symbols; ++c)
                step[p][c] = denom > 0.0 ? (step[p][c] + alpha) / denom : 1.0 / n_symbols;
        }
        model.transitions.push_back(std::move(step));
    }
    return model;
}

}  // namespace nsbo
