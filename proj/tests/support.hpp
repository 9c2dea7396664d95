// support.hpp -- hand-built fixtures shared across the test suite.
#pragma once

#include <nsbo/instance.hpp>

#include <array>
#include <map>
#include <string>

namespace testsupport {

/// Pattern from a 14-character 0/1 string: 7 day slots then 7 night slots,
/// e.g. "11111000000000" is Monday..Friday days.
inline nsbo::ShiftPattern pat(int id, const std::string& bits) {
    std::array<std::uint8_t, nsbo::kSlotCount> covers{};
    for (int k = 0; k < nsbo::kSlotCount; ++k) covers[k] = bits.at(k) == '1' ? 1 : 0;
    return nsbo::ShiftPattern::make(id, covers);
}

/// Gives every nurse a preference cost for each pattern matching their weekly
/// counts, so the feasible set is the full count-matching set.
inline void give_full_preferences(nsbo::Instance& inst, int cost = 0) {
    for (nsbo::Nurse& nurse : inst.nurses)
        for (const nsbo::ShiftPattern& p : inst.patterns)
            if (nsbo::matches_weekly_counts(p, nurse) && !nurse.preference_cost.count(p.id))
                nurse.preference_cost[p.id] = cost;
}

/// Four nurses, mixed grades and shifts, demand partly open and partly met;
/// a state rich enough to exercise every rule.
inline nsbo::Instance mixed_ward() {
    nsbo::Instance inst;
    inst.grades = 2;
    inst.patterns.push_back(pat(0, "11100000000000"));
    inst.patterns.push_back(pat(1, "01110000000000"));
    inst.patterns.push_back(pat(2, "00111000000000"));
    inst.patterns.push_back(pat(3, "10101000000000"));
    inst.patterns.push_back(pat(4, "00000001100000"));
    inst.patterns.push_back(pat(5, "00000000110000"));
    inst.patterns.push_back(pat(6, "00000000011000"));

    const int grades[4] = {0, 1, 1, 0};
    const int days[4] = {3, 3, 0, 0};
    const int nights[4] = {0, 0, 2, 2};
    const std::map<int, int> prefs[4] = {{{0, 5}, {1, 10}, {2, 50}, {3, 0}},
                                         {{0, 10}, {1, 0}, {2, 20}, {3, 30}},
                                         {{4, 0}, {5, 60}, {6, 15}},
                                         {{4, 25}, {5, 5}, {6, 40}}};
    for (int i = 0; i < 4; ++i) {
        nsbo::Nurse nurse;
        nurse.id = i;
        nurse.grade = grades[i];
        nurse.days_if_days = days[i];
        nurse.nights_if_nights = nights[i];
        nurse.preference_cost = prefs[i];
        inst.nurses.push_back(nurse);
    }
    inst.demand = nsbo::Demand(2);
    inst.demand.at(0, 0) = 1;
    inst.demand.at(0, 1) = 2;
    inst.demand.at(1, 1) = 1;
    inst.demand.at(2, 0) = 1;
    inst.demand.at(2, 1) = 1;
    inst.demand.at(7, 1) = 1;
    inst.demand.at(8, 1) = 2;
    inst.demand.at(9, 1) = 1;
    return inst;
}

/// 3 grades, 2 nurses, tiny catalog; the base fixture for several suites.
inline nsbo::Instance small_ward() {
    nsbo::Instance inst;
    inst.grades = 3;
    inst.patterns.push_back(pat(0, "11111000000000"));  // Mon..Fri days
    inst.patterns.push_back(pat(1, "01111100000000"));  // Tue..Sat days
    inst.patterns.push_back(pat(2, "00000001111000"));  // Mon..Thu nights
    inst.patterns.push_back(pat(3, "00000000111100"));  // Tue..Fri nights

    nsbo::Nurse a;
    a.id = 0;
    a.grade = 0;
    a.days_if_days = 5;
    a.nights_if_nights = 4;
    a.preference_cost = {{0, 10}, {1, 20}, {2, 30}, {3, 40}};
    nsbo::Nurse b;
    b.id = 1;
    b.grade = 2;
    b.days_if_days = 5;
    b.nights_if_nights = 4;
    b.preference_cost = {{0, 0}, {1, 5}, {2, 15}, {3, 25}};
    inst.nurses = {a, b};

    inst.demand = nsbo::Demand(3);
    inst.demand.at(0, 0) = 1;
    inst.demand.at(0, 2) = 2;
    inst.demand.at(8, 2) = 1;
    return inst;
}

}  // namespace testsupport
