// instance.hpp -- the weekly nurse scheduling problem: shift-pattern catalog,
// nurses with graded qualifications and weekly shift counts, per-slot demand.
//
// Indexing: a week has 14 slots, 0..6 days and 7..13 nights. Everything in
// memory is 0-based (pattern ids, nurse ids, slots, grade indices; grade 0 is
// the highest qualification). Instance files are 1-based; the loader and
// writer translate.
#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace nsbo {

inline constexpr int kSlotCount = 14;
inline constexpr int kDayCount = 7;

/// Unreadable, unparsable, or schema-violating input.
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class PatternKind { Day, Night, Combined };

struct ShiftPattern {
    int id = 0;                                       // position in the catalog
    std::array<std::uint8_t, kSlotCount> covers{};    // covers[k] == 1: works slot k
    PatternKind kind = PatternKind::Day;

    int day_count() const {
        int c = 0;
        for (int k = 0; k < kDayCount; ++k) c += covers[k];
        return c;
    }
    int night_count() const {
        int c = 0;
        for (int k = kDayCount; k < kSlotCount; ++k) c += covers[k];
        return c;
    }
    int shift_count() const { return day_count() + night_count(); }

    /// Bit k set iff the pattern covers slot k.
    std::uint16_t mask() const {
        std::uint16_t m = 0;
        for (int k = 0; k < kSlotCount; ++k)
            if (covers[k]) m |= static_cast<std::uint16_t>(1u << k);
        return m;
    }

    /// Builds a pattern with the kind derived from its cover vector.
    static ShiftPattern make(int id, const std::array<std::uint8_t, kSlotCount>& covers) {
        ShiftPattern p;
        p.id = id;
        p.covers = covers;
        const bool days = p.day_count() > 0;
        const bool nights = p.night_count() > 0;
        if (!days && !nights) throw InputError("pattern " + std::to_string(id + 1) + " covers nothing");
        p.kind = days && nights ? PatternKind::Combined : (days ? PatternKind::Day : PatternKind::Night);
        return p;
    }
};

struct Nurse {
    int id = 0;
    int grade = 0;                       // 0-based, 0 = highest qualification
    int days_if_days = 0;                // weekly shifts when working days
    int nights_if_nights = 0;            // weekly shifts when working nights
    std::optional<int> both_if_both;     // weekly shifts for day+night contracts
    std::map<int, int> preference_cost;  // pattern id -> cost in [0, 100]
};

struct Demand {
    int grades = 0;
    std::vector<int> required;  // kSlotCount x grades, row-major by slot

    Demand() = default;
    explicit Demand(int grade_count) : grades(grade_count), required(kSlotCount * grade_count, 0) {}

    int at(int slot, int grade) const { return required[slot * grades + grade]; }
    int& at(int slot, int grade) { return required[slot * grades + grade]; }
};

struct Instance {
    int grades = 0;
    std::vector<ShiftPattern> patterns;
    std::vector<Nurse> nurses;
    Demand demand;
};

/// Weekly-count feasibility of a pattern for a nurse: day patterns must cover
/// exactly the nurse's day-shift count, night patterns the night-shift count,
/// combined patterns the (optional) combined count.
inline bool matches_weekly_counts(const ShiftPattern& pattern, const Nurse& nurse) {
    switch (pattern.kind) {
        case PatternKind::Day: return pattern.day_count() == nurse.days_if_days;
        case PatternKind::Night: return pattern.night_count() == nurse.nights_if_nights;
        case PatternKind::Combined:
            return nurse.both_if_both && pattern.shift_count() == *nurse.both_if_both;
    }
    return false;
}

/// All invariant violations in the instance, empty when valid. Violations are
/// data, not errors; nothing throws.
inline std::vector<std::string> validate(const Instance& inst) {
    std::vector<std::string> out;
    const auto flag = [&out](std::string msg) { out.push_back(std::move(msg)); };

    if (inst.grades < 1) flag("grade count must be at least 1");
    if (inst.patterns.empty()) flag("pattern catalog is empty");
    if (inst.nurses.empty()) flag("no nurses");

    for (std::size_t t = 0; t < inst.patterns.size(); ++t) {
        const ShiftPattern& p = inst.patterns[t];
        const std::string name = "pattern " + std::to_string(p.id + 1);
        if (p.id != static_cast<int>(t))
            flag(name + ": id does not match its catalog position " + std::to_string(t + 1));
        if (p.shift_count() == 0) flag(name + ": covers no slot");
        const bool days = p.day_count() > 0, nights = p.night_count() > 0;
        const PatternKind derived =
            days && nights ? PatternKind::Combined : (days ? PatternKind::Day : PatternKind::Night);
        if (p.shift_count() > 0 && p.kind != derived) flag(name + ": kind does not match its cover vector");
    }

    if (inst.demand.grades != inst.grades)
        flag("demand matrix has " + std::to_string(inst.demand.grades) + " grade columns, instance has " +
             std::to_string(inst.grades));
    else
        for (int k = 0; k < kSlotCount; ++k)
            for (int s = 0; s < inst.grades; ++s)
                if (inst.demand.at(k, s) < 0)
                    flag("demand at slot " + std::to_string(k + 1) + ", grade " + std::to_string(s + 1) +
                         " is negative");

    const int m = static_cast<int>(inst.patterns.size());
    for (std::size_t i = 0; i < inst.nurses.size(); ++i) {
        const Nurse& nurse = inst.nurses[i];
        const std::string name = "nurse " + std::to_string(nurse.id + 1);
        if (nurse.id != static_cast<int>(i))
            flag(name + ": id does not match its position " + std::to_string(i + 1));
        if (nurse.grade < 0 || nurse.grade >= inst.grades) flag(name + ": grade out of range");
        if (nurse.days_if_days < 0 || nurse.days_if_days > kDayCount) flag(name + ": day-shift count out of range");
        if (nurse.nights_if_nights < 0 || nurse.nights_if_nights > kDayCount)
            flag(name + ": night-shift count out of range");
        if (nurse.both_if_both && (*nurse.both_if_both < 0 || *nurse.both_if_both > kSlotCount))
            flag(name + ": combined-shift count out of range");

        bool any_feasible = false;
        for (const auto& [pattern_id, cost] : nurse.preference_cost) {
            const std::string ref = name + ", pattern " + std::to_string(pattern_id + 1);
            if (pattern_id < 0 || pattern_id >= m) {
                flag(ref + ": preference cost references an unknown pattern");
                continue;
            }
            if (cost < 0 || cost > 100) flag(ref + ": preference cost " + std::to_string(cost) + " outside [0, 100]");
            if (!matches_weekly_counts(inst.patterns[pattern_id], nurse))
                flag(ref + ": preference cost listed for a pattern that does not match the nurse's weekly counts");
            else
                any_feasible = true;
        }
        if (!any_feasible) flag(name + ": empty feasible pattern set");
    }
    return out;
}

/// The nurse's feasible pattern ids, ascending. A pattern is feasible when it
/// matches the nurse's weekly counts and the nurse has a preference cost for
/// it (contract-violating patterns simply carry no cost entry).
inline std::vector<int> feasible_set(const Instance& inst, const Nurse& nurse) {
    std::vector<int> ids;
    for (const auto& [pattern_id, cost] : nurse.preference_cost) {
        if (pattern_id < 0 || pattern_id >= static_cast<int>(inst.patterns.size()))
            throw InputError("nurse " + std::to_string(nurse.id + 1) + ": preference cost references unknown pattern " +
                             std::to_string(pattern_id + 1));
        if (matches_weekly_counts(inst.patterns[pattern_id], nurse)) ids.push_back(pattern_id);
    }
    if (ids.empty())
        throw InputError("nurse " + std::to_string(nurse.id + 1) + " has an empty feasible pattern set");
    return ids;  // map iteration is already ascending
}

inline std::vector<std::vector<int>> all_feasible_sets(const Instance& inst) {
    std::vector<std::vector<int>> sets;
    sets.reserve(inst.nurses.size());
    for (const Nurse& nurse : inst.nurses) sets.push_back(feasible_set(inst, nurse));
    return sets;
}

/// Covered counts per (slot, grade) for a partial assignment, cumulative over
/// grades: entry (k, s) counts assigned nurses of grade s or higher covering
/// slot k. Unknown nurse or pattern ids are refused.
inline std::vector<int> coverage_of(const Instance& inst, const std::map<int, int>& assignment) {
    std::vector<int> covered(kSlotCount * inst.grades, 0);
    for (const auto& [nurse_id, pattern_id] : assignment) {
        if (nurse_id < 0 || nurse_id >= static_cast<int>(inst.nurses.size()))
            throw std::invalid_argument("coverage_of: unknown nurse " + std::to_string(nurse_id + 1));
        if (pattern_id < 0 || pattern_id >= static_cast<int>(inst.patterns.size()))
            throw std::invalid_argument("coverage_of: unknown pattern " + std::to_string(pattern_id + 1));
        const Nurse& nurse = inst.nurses[nurse_id];
        const ShiftPattern& pattern = inst.patterns[pattern_id];
        for (int k = 0; k < kSlotCount; ++k)
            if (pattern.covers[k])
                for (int s = nurse.grade; s < inst.grades; ++s) ++covered[k * inst.grades + s];
    }
    return covered;
}

// --- JSON instance files ------------------------------------------------
//
// {
//   "grades": 3,
//   "patterns": [{"id": 1, "covers": [14 x 0/1]}, ...],
//   "nurses":   [{"id": 1, "grade": 1, "days": 5, "nights": 4,
//                 "preferences": [{"pattern": 1, "cost": 10}, ...]}, ...],
//   "demand":   [14 rows x grades columns]
// }
//
// Ids and grades are 1-based on disk. The optional nurse key "both" carries
// the combined-contract shift count. Unknown keys are rejected.

namespace detail {

inline void require_keys(const nlohmann::json& obj, const std::set<std::string>& required,
                         const std::set<std::string>& optional, const std::string& where) {
    if (!obj.is_object()) throw InputError(where + ": expected an object");
    for (const auto& [key, value] : obj.items())
        if (!required.count(key) && !optional.count(key)) throw InputError(where + ": unknown key \"" + key + "\"");
    for (const std::string& key : required)
        if (!obj.contains(key)) throw InputError(where + ": missing key \"" + key + "\"");
}

inline int get_int(const nlohmann::json& obj, const std::string& key, const std::string& where) {
    const nlohmann::json& v = obj.at(key);
    if (!v.is_number_integer()) throw InputError(where + ": \"" + key + "\" must be an integer");
    return v.get<int>();
}

}  // namespace detail

inline Instance instance_from_json(const nlohmann::json& j) {
    detail::require_keys(j, {"grades", "patterns", "nurses", "demand"}, {}, "instance");
    Instance inst;
    inst.grades = detail::get_int(j, "grades", "instance");
    if (inst.grades < 1) throw InputError("instance: \"grades\" must be at least 1");

    const nlohmann::json& patterns = j.at("patterns");
    if (!patterns.is_array() || patterns.empty()) throw InputError("instance: \"patterns\" must be a non-empty array");
    const int m = static_cast<int>(patterns.size());
    inst.patterns.resize(m);
    std::vector<bool> seen_pattern(m, false);
    for (const nlohmann::json& pj : patterns) {
        detail::require_keys(pj, {"id", "covers"}, {}, "pattern");
        const int ext_id = detail::get_int(pj, "id", "pattern");
        if (ext_id < 1 || ext_id > m || seen_pattern[ext_id - 1])
            throw InputError("pattern ids must be exactly 1.." + std::to_string(m) + " with no repeats");
        seen_pattern[ext_id - 1] = true;
        const nlohmann::json& covers = pj.at("covers");
        if (!covers.is_array() || covers.size() != kSlotCount)
            throw InputError("pattern " + std::to_string(ext_id) + ": \"covers\" must have " +
                             std::to_string(kSlotCount) + " entries");
        std::array<std::uint8_t, kSlotCount> cover{};
        for (int k = 0; k < kSlotCount; ++k) {
            if (!covers[k].is_number_integer() || (covers[k] != 0 && covers[k] != 1))
                throw InputError("pattern " + std::to_string(ext_id) + ": cover entries must be 0 or 1");
            cover[k] = covers[k].get<int>() ? 1 : 0;
        }
        inst.patterns[ext_id - 1] = ShiftPattern::make(ext_id - 1, cover);
    }

    const nlohmann::json& nurses = j.at("nurses");
    if (!nurses.is_array() || nurses.empty()) throw InputError("instance: \"nurses\" must be a non-empty array");
    const int n = static_cast<int>(nurses.size());
    inst.nurses.resize(n);
    std::vector<bool> seen_nurse(n, false);
    for (const nlohmann::json& nj : nurses) {
        detail::require_keys(nj, {"id", "grade", "days", "nights", "preferences"}, {"both"}, "nurse");
        const int ext_id = detail::get_int(nj, "id", "nurse");
        if (ext_id < 1 || ext_id > n || seen_nurse[ext_id - 1])
            throw InputError("nurse ids must be exactly 1.." + std::to_string(n) + " with no repeats");
        seen_nurse[ext_id - 1] = true;
        const std::string where = "nurse " + std::to_string(ext_id);
        Nurse nurse;
        nurse.id = ext_id - 1;
        nurse.grade = detail::get_int(nj, "grade", where) - 1;
        nurse.days_if_days = detail::get_int(nj, "days", where);
        nurse.nights_if_nights = detail::get_int(nj, "nights", where);
        if (nj.contains("both")) nurse.both_if_both = detail::get_int(nj, "both", where);
        const nlohmann::json& prefs = nj.at("preferences");
        if (!prefs.is_array()) throw InputError(where + ": \"preferences\" must be an array");
        for (const nlohmann::json& pj : prefs) {
            detail::require_keys(pj, {"pattern", "cost"}, {}, where + " preference");
            const int pattern = detail::get_int(pj, "pattern", where);
            if (pattern < 1 || pattern > m) throw InputError(where + ": preference for unknown pattern");
            if (nurse.preference_cost.count(pattern - 1))
                throw InputError(where + ": duplicate preference for pattern " + std::to_string(pattern));
            nurse.preference_cost[pattern - 1] = detail::get_int(pj, "cost", where);
        }
        inst.nurses[ext_id - 1] = std::move(nurse);
    }

    const nlohmann::json& demand = j.at("demand");
    if (!demand.is_array() || demand.size() != kSlotCount)
        throw InputError("instance: \"demand\" must have " + std::to_string(kSlotCount) + " rows");
    inst.demand = Demand(inst.grades);
    for (int k = 0; k < kSlotCount; ++k) {
        const nlohmann::json& row = demand[k];
        if (!row.is_array() || static_cast<int>(row.size()) != inst.grades)
            throw InputError("demand row " + std::to_string(k + 1) + " must have " + std::to_string(inst.grades) +
                             " columns");
        for (int s = 0; s < inst.grades; ++s) {
            if (!row[s].is_number_integer())
                throw InputError("demand row " + std::to_string(k + 1) + ": entries must be integers");
            inst.demand.at(k, s) = row[s].get<int>();
        }
    }
    return inst;
}

inline nlohmann::json instance_to_json(const Instance& inst) {
    nlohmann::json j;
    j["grades"] = inst.grades;
    j["patterns"] = nlohmann::json::array();
    for (const ShiftPattern& p : inst.patterns) {
        nlohmann::json pj;
        pj["id"] = p.id + 1;
        pj["covers"] = nlohmann::json::array();
        for (int k = 0; k < kSlotCount; ++k) pj["covers"].push_back(static_cast<int>(p.covers[k]));
        j["patterns"].push_back(std::move(pj));
    }
    j["nurses"] = nlohmann::json::array();
    for (const Nurse& nurse : inst.nurses) {
        nlohmann::json nj;
        nj["id"] = nurse.id + 1;
        nj["grade"] = nurse.grade + 1;
        nj["days"] = nurse.days_if_days;
        nj["nights"] = nurse.nights_if_nights;
        if (nurse.both_if_both) nj["both"] = *nurse.both_if_both;
        nj["preferences"] = nlohmann::json::array();
        for (const auto& [pattern_id, cost] : nurse.preference_cost)
            nj["preferences"].push_back({{"pattern", pattern_id + 1}, {"cost", cost}});
        j["nurses"].push_back(std::move(nj));
    }
    j["demand"] = nlohmann::json::array();
    for (int k = 0; k < kSlotCount; ++k) {
        nlohmann::json row = nlohmann::json::array();
        for (int s = 0; s < inst.grades; ++s) row.push_back(inst.demand.at(k, s));
        j["demand"].push_back(std::move(row));
    }
    return j;
}

inline Instance load_instance(std::istream& in, const std::string& what = "instance") {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError(what + ": " + e.what());
    }
    return instance_from_json(j);
}

inline Instance load_instance_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open instance file: " + path);
    return load_instance(in, path);
}

inline void save_instance_file(const Instance& inst, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write instance file: " + path);
    out << instance_to_json(inst).dump(2) << '\n';
}

}  // namespace nsbo
