// generator.hpp -- synthetic problem instances from a compact recipe.
//
// The catalog holds every day pattern for the requested day-shift counts and
// every night pattern for the night-shift counts (counts ascending, slot
// combinations in lexicographic order), plus an optional sampled set of
// combined patterns. Each nurse gets weekly counts drawn from those same
// pools, a preference cost for everything her counts allow, and the demand
// matrix is scaled supply: expected cover per grade column, split between
// days and nights, times the tightness knob.
#pragma once

#include <nsbo/instance.hpp>
#include <nsbo/rng.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace nsbo {

enum class CostProfile { Mixed, Uniform };

inline const char* cost_profile_name(CostProfile p) {
    return p == CostProfile::Mixed ? "mixed" : "uniform";
}

inline CostProfile parse_cost_profile(const std::string& text) {
    if (text == "mixed") return CostProfile::Mixed;
    if (text == "uniform") return CostProfile::Uniform;
    throw std::invalid_argument("unknown cost profile \"" + text + "\" (expected mixed or uniform)");
}

struct GenSpec {
    int n_nurses = 30;
    int grades = 3;
    double day_fraction = 0.5;  // share of expected supply placed on day slots
    std::vector<int> day_shift_counts = {4, 5};
    std::vector<int> night_shift_counts = {3, 4};
    double demand_tightness = 1.0;  // demand = tightness x expected supply
    CostProfile cost_profile = CostProfile::Mixed;
    std::uint64_t seed = 1;
    double both_fraction = 0.0;  // share of nurses with a combined contract
    std::vector<int> both_shift_counts;
    int combined_catalog_cap = 40;
};

inline void validate_spec(const GenSpec& spec) {
    const auto refuse = [](const std::string& what) { throw std::invalid_argument("generator: " + what); };
    if (spec.n_nurses < 1) refuse("need at least one nurse");
    if (spec.grades < 1) refuse("need at least one grade");
    if (spec.day_fraction < 0.0 || spec.day_fraction > 1.0) refuse("day fraction outside [0, 1]");
    if (spec.both_fraction < 0.0 || spec.both_fraction > 1.0) refuse("both fraction outside [0, 1]");
    if (spec.demand_tightness < 0.0) refuse("tightness must be non-negative");
    if (spec.day_shift_counts.empty()) refuse("no day shift counts");
    if (spec.night_shift_counts.empty()) refuse("no night shift counts");
    for (int c : spec.day_shift_counts)
        if (c < 1 || c > kDayCount) refuse("day shift count outside [1, 7]");
    for (int c : spec.night_shift_counts)
        if (c < 1 || c > kDayCount) refuse("night shift count outside [1, 7]");
    for (int c : spec.both_shift_counts)
        if (c < 2 || c > kSlotCount) refuse("combined shift count outside [2, 14]");
    if (spec.both_fraction > 0.0 && spec.both_shift_counts.empty())
        refuse("combined contracts need combined shift counts");
    if (!spec.both_shift_counts.empty() && spec.combined_catalog_cap < 1)
        refuse("combined catalog cap must be at least 1");
}

namespace gen_detail {

inline std::vector<int> sorted_unique(std::vector<int> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

/// All size-c subsets of {0..6}, lexicographic.
inline std::vector<std::vector<int>> combinations(int c) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur(c);
    for (int i = 0; i < c; ++i) cur[i] = i;
    while (true) {
        out.push_back(cur);
        int i = c - 1;
        while (i >= 0 && cur[i] == kDayCount - c + i) --i;
        if (i < 0) break;
        ++cur[i];
        for (int j = i + 1; j < c; ++j) cur[j] = cur[j - 1] + 1;
    }
    return out;
}

/// c distinct values from {0..6} by partial shuffle.
inline std::vector<int> random_slots(int c, RandomStream& rng) {
    std::array<int, kDayCount> deck = {0, 1, 2, 3, 4, 5, 6};
    for (int i = 0; i < c; ++i)
        std::swap(deck[i], deck[i + rng.pick(kDayCount - i)]);
    return std::vector<int>(deck.begin(), deck.begin() + c);
}

inline int draw_cost(CostProfile profile, RandomStream& rng) {
    if (profile == CostProfile::Uniform) return static_cast<int>(rng.pick(101));
    const double u = rng.next_unit();
    if (u < 0.70) return static_cast<int>(rng.pick(16));        // favourites
    if (u < 0.95) return 16 + static_cast<int>(rng.pick(45));   // tolerable
    return 61 + static_cast<int>(rng.pick(40));                 // avoided
}

}  // namespace gen_detail

inline Instance generate(const GenSpec& spec) {
    validate_spec(spec);
    RandomStream rng(derive_seed(spec.seed, 0x67656e));

    Instance inst;
    inst.grades = spec.grades;

    // catalog: days, then nights, then sampled combined patterns
    for (int c : gen_detail::sorted_unique(spec.day_shift_counts))
        for (const std::vector<int>& combo : gen_detail::combinations(c)) {
            std::array<std::uint8_t, kSlotCount> covers{};
            for (int k : combo) covers[k] = 1;
            inst.patterns.push_back(ShiftPattern::make(static_cast<int>(inst.patterns.size()), covers));
        }
    for (int c : gen_detail::sorted_unique(spec.night_shift_counts))
        for (const std::vector<int>& combo : gen_detail::combinations(c)) {
            std::array<std::uint8_t, kSlotCount> covers{};
            for (int k : combo) covers[kDayCount + k] = 1;
            inst.patterns.push_back(ShiftPattern::make(static_cast<int>(inst.patterns.size()), covers));
        }
    if (spec.both_fraction > 0.0 && !spec.both_shift_counts.empty()) {
        const std::vector<int> counts = gen_detail::sorted_unique(spec.both_shift_counts);
        std::set<std::uint32_t> seen;
        int attempts = 0;
        while (static_cast<int>(seen.size()) < spec.combined_catalog_cap &&
               attempts < spec.combined_catalog_cap * 20) {
            ++attempts;
            const int b = counts[rng.pick(counts.size())];
            const int d_lo = std::max(1, b - kDayCount), d_hi = std::min(kDayCount, b - 1);
            const int d = d_lo + static_cast<int>(rng.pick(d_hi - d_lo + 1));
            std::array<std::uint8_t, kSlotCount> covers{};
            for (int k : gen_detail::random_slots(d, rng)) covers[k] = 1;
            for (int k : gen_detail::random_slots(b - d, rng)) covers[kDayCount + k] = 1;
            std::uint32_t mask = 0;
            for (int k = 0; k < kSlotCount; ++k)
                if (covers[k]) mask |= 1u << k;
            if (!seen.insert(mask).second) continue;
            inst.patterns.push_back(ShiftPattern::make(static_cast<int>(inst.patterns.size()), covers));
        }
    }

    // nurses: grade, weekly counts, an optional combined contract, then costs
    for (int i = 0; i < spec.n_nurses; ++i) {
        Nurse nurse;
        nurse.id = i;
        nurse.grade = static_cast<int>(rng.pick(spec.grades));
        nurse.days_if_days = spec.day_shift_counts[rng.pick(spec.day_shift_counts.size())];
        nurse.nights_if_nights = spec.night_shift_counts[rng.pick(spec.night_shift_counts.size())];
        const double u = rng.next_unit();
        if (!spec.both_shift_counts.empty() && u < spec.both_fraction)
            nurse.both_if_both = spec.both_shift_counts[rng.pick(spec.both_shift_counts.size())];
        for (const ShiftPattern& p : inst.patterns)
            if (matches_weekly_counts(p, nurse))
                nurse.preference_cost[p.id] = gen_detail::draw_cost(spec.cost_profile, rng);
        inst.nurses.push_back(std::move(nurse));
    }

    // demand: cumulative expected supply per grade column, scaled and
    // scattered; columns are built as increments so R(k, s) never decreases
    // in s.
    std::vector<double> day_supply(spec.grades, 0.0), night_supply(spec.grades, 0.0);
    for (const Nurse& nurse : inst.nurses) {
        const double day = nurse.both_if_both ? *nurse.both_if_both / 2.0 : spec.day_fraction * nurse.days_if_days;
        const double night =
            nurse.both_if_both ? *nurse.both_if_both / 2.0 : (1.0 - spec.day_fraction) * nurse.nights_if_nights;
        for (int s = nurse.grade; s < spec.grades; ++s) {
            day_supply[s] += day;
            night_supply[s] += night;
        }
    }
    inst.demand = Demand(spec.grades);
    const auto scatter = [&](const std::vector<double>& supply, int slot_base) {
        long long prev_target = 0;
        for (int s = 0; s < spec.grades; ++s) {
            const long long target =
                std::max(prev_target, std::llround(spec.demand_tightness * supply[s]));
            for (long long u = 0; u < target - prev_target; ++u)
                ++inst.demand.at(slot_base + static_cast<int>(rng.pick(kDayCount)), s);
            for (int d = 0; d < kDayCount; ++d)
                if (s > 0) inst.demand.at(slot_base + d, s) += inst.demand.at(slot_base + d, s - 1);
            prev_target = target;
        }
    };
    scatter(day_supply, 0);
    scatter(night_supply, kDayCount);

    return inst;
}

inline nlohmann::json spec_to_json(const GenSpec& spec) {
    nlohmann::json j;
    j["nurses"] = spec.n_nurses;
    j["grades"] = spec.grades;
    j["day_fraction"] = spec.day_fraction;
    j["day_shift_counts"] = spec.day_shift_counts;
    j["night_shift_counts"] = spec.night_shift_counts;
    j["tightness"] = spec.demand_tightness;
    j["cost_profile"] = cost_profile_name(spec.cost_profile);
    j["seed"] = spec.seed;
    j["both_fraction"] = spec.both_fraction;
    j["both_shift_counts"] = spec.both_shift_counts;
    j["combined_catalog_cap"] = spec.combined_catalog_cap;
    return j;
}

inline GenSpec spec_from_json(const nlohmann::json& j) {
    static const std::set<std::string> known = {
        "nurses",        "grades", "day_fraction",  "day_shift_counts",  "night_shift_counts",
        "tightness",     "cost_profile", "seed",    "both_fraction",     "both_shift_counts",
        "combined_catalog_cap"};
    if (!j.is_object()) throw InputError("generator spec: expected an object");
    for (const auto& [key, value] : j.items())
        if (!known.count(key)) throw InputError("generator spec: unknown key \"" + key + "\"");

    GenSpec spec;
    try {
        if (j.contains("nurses")) spec.n_nurses = j.at("nurses").get<int>();
        if (j.contains("grades")) spec.grades = j.at("grades").get<int>();
        if (j.contains("day_fraction")) spec.day_fraction = j.at("day_fraction").get<double>();
        if (j.contains("day_shift_counts")) spec.day_shift_counts = j.at("day_shift_counts").get<std::vector<int>>();
        if (j.contains("night_shift_counts"))
            spec.night_shift_counts = j.at("night_shift_counts").get<std::vector<int>>();
        if (j.contains("tightness")) spec.demand_tightness = j.at("tightness").get<double>();
        if (j.contains("cost_profile")) spec.cost_profile = parse_cost_profile(j.at("cost_profile").get<std::string>());
        if (j.contains("seed")) spec.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("both_fraction")) spec.both_fraction = j.at("both_fraction").get<double>();
        if (j.contains("both_shift_counts"))
            spec.both_shift_counts = j.at("both_shift_counts").get<std::vector<int>>();
        if (j.contains("combined_catalog_cap")) spec.combined_catalog_cap = j.at("combined_catalog_cap").get<int>();
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("generator spec: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw InputError(std::string("generator spec: ") + e.what());
    }
    return spec;
}

}  // namespace nsbo
