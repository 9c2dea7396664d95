// rules.hpp -- the four pattern-choice rules and the rule-string decoder.
//
// A candidate solution is a rule string: one rule id per nurse. Decoding
// walks nurses in id order; each rule picks a pattern from that nurse's
// feasible set given the schedule built so far, so earlier choices steer
// later ones through the remaining open demand.
#pragma once

#include <nsbo/rng.hpp>
#include <nsbo/roster.hpp>

#include <algorithm>
#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace nsbo {

enum class RuleId : std::uint8_t { Random = 0, KCheapest = 1, Cover = 2, Contribution = 3 };
inline constexpr int kNumRules = 4;
using RuleString = std::vector<RuleId>;

inline const char* rule_name(RuleId rule) {
    switch (rule) {
        case RuleId::Random: return "random";
        case RuleId::KCheapest: return "cheapest";
        case RuleId::Cover: return "cover";
        case RuleId::Contribution: return "contribution";
    }
    return "?";
}

struct ContributionWeights {
    double pattern_cost = 1.0;                 // weight on (100 - preference cost)
    std::vector<double> grade = {8.0, 2.0, 1.0};  // per grade column, 1.0 past the end

    double grade_weight(int s) const { return s < static_cast<int>(grade.size()) ? grade[s] : 1.0; }
};

struct DecodeParams {
    int k_cheapest = 5;
    ContributionWeights weights;
    double demand_penalty = 200.0;
};

/// Immutable per-instance tables the rules work from.
struct DecodeContext {
    const Instance* inst = nullptr;
    std::vector<std::vector<int>> feasible;   // nurse -> pattern ids, ascending
    std::vector<std::vector<int>> by_cost;    // nurse -> pattern ids by (cost, id)
    std::vector<std::vector<int>> cost;       // nurse x pattern, -1 where unavailable
    std::vector<std::uint16_t> pattern_mask;  // bit k set iff the pattern covers slot k
};

inline DecodeContext make_context(const Instance& inst) {
    DecodeContext ctx;
    ctx.inst = &inst;
    const int m = static_cast<int>(inst.patterns.size());
    ctx.pattern_mask.reserve(m);
    for (const ShiftPattern& p : inst.patterns) ctx.pattern_mask.push_back(p.mask());
    ctx.feasible.reserve(inst.nurses.size());
    ctx.by_cost.reserve(inst.nurses.size());
    ctx.cost.reserve(inst.nurses.size());
    for (const Nurse& nurse : inst.nurses) {
        std::vector<int> ids = feasible_set(inst, nurse);
        std::vector<int> costs(m, -1);
        for (int j : ids) costs[j] = nurse.preference_cost.at(j);
        std::vector<int> order = ids;  // ascending, so a stable sort keeps (cost, id) order
        std::stable_sort(order.begin(), order.end(), [&costs](int a, int b) { return costs[a] < costs[b]; });
        ctx.feasible.push_back(std::move(ids));
        ctx.by_cost.push_back(std::move(order));
        ctx.cost.push_back(std::move(costs));
    }
    return ctx;
}

/// Partially built schedule: the running demand residual (positive = still
/// undercovered) plus per-decode scratch so rule application never allocates.
struct BuildState {
    const DecodeContext* ctx;
    std::vector<int> residual;  // slot-major, R(k, s) minus graded cover so far
    std::vector<int> assignment;
    int total_preference = 0;
    int assigned = 0;
    std::vector<int> winners_scratch;
    std::vector<std::uint16_t> open_scratch;

    explicit BuildState(const DecodeContext& context)
        : ctx(&context),
          residual(context.inst->demand.required.begin(), context.inst->demand.required.end()),
          assignment(context.inst->nurses.size(), -1),
          open_scratch(context.inst->grades, 0) {
        winners_scratch.reserve(context.inst->patterns.size());
    }

    int residual_at(int slot, int grade) const { return residual[slot * ctx->inst->grades + grade]; }

    void assign(int nurse, int pattern) {
        if (assignment[nurse] != -1) throw std::logic_error("BuildState: nurse assigned twice");
        const Instance& inst = *ctx->inst;
        const int grade = inst.nurses[nurse].grade;
        const ShiftPattern& p = inst.patterns[pattern];
        for (int k = 0; k < kSlotCount; ++k)
            if (p.covers[k])
                for (int s = grade; s < inst.grades; ++s) --residual[k * inst.grades + s];
        total_preference += ctx->cost[nurse][pattern];
        assignment[nurse] = pattern;
        ++assigned;
    }
};

inline int apply_random(const BuildState& st, int nurse, RandomStream& rng) {
    const std::vector<int>& ids = st.ctx->feasible[nurse];
    return ids[rng.pick(ids.size())];
}

inline int apply_k_cheapest(const BuildState& st, int nurse, int k, RandomStream& rng) {
    if (k < 1) throw std::invalid_argument("k-cheapest: k must be at least 1");
    const std::vector<int>& order = st.ctx->by_cost[nurse];
    return order[rng.pick(std::min<std::size_t>(k, order.size()))];
}

/// The grade column the cover rule reads for this nurse: the most senior band
/// the nurse counts toward that still has open demand, or -1 when none does.
inline int cover_target(const BuildState& st, int nurse) {
    const Instance& inst = *st.ctx->inst;
    for (int s = inst.nurses[nurse].grade; s < inst.grades; ++s)
        for (int k = 0; k < kSlotCount; ++k)
            if (st.residual_at(k, s) > 0) return s;
    return -1;
}

/// The largest open gap in the target column among the slots the pattern
/// covers; 0 when every relevant demand is already met.
inline int cover_value(const BuildState& st, int nurse, int pattern) {
    const int target = cover_target(st, nurse);
    if (target < 0) return 0;
    const ShiftPattern& p = st.ctx->inst->patterns[pattern];
    int best = 0;
    for (int k = 0; k < kSlotCount; ++k)
        if (p.covers[k]) best = std::max(best, st.residual_at(k, target));
    return best;
}

inline int apply_cover(BuildState& st, int nurse, RandomStream& rng) {
    const int target = cover_target(st, nurse);
    std::vector<int>& winners = st.winners_scratch;
    winners.clear();
    int best = -1;
    for (int j : st.ctx->feasible[nurse]) {
        int v = 0;
        if (target >= 0) {
            const ShiftPattern& p = st.ctx->inst->patterns[j];
            for (int k = 0; k < kSlotCount; ++k)
                if (p.covers[k]) v = std::max(v, st.residual_at(k, target));
        }
        if (v > best) {
            best = v;
            winners.clear();
        }
        if (v == best) winners.push_back(j);
    }
    return winners[rng.pick(winners.size())];
}

/// How much the pattern helps: the discounted preference cost plus, per grade
/// column the nurse counts toward, the weighted number of covered slots whose
/// demand is still open.
inline double contribution_score(const BuildState& st, int nurse, int pattern, const ContributionWeights& w) {
    const Instance& inst = *st.ctx->inst;
    const Nurse& nu = inst.nurses[nurse];
    double score = w.pattern_cost * (100.0 - st.ctx->cost[nurse][pattern]);
    const ShiftPattern& p = inst.patterns[pattern];
    for (int s = nu.grade; s < inst.grades; ++s) {
        int covered_open = 0;
        for (int k = 0; k < kSlotCount; ++k)
            if (p.covers[k] && st.residual_at(k, s) > 0) ++covered_open;
        score += w.grade_weight(s) * covered_open;
    }
    return score;
}

/// Highest contribution score wins; ties go to the smallest pattern id. Fully
/// deterministic, no draw.
inline int apply_contribution(BuildState& st, int nurse, const ContributionWeights& w) {
    const Instance& inst = *st.ctx->inst;
    const int grade = inst.nurses[nurse].grade;
    std::vector<std::uint16_t>& open = st.open_scratch;
    for (int s = grade; s < inst.grades; ++s) {
        std::uint16_t mask = 0;
        for (int k = 0; k < kSlotCount; ++k)
            if (st.residual_at(k, s) > 0) mask |= static_cast<std::uint16_t>(1u << k);
        open[s] = mask;
    }
    int best_id = -1;
    double best_score = 0.0;
    for (int j : st.ctx->feasible[nurse]) {
        double score = w.pattern_cost * (100.0 - st.ctx->cost[nurse][j]);
        for (int s = grade; s < inst.grades; ++s)
            score += w.grade_weight(s) *
                     std::popcount(static_cast<std::uint16_t>(st.ctx->pattern_mask[j] & open[s]));
        if (best_id < 0 || score > best_score) {
            best_score = score;
            best_id = j;
        }
    }
    return best_id;
}

inline int apply_rule(BuildState& st, int nurse, RuleId rule, const DecodeParams& params, RandomStream& rng) {
    switch (rule) {
        case RuleId::Random: return apply_random(st, nurse, rng);
        case RuleId::KCheapest: return apply_k_cheapest(st, nurse, params.k_cheapest, rng);
        case RuleId::Cover: return apply_cover(st, nurse, rng);
        case RuleId::Contribution: return apply_contribution(st, nurse, params.weights);
    }
    throw std::invalid_argument("unknown rule id " + std::to_string(static_cast<int>(rule)));
}

inline Roster decode(const DecodeContext& ctx, const RuleString& rules, const DecodeParams& params,
                     RandomStream& rng) {
    const int n = static_cast<int>(ctx.inst->nurses.size());
    if (static_cast<int>(rules.size()) != n)
        throw std::invalid_argument("decode: rule string length must equal the nurse count");
    BuildState st(ctx);
    for (int i = 0; i < n; ++i) st.assign(i, apply_rule(st, i, rules[i], params, rng));

    Roster r;
    r.assignment = std::move(st.assignment);
    r.total_preference = st.total_preference;
    for (int v : st.residual) r.undercover_units += std::max(0, v);
    r.fitness = r.total_preference + params.demand_penalty * r.undercover_units;
    r.feasible = r.undercover_units == 0;
    return r;
}

inline Roster decode(const Instance& inst, const RuleString& rules, const DecodeParams& params, RandomStream& rng) {
    const DecodeContext ctx = make_context(inst);
    return decode(ctx, rules, params, rng);
}

}  // namespace nsbo
