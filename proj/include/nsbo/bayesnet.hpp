// bayesnet.hpp -- chain-structured probability model over rule strings.
//
// Position 0 carries a marginal; every later position is conditioned on its
// left neighbour. Probabilities are learned by counting with optional
// Laplace smoothing; a never-seen parent with no smoothing gets a uniform
// row so sampling stays well defined.
#pragma once

#include <nsbo/rng.hpp>
#include <nsbo/rules.hpp>

#include <span>
#include <stdexcept>
#include <vector>

#include <json.hpp>

namespace nsbo {

struct ChainModel {
    int positions = 0;
    int n_rules = 0;
    double alpha = 0.0;
    std::vector<double> initial;                               // n_rules
    std::vector<std::vector<std::vector<double>>> transitions;  // (positions-1) x n_rules x n_rules
};

inline ChainModel learn(std::span<const RuleString> selected, int n_rules, double alpha = 0.0) {
    if (selected.empty()) throw std::invalid_argument("learn: empty selected set");
    if (n_rules < 1) throw std::invalid_argument("learn: need at least one rule");
    if (alpha < 0.0) throw std::invalid_argument("learn: smoothing must be non-negative");
    const int len = static_cast<int>(selected.front().size());
    if (len < 1) throw std::invalid_argument("learn: zero-length rule strings");
    for (const RuleString& s : selected) {
        if (static_cast<int>(s.size()) != len) throw std::invalid_argument("learn: inconsistent string lengths");
        for (RuleId r : s)
            if (static_cast<int>(r) >= n_rules) throw std::invalid_argument("learn: rule id out of range");
    }

    ChainModel model;
    model.positions = len;
    model.n_rules = n_rules;
    model.alpha = alpha;

    std::vector<double> first(n_rules, 0.0);
    for (const RuleString& s : selected) first[static_cast<int>(s[0])] += 1.0;
    const double denom0 = static_cast<double>(selected.size()) + alpha * n_rules;
    model.initial.resize(n_rules);
    for (int r = 0; r < n_rules; ++r) model.initial[r] = (first[r] + alpha) / denom0;

    model.transitions.assign(len - 1,
                             std::vector<std::vector<double>>(n_rules, std::vector<double>(n_rules, 0.0)));
    std::vector<double> pair_count(static_cast<std::size_t>(n_rules) * n_rules);
    std::vector<double> parent_count(n_rules);
    for (int t = 0; t + 1 < len; ++t) {
        std::fill(pair_count.begin(), pair_count.end(), 0.0);
        std::fill(parent_count.begin(), parent_count.end(), 0.0);
        for (const RuleString& s : selected) {
            const int p = static_cast<int>(s[t]), c = static_cast<int>(s[t + 1]);
            pair_count[p * n_rules + c] += 1.0;
            parent_count[p] += 1.0;
        }
        for (int p = 0; p < n_rules; ++p) {
            std::vector<double>& row = model.transitions[t][p];
            const double denom = parent_count[p] + alpha * n_rules;
            if (denom == 0.0)
                std::fill(row.begin(), row.end(), 1.0 / n_rules);
            else
                for (int c = 0; c < n_rules; ++c) row[c] = (pair_count[p * n_rules + c] + alpha) / denom;
        }
    }
    return model;
}

inline RuleString sample(const ChainModel& model, RandomStream& rng) {
    if (model.positions < 1) throw std::invalid_argument("sample: empty model");
    RuleString out(model.positions);
    std::size_t prev = rng.roulette(model.initial);
    out[0] = static_cast<RuleId>(prev);
    for (int t = 0; t + 1 < model.positions; ++t) {
        prev = rng.roulette(model.transitions[t][prev]);
        out[t + 1] = static_cast<RuleId>(prev);
    }
    return out;
}

inline double string_probability(const ChainModel& model, const RuleString& rules) {
    if (static_cast<int>(rules.size()) != model.positions)
        throw std::invalid_argument("string_probability: length mismatch");
    double p = model.initial.at(static_cast<int>(rules[0]));
    for (int t = 0; t + 1 < model.positions; ++t)
        p *= model.transitions[t][static_cast<int>(rules[t])][static_cast<int>(rules[t + 1])];
    return p;
}

/// Every position independent and uniform.
inline ChainModel uniform_chain(int positions, int n_rules) {
    if (positions < 1 || n_rules < 1) throw std::invalid_argument("uniform_chain: empty dimensions");
    ChainModel model;
    model.positions = positions;
    model.n_rules = n_rules;
    model.initial.assign(n_rules, 1.0 / n_rules);
    model.transitions.assign(positions - 1, std::vector<std::vector<double>>(
                                                n_rules, std::vector<double>(n_rules, 1.0 / n_rules)));
    return model;
}

/// Every position independent and uniform over a subset of the rules.
inline ChainModel support_chain(int positions, int n_rules, std::span<const RuleId> support) {
    if (positions < 1 || n_rules < 1) throw std::invalid_argument("support_chain: empty dimensions");
    if (support.empty()) throw std::invalid_argument("support_chain: empty support");
    std::vector<double> row(n_rules, 0.0);
    for (RuleId r : support) {
        if (static_cast<int>(r) >= n_rules) throw std::invalid_argument("support_chain: rule id out of range");
        row[static_cast<int>(r)] = 1.0 / support.size();
    }
    ChainModel model;
    model.positions = positions;
    model.n_rules = n_rules;
    model.initial = row;
    model.transitions.assign(positions - 1, std::vector<std::vector<double>>(n_rules, row));
    return model;
}

/// Degenerate model that always emits the same rule.
inline ChainModel constant_chain(int positions, int n_rules, RuleId rule) {
    if (positions < 1 || n_rules < 1) throw std::invalid_argument("constant_chain: empty dimensions");
    if (static_cast<int>(rule) >= n_rules) throw std::invalid_argument("constant_chain: rule id out of range");
    ChainModel model;
    model.positions = positions;
    model.n_rules = n_rules;
    model.initial.assign(n_rules, 0.0);
    model.initial[static_cast<int>(rule)] = 1.0;
    std::vector<std::vector<double>> step(n_rules, std::vector<double>(n_rules, 0.0));
    for (int p = 0; p < n_rules; ++p) step[p][static_cast<int>(rule)] = 1.0;
    model.transitions.assign(positions - 1, step);
    return model;
}

inline bool is_stochastic(const ChainModel& model, double tol = 1e-9) {
    const auto row_ok = [&](const std::vector<double>& row) {
        if (static_cast<int>(row.size()) != model.n_rules) return false;
        double sum = 0.0;
        for (double v : row) {
            if (v < 0.0) return false;
            sum += v;
        }
        return std::abs(sum - 1.0) <= tol;
    };
    if (model.positions < 1 || model.n_rules < 1) return false;
    if (!row_ok(model.initial)) return false;
    if (static_cast<int>(model.transitions.size()) != model.positions - 1) return false;
    for (const auto& step : model.transitions) {
        if (static_cast<int>(step.size()) != model.n_rules) return false;
        for (const auto& row : step)
            if (!row_ok(row)) return false;
    }
    return true;
}

inline nlohmann::json model_to_json(const ChainModel& model) {
    nlohmann::json j;
    j["initial"] = model.initial;
    j["transitions"] = model.transitions;
    return j;
}

}  // namespace nsbo
