#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "jumpsynth/analysis.hpp"
#include "jumpsynth/errors.hpp"
#include "jumpsynth/schedule.hpp"
#include "jumpsynth/system_model.hpp"
#include "jumpsynth/wasserstein.hpp"

namespace jumpsynth {

enum class Strategy { receding_horizon, pointwise, infinite_horizon, exact_tree };

inline const char* to_string(Strategy s) {
    switch (s) {
        case Strategy::receding_horizon: return "receding_horizon";
        case Strategy::pointwise: return "pointwise";
        case Strategy::infinite_horizon: return "infinite_horizon";
        case Strategy::exact_tree: return "exact_tree";
    }
    return "unknown";
}

/**
 * @brief Synthesis parameters.
 *
 * horizon_T is the lookahead over which a candidate mode is held constant when
 * its cost is evaluated. Decisions recur every max(1, horizon_T / 2) steps, so
 * the lookahead covers the interval from the previous to the next jump time
 * (the update-interval bound T >= t_{j+1} - t_{j-1}). When no mode satisfies
 * the decrease constraint, the decision's span is extended one step at a time,
 * up to max_horizon_growth extra steps, with the lookahead stretched to match.
 */
struct SynthesisConfig {
    int horizon_T = 5;
    double dk = 1.0;
    double epsilon_gamma = 0.01; ///< constraint margin: eps(t_j) = gamma * W^2(t_{j-1})
    int max_horizon_growth = 30;
    int total_steps = 60;
    Strategy strategy = Strategy::receding_horizon;
};

/// One receding-horizon (or pointwise) decision, as logged.
struct DecisionRecord {
    int jump_time = 0;
    int chosen_mode = 0;             ///< 0-based
    std::vector<double> mode_costs;  ///< per-mode horizon cost at the accepted horizon
    std::vector<char> mode_feasible; ///< per-mode constraint outcome (1 = satisfied)
    bool constraint_active = false;  ///< false at the first decision (no t_{j-1})
    int span = 0;                    ///< steps the chosen mode is held (t_{j+1} - t_j)
    int lookahead = 0;               ///< steps predicted when costing this decision
    double w2_at_decision = 0.0;     ///< realized W^2(t_j)
    double w2_reference = 0.0;       ///< realized W^2(t_{j-1}); NaN at the first decision
    double w2_predicted_next = 0.0;  ///< predicted W^2(t_{j+1}) under the chosen mode
};

struct SynthesisReport {
    Strategy strategy = Strategy::receding_horizon;
    SwitchingSchedule schedule;
    W2Trace trace;
    std::map<int, double> per_mode_areas; ///< 0-based mode -> constant-schedule area
    std::vector<DecisionRecord> constraint_log;
    bool tail_converged = true; ///< infinite-horizon truncation accepted
};

/// Constraint unsatisfiable even at maximum horizon extension.
class SynthesisError : public Error {
public:
    SynthesisError(const std::string& what, SynthesisReport partial)
        : Error(what), partial_report(std::move(partial)) {}
    SynthesisReport partial_report;
};

namespace detail {

inline void check_synthesis_inputs(const JumpSystem& system, const GaussianBelief& initial,
                                   const SynthesisConfig& config) {
    if (initial.dim() != system.n)
        throw ConfigError("synthesis: belief dimension " + std::to_string(initial.dim()) +
                          " does not match state dimension " + std::to_string(system.n));
    if (config.dk <= 0.0) throw InputError("synthesis: sampling interval dk must be positive");
    if (config.total_steps < 0) throw InputError("synthesis: negative total_steps");
    if (config.epsilon_gamma <= 0.0 || config.epsilon_gamma >= 1.0)
        throw InputError("synthesis: epsilon_gamma must lie in (0, 1)");
    if (config.max_horizon_growth < 0)
        throw InputError("synthesis: negative max_horizon_growth");
}

/// Constant-mode areas over total_steps, dk-weighted, plus final W^2 per mode.
inline std::map<int, double> constant_mode_areas(const JumpSystem& system,
                                                 const GaussianBelief& initial, int total_steps,
                                                 double dk, std::vector<double>* final_w2 = nullptr) {
    std::map<int, double> areas;
    if (final_w2) final_w2->assign(static_cast<std::size_t>(system.m), 0.0);
    for (int i = 0; i < system.m; ++i) {
        Eigen::VectorXd mu = initial.mu;
        Eigen::MatrixXd sigma = initial.sigma;
        double sum = w2_raw(mu, sigma);
        for (int k = 0; k < total_steps; ++k) {
            propagate_raw(mu, sigma, system.mode(i));
            sum += w2_raw(mu, sigma);
        }
        areas[i] = dk * sum;
        if (final_w2) (*final_w2)[static_cast<std::size_t>(i)] = w2_raw(mu, sigma);
    }
    return areas;
}

inline SynthesisReport finish_report(Strategy strategy, const JumpSystem& system,
                                     const GaussianBelief& initial, const SynthesisConfig& config,
                                     SwitchingSchedule schedule, std::vector<DecisionRecord> log,
                                     int realized_steps) {
    SynthesisReport report;
    report.strategy = strategy;
    report.schedule = std::move(schedule);
    report.trace = w2_trajectory(system, initial, report.schedule, realized_steps, config.dk);
    report.per_mode_areas = constant_mode_areas(system, initial, realized_steps, config.dk);
    report.constraint_log = std::move(log);
    return report;
}

} // namespace detail

/**
 * @brief Receding-horizon optimal switching with the piecewise decrease
 * constraint W^2(t_{j+1}) - W^2(t_{j-1}) <= -gamma W^2(t_{j-1}).
 *
 * At each jump time every mode's cost sum_{k=t_j}^{t_j+L} W^2(k) dk is
 * evaluated with the mode held constant over the lookahead L; the cheapest
 * feasible mode wins (ties toward the lower index) and is applied until the
 * next jump time. The constraint is waived at the first decision. If no mode
 * is feasible the decision's span grows one step at a time, up to
 * max_horizon_growth extra steps; exhaustion raises SynthesisError carrying
 * the partial report.
 */
inline SynthesisReport synthesize_receding_horizon(const JumpSystem& system,
                                                   const GaussianBelief& initial,
                                                   const SynthesisConfig& config) {
    detail::check_synthesis_inputs(system, initial, config);
    if (config.horizon_T < 1) throw InputError("synthesis: horizon_T must be at least 1");
    require_all_schur(system);

    const int total = config.total_steps;
    const double gamma = config.epsilon_gamma;
    const int span_base = std::max(1, config.horizon_T / 2);

    Eigen::VectorXd mu = initial.mu;
    Eigen::MatrixXd sigma = initial.sigma;
    std::vector<int> realized_modes;
    realized_modes.reserve(static_cast<std::size_t>(total));
    std::vector<DecisionRecord> log;
    double w2_prev_jump = std::numeric_limits<double>::quiet_NaN();
    int prev_span = 0;
    int t = 0;

    while (t < total) {
        const bool first_decision = log.empty();
        int chosen = -1;
        int chosen_span = 0;
        int chosen_look = 0;
        std::vector<double> costs;
        std::vector<char> feasible;
        std::vector<double> end_w2;

        for (int growth = 0; growth <= config.max_horizon_growth; ++growth) {
            const int span = span_base + growth;
            const int look = std::max(config.horizon_T + growth, prev_span + span);
            costs.assign(static_cast<std::size_t>(system.m), 0.0);
            feasible.assign(static_cast<std::size_t>(system.m), 0);
            end_w2.assign(static_cast<std::size_t>(system.m), 0.0);
            bool any_feasible = false;
            for (int i = 0; i < system.m; ++i) {
                Eigen::VectorXd m2 = mu;
                Eigen::MatrixXd s2 = sigma;
                double cost = detail::w2_raw(m2, s2) * config.dk;
                double w2_at_span = detail::w2_raw(m2, s2);
                for (int s = 1; s <= look; ++s) {
                    detail::propagate_raw(m2, s2, system.mode(i));
                    cost += detail::w2_raw(m2, s2) * config.dk;
                    if (s == span) w2_at_span = detail::w2_raw(m2, s2);
                }
                costs[static_cast<std::size_t>(i)] = cost;
                end_w2[static_cast<std::size_t>(i)] = w2_at_span;
                const bool ok =
                    first_decision || (w2_at_span - w2_prev_jump <= -gamma * w2_prev_jump);
                feasible[static_cast<std::size_t>(i)] = ok ? 1 : 0;
                any_feasible = any_feasible || ok;
            }
            if (any_feasible) {
                for (int i = 0; i < system.m; ++i) {
                    if (!feasible[static_cast<std::size_t>(i)]) continue;
                    if (chosen < 0 || costs[static_cast<std::size_t>(i)] <
                                          costs[static_cast<std::size_t>(chosen)])
                        chosen = i;
                }
                chosen_span = span;
                chosen_look = look;
                break;
            }
        }

        if (chosen < 0) {
            SwitchingSchedule partial = SwitchingSchedule::from_step_modes(realized_modes);
            auto report = detail::finish_report(Strategy::receding_horizon, system, initial, config,
                                                std::move(partial), std::move(log), t);
            throw SynthesisError(
                "synthesis: no mode satisfies the decrease constraint at step " + std::to_string(t) +
                    " even with the horizon extended by " + std::to_string(config.max_horizon_growth) +
                    " steps",
                std::move(report));
        }

        DecisionRecord rec;
        rec.jump_time = t;
        rec.chosen_mode = chosen;
        rec.mode_costs = costs;
        rec.mode_feasible = feasible;
        rec.constraint_active = !first_decision;
        rec.span = chosen_span;
        rec.lookahead = chosen_look;
        rec.w2_at_decision = detail::w2_raw(mu, sigma);
        rec.w2_reference = w2_prev_jump;
        rec.w2_predicted_next = end_w2[static_cast<std::size_t>(chosen)];
        log.push_back(std::move(rec));

        w2_prev_jump = detail::w2_raw(mu, sigma);
        prev_span = chosen_span;
        const int applied = std::min(chosen_span, total - t);
        for (int s = 0; s < applied; ++s) {
            detail::propagate_raw(mu, sigma, system.mode(chosen));
            realized_modes.push_back(chosen);
        }
        t += applied;
    }

    return detail::finish_report(Strategy::receding_horizon, system, initial, config,
                                 SwitchingSchedule::from_step_modes(realized_modes), std::move(log),
                                 total);
}

/**
 * @brief T = 0 baseline: at every step pick the mode minimizing the
 * one-step-ahead W^2 (no decrease constraint, no lookahead).
 */
inline SynthesisReport synthesize_pointwise(const JumpSystem& system, const GaussianBelief& initial,
                                            const SynthesisConfig& config) {
    detail::check_synthesis_inputs(system, initial, config);
    require_all_schur(system);

    Eigen::VectorXd mu = initial.mu;
    Eigen::MatrixXd sigma = initial.sigma;
    std::vector<int> realized_modes;
    realized_modes.reserve(static_cast<std::size_t>(config.total_steps));
    std::vector<DecisionRecord> log;

    for (int k = 0; k < config.total_steps; ++k) {
        std::vector<double> costs(static_cast<std::size_t>(system.m), 0.0);
        int best = 0;
        for (int i = 0; i < system.m; ++i) {
            Eigen::VectorXd m2 = mu;
            Eigen::MatrixXd s2 = sigma;
            detail::propagate_raw(m2, s2, system.mode(i));
            costs[static_cast<std::size_t>(i)] = detail::w2_raw(m2, s2) * config.dk;
            if (costs[static_cast<std::size_t>(i)] < costs[static_cast<std::size_t>(best)]) best = i;
        }
        DecisionRecord rec;
        rec.jump_time = k;
        rec.chosen_mode = best;
        rec.mode_costs = costs;
        rec.mode_feasible.assign(static_cast<std::size_t>(system.m), 1);
        rec.constraint_active = false;
        rec.span = 1;
        rec.lookahead = 1;
        rec.w2_at_decision = detail::w2_raw(mu, sigma);
        rec.w2_reference = std::numeric_limits<double>::quiet_NaN();
        detail::propagate_raw(mu, sigma, system.mode(best));
        rec.w2_predicted_next = detail::w2_raw(mu, sigma);
        log.push_back(std::move(rec));
        realized_modes.push_back(best);
    }

    return detail::finish_report(Strategy::pointwise, system, initial, config,
                                 SwitchingSchedule::from_step_modes(realized_modes), std::move(log),
                                 config.total_steps);
}

/**
 * @brief T = infinity baseline: the constant schedule whose truncated area over
 * total_steps is minimal. The truncation is flagged unconverged when the
 * selected mode's final W^2 is not below 1e-9 * W^2(0).
 */
inline SynthesisReport synthesize_infinite_horizon(const JumpSystem& system,
                                                   const GaussianBelief& initial,
                                                   const SynthesisConfig& config) {
    detail::check_synthesis_inputs(system, initial, config);
    require_all_schur(system);

    std::vector<double> final_w2;
    auto areas = detail::constant_mode_areas(system, initial, config.total_steps, config.dk, &final_w2);
    int best = 0;
    for (int i = 1; i < system.m; ++i)
        if (areas[i] < areas[best]) best = i;

    SynthesisReport report =
        detail::finish_report(Strategy::infinite_horizon, system, initial, config,
                              SwitchingSchedule::constant(best, config.total_steps), {},
                              config.total_steps);
    const double w2_0 = w2_gaussian_dirac(initial);
    report.tail_converged =
        w2_0 == 0.0 || final_w2[static_cast<std::size_t>(best)] < 1e-9 * w2_0;
    return report;
}

/**
 * @brief Exhaustive tree search over all m^steps mode sequences (switching
 * allowed every step), minimizing sum_{k=0}^{steps} W^2(k) dk. Ties resolve to
 * the lexicographically smallest sequence. Capped at steps * log2(m) <= 24.
 */
inline SynthesisReport solve_exact_tree(const JumpSystem& system, const GaussianBelief& initial,
                                        int steps, double dk) {
    if (steps < 0) throw InputError("exact tree: negative step count");
    if (dk <= 0.0) throw InputError("exact tree: sampling interval dk must be positive");
    if (initial.dim() != system.n)
        throw ConfigError("exact tree: belief dimension " + std::to_string(initial.dim()) +
                          " does not match state dimension " + std::to_string(system.n));
    const double bits = static_cast<double>(steps) * std::log2(static_cast<double>(system.m));
    if (bits > 24.0 + 1e-9)
        throw InputError("exact tree: " + std::to_string(steps) + " steps over " +
                         std::to_string(system.m) +
                         " modes exceeds the enumeration cap (steps * log2(m) <= 24); use the "
                         "receding_horizon strategy instead");

    SynthesisConfig cfg;
    cfg.dk = dk;
    cfg.total_steps = steps;

    std::vector<int> best_seq;
    if (system.m == 1) {
        best_seq.assign(static_cast<std::size_t>(steps), 0);
    } else {
        double best_cost = std::numeric_limits<double>::infinity();
        std::vector<int> seq(static_cast<std::size_t>(steps), 0);
        // Depth-first in ascending mode order visits sequences lexicographically,
        // so strict improvement keeps the lexicographically smallest minimizer.
        struct Frame {
            Eigen::VectorXd mu;
            Eigen::MatrixXd sigma;
            double cost;
        };
        std::vector<Frame> stack(static_cast<std::size_t>(steps) + 1);
        stack[0] = {initial.mu, initial.sigma, detail::w2_raw(initial.mu, initial.sigma) * dk};
        auto descend = [&](auto&& self, int depth) -> void {
            if (depth == steps) {
                if (stack[static_cast<std::size_t>(depth)].cost < best_cost) {
                    best_cost = stack[static_cast<std::size_t>(depth)].cost;
                    best_seq = seq;
                }
                return;
            }
            const auto& parent = stack[static_cast<std::size_t>(depth)];
            for (int i = 0; i < system.m; ++i) {
                auto& child = stack[static_cast<std::size_t>(depth) + 1];
                child.mu = parent.mu;
                child.sigma = parent.sigma;
                detail::propagate_raw(child.mu, child.sigma, system.mode(i));
                child.cost = parent.cost + detail::w2_raw(child.mu, child.sigma) * dk;
                seq[static_cast<std::size_t>(depth)] = i;
                self(self, depth + 1);
            }
        };
        descend(descend, 0);
    }

    GaussianBelief initial_copy = initial;
    return detail::finish_report(Strategy::exact_tree, system, initial_copy, cfg,
                                 SwitchingSchedule::from_step_modes(best_seq), {}, steps);
}

/// Dispatch on config.strategy.
inline SynthesisReport synthesize(const JumpSystem& system, const GaussianBelief& initial,
                                  const SynthesisConfig& config) {
    switch (config.strategy) {
        case Strategy::receding_horizon: return synthesize_receding_horizon(system, initial, config);
        case Strategy::pointwise: return synthesize_pointwise(system, initial, config);
        case Strategy::infinite_horizon: return synthesize_infinite_horizon(system, initial, config);
        case Strategy::exact_tree: return solve_exact_tree(system, initial, config.total_steps, config.dk);
    }
    throw InputError("synthesis: unknown strategy");
}

} // namespace jumpsynth
