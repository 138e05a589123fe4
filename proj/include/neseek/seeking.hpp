#pragma once

#include <deque>
#include <optional>
#include <vector>

#include "neseek/game.hpp"
#include "neseek/graph.hpp"

namespace neseek {

struct SeekingConfig {
    double xi = 0.1;               ///< learning rate, > 0 (0 allowed for frozen-estimation checks)
    int tau = 1;                   ///< delay step, >= 1
    int max_stages = 5000;
    double termination_delta = 1e-4;
    bool record_estimations = false;
    double blowup_threshold = 1e6;  ///< ||s(t) - s*||_2 above this counts as divergence
};

/// Rolling window of the delayed dynamics at stage t:
///  - strategies holds s(t-tau), ..., s(t)         (tau + 1 profiles)
///  - estimations holds shat(t-tau), ..., shat(t-1) (tau stacks in R^{n^2})
/// Estimation stacks are agent-major: entry i*n + j is agent i's estimate of
/// agent j's strategy.
struct SeekingState {
    int n = 0;
    int tau = 0;
    long stage = 0;
    std::deque<Vector> strategies;
    std::deque<Vector> estimations;
};

struct StageRecord {
    long stage;
    Vector s;
    Vector per_agent_err;   ///< |s_i(t) - s*_i|
    double profile_err;     ///< ||s(t) - s*||_2
    double utility_err;     ///< |sum_i (J_i(s(t)) - J_i(s*))|
    std::optional<Vector> estimation;  ///< shat(t-1), the stack the stage-t
                                       ///< strategies responded to
};

enum class RunStatus { converged, max_stages_reached, diverged };

std::string to_string(RunStatus status);

struct Trajectory {
    std::vector<StageRecord> records;
    std::optional<long> terminal_stage;  ///< minimal T with ||s(T)-s*|| <= delta
    RunStatus status = RunStatus::max_stages_reached;
};

/// Constant-history initialization: s(k) = s_init for k = -tau..0 and
/// shat(k) = est_init for k = -tau..-1. est_init is the stacked n^2 vector.
/// Throws on dimension mismatch or a disconnected graph.
SeekingState init_state(const QuadraticGame& game, const Graph& graph,
                        const SeekingConfig& config, const Vector& s_init,
                        const Vector& est_init);

/// Full per-stage histories: strategy_history is s(-tau), ..., s(0) and
/// estimation_history is shat(-tau), ..., shat(-1).
SeekingState init_state_history(const QuadraticGame& game, const Graph& graph,
                                const SeekingConfig& config,
                                const std::vector<Vector>& strategy_history,
                                const std::vector<Vector>& estimation_history);

/// One stage of the delayed dynamics: the estimation update
///   shat_ij(t) = shat_ij(t-1)
///              + xi [ sum_{k in N_i} (shat_kj(t-tau) - shat_ij(t-tau))
///                     + alpha_ij (s_j(t-tau) - shat_ij(t-tau)) ]
/// followed by the best response s_i(t+1) to shat^i(t). The self-estimate
/// shat_ii is driven by the consensus term only (alpha_ii = 0) and is never
/// read by the strategy update.
SeekingState step(const QuadraticGame& game, const Graph& graph,
                  const SeekingConfig& config, const SeekingState& state);

/// Iterates step until ||s(T) - s*||_2 <= delta, the blow-up threshold is
/// hit, or max_stages is reached. s* is used for metrics only; the agents
/// never see it.
Trajectory run(const QuadraticGame& game, const Graph& graph,
               const SeekingConfig& config, SeekingState state);

struct XiSearchConfig {
    double width = 1e-3;     ///< bisection bracket width at return
    double scan_cap = 2.0;   ///< largest xi probed by the pre-scan
    int scan_points = 40;
    int max_stages = 20000;
    double termination_delta = 1e-4;
};

/// Largest converging learning rate, located by a grid pre-scan (bracketing
/// the lowest divergence onset) followed by bisection on run() verdicts.
/// Throws std::runtime_error when no diverging xi exists below scan_cap.
double xi_max_by_simulation(const QuadraticGame& game, const Graph& graph,
                            int tau, const XiSearchConfig& search = {});

}  // namespace neseek
