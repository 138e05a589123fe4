#include "neseek/seeking.hpp"

#include <cmath>

namespace neseek {

namespace {

void validate_config(const SeekingConfig& config) {
    if (config.xi < 0.0) throw std::invalid_argument("xi must be nonnegative");
    if (config.tau < 1) throw std::invalid_argument("tau must be >= 1");
    if (config.max_stages < 1)
        throw std::invalid_argument("max_stages must be >= 1");
    if (config.termination_delta < 0.0)
        throw std::invalid_argument("termination_delta must be nonnegative");
}

double total_utility(const QuadraticGame& game, const Vector& s) {
    double total = 0.0;
    for (int i = 0; i < game.n(); ++i) total += payoff(game, s, i);
    return total;
}

}  // namespace

std::string to_string(RunStatus status) {
    switch (status) {
        case RunStatus::converged: return "converged";
        case RunStatus::max_stages_reached: return "max-stages-reached";
        case RunStatus::diverged: return "diverged";
    }
    return "unknown";
}

SeekingState init_state(const QuadraticGame& game, const Graph& graph,
                        const SeekingConfig& config, const Vector& s_init,
                        const Vector& est_init) {
    const int n = game.n();
    if (est_init.size() != n * n)
        throw std::invalid_argument("est_init must be a stacked n^2 vector");
    std::vector<Vector> strategies(static_cast<size_t>(config.tau) + 1, s_init);
    std::vector<Vector> estimations(static_cast<size_t>(config.tau), est_init);
    return init_state_history(game, graph, config, strategies, estimations);
}

SeekingState init_state_history(const QuadraticGame& game, const Graph& graph,
                                const SeekingConfig& config,
                                const std::vector<Vector>& strategy_history,
                                const std::vector<Vector>& estimation_history) {
    validate_config(config);
    const int n = game.n();
    if (graph.n != n)
        throw std::invalid_argument("graph and game disagree on agent count");
    if (!is_connected(graph))
        throw std::invalid_argument("communication graph must be connected");
    if (static_cast<int>(strategy_history.size()) != config.tau + 1)
        throw std::invalid_argument("strategy history must hold tau+1 profiles");
    if (static_cast<int>(estimation_history.size()) != config.tau)
        throw std::invalid_argument("estimation history must hold tau stacks");
    for (const Vector& s : strategy_history)
        if (s.size() != n)
            throw std::invalid_argument("strategy profile has wrong length");
    for (const Vector& e : estimation_history)
        if (e.size() != n * n)
            throw std::invalid_argument("estimation stack has wrong length");

    SeekingState state;
    state.n = n;
    state.tau = config.tau;
    state.stage = 0;
    state.strategies.assign(strategy_history.begin(), strategy_history.end());
    state.estimations.assign(estimation_history.begin(),
                             estimation_history.end());
    return state;
}

SeekingState step(const QuadraticGame& game, const Graph& graph,
                  const SeekingConfig& config, const SeekingState& state) {
    const int n = state.n;
    const int tau = state.tau;
    if (static_cast<int>(state.strategies.size()) != tau + 1 ||
        static_cast<int>(state.estimations.size()) != tau)
        throw std::invalid_argument("state windows are not full");

    const Vector& est_prev = state.estimations.back();     // shat(t-1)
    const Vector& est_delayed = state.estimations.front(); // shat(t-tau)
    const Vector& s_delayed = state.strategies.front();    // s(t-tau)

    // Estimation update, Algorithm step at stage t.
    Vector est_now(n * n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const int idx = i * n + j;
            double consensus = 0.0;
            for (int k = 0; k < n; ++k)
                if (graph.adj(i, k) != 0)
                    consensus += est_delayed(k * n + j) - est_delayed(idx);
            const double bias =
                graph.adj(i, j) != 0 ? s_delayed(j) - est_delayed(idx) : 0.0;
            est_now(idx) = est_prev(idx) + config.xi * (consensus + bias);
        }
    }

    // Best response to the fresh estimations; shat_ii never enters.
    Vector s_next(n);
    for (int i = 0; i < n; ++i) {
        const Matrix& Ai = game.A(i);
        double acc = game.b(i)(i);
        for (int j = 0; j < n; ++j)
            if (j != i) acc += Ai(i, j) * est_now(i * n + j);
        s_next(i) = -acc / Ai(i, i);
    }

    SeekingState next = state;
    next.strategies.push_back(std::move(s_next));
    next.strategies.pop_front();
    next.estimations.push_back(std::move(est_now));
    next.estimations.pop_front();
    next.stage = state.stage + 1;
    return next;
}

Trajectory run(const QuadraticGame& game, const Graph& graph,
               const SeekingConfig& config, SeekingState state) {
    const Vector s_star = nash_equilibrium(game);
    const double utility_star = total_utility(game, s_star);
    const int n = game.n();

    Trajectory traj;
    traj.records.reserve(static_cast<size_t>(config.max_stages) + 1);

    auto record = [&](long stage, const Vector& s,
                      const Vector* est) -> double {
        StageRecord rec;
        rec.stage = stage;
        rec.s = s;
        rec.per_agent_err = (s - s_star).cwiseAbs();
        rec.profile_err = (s - s_star).norm();
        rec.utility_err = std::abs(total_utility(game, s) - utility_star);
        if (config.record_estimations && est != nullptr) rec.estimation = *est;
        traj.records.push_back(std::move(rec));
        return traj.records.back().profile_err;
    };

    record(0, state.strategies.back(), nullptr);

    for (long t = 1; t <= config.max_stages; ++t) {
        state = step(game, graph, config, state);
        const double err = record(t, state.strategies.back(),
                                  &state.estimations.back());
        if (err <= config.termination_delta) {
            traj.terminal_stage = t;
            traj.status = RunStatus::converged;
            return traj;
        }
        if (!std::isfinite(err) || err > config.blowup_threshold) {
            traj.status = RunStatus::diverged;
            return traj;
        }
    }
    traj.status = RunStatus::max_stages_reached;
    (void)n;
    return traj;
}

namespace {

// Bisection verdict: converged runs are "stable"; runs that blow up or end
// with the error grown above its start are "unstable".
enum class XiVerdict { stable, unstable };

XiVerdict classify_run(const QuadraticGame& game, const Graph& graph,
                       double xi, int tau, const XiSearchConfig& search) {
    SeekingConfig config;
    config.xi = xi;
    config.tau = tau;
    config.max_stages = search.max_stages;
    config.termination_delta = search.termination_delta;

    // A generic (asymmetric) start: perfectly symmetric initializations can
    // have zero overlap with the unstable modes and hide a divergence.
    const int n = game.n();
    Vector s0(n);
    for (int i = 0; i < n; ++i) s0(i) = std::cos(1.0 + i);
    Vector est0(n * n);
    for (int k = 0; k < n * n; ++k) est0(k) = std::sin(0.5 + k);
    Trajectory traj =
        run(game, graph, config, init_state(game, graph, config, s0, est0));
    if (traj.status == RunStatus::converged) return XiVerdict::stable;
    if (traj.status == RunStatus::diverged) return XiVerdict::unstable;
    const double first = traj.records.front().profile_err;
    const double last = traj.records.back().profile_err;
    return last < first ? XiVerdict::stable : XiVerdict::unstable;
}

}  // namespace

double xi_max_by_simulation(const QuadraticGame& game, const Graph& graph,
                            int tau, const XiSearchConfig& search) {
    if (!game.assumption1_certified())
        throw std::invalid_argument("xi search needs an Assumption-1 game");
    if (!is_connected(graph))
        throw std::invalid_argument("xi search needs a connected graph");

    // Grid pre-scan: bracket the lowest onset of instability so a
    // non-monotone verdict cannot fool the bisection.
    double lo = 0.0;
    double hi = -1.0;
    for (int k = 1; k <= search.scan_points; ++k) {
        const double xi = search.scan_cap * k / search.scan_points;
        if (classify_run(game, graph, xi, tau, search) == XiVerdict::unstable) {
            hi = xi;
            break;
        }
        lo = xi;
    }
    if (hi < 0.0)
        throw std::runtime_error("no diverging xi found below the scan cap");

    while (hi - lo > search.width) {
        const double mid = 0.5 * (lo + hi);
        if (classify_run(game, graph, mid, tau, search) == XiVerdict::stable)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace neseek
