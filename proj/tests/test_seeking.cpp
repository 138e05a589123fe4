#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstring>

#include "support.hpp"

using namespace neseek;

namespace {

SeekingConfig config_for(double xi, int tau) {
    SeekingConfig c;
    c.xi = xi;
    c.tau = tau;
    return c;
}

Vector example1_s0() {
    Vector s0(5);
    s0 << -1, -1, -1, 1, 1;
    return s0;
}

Vector example2_est0() {
    // agents 1..3 estimate -1 everywhere, agents 4..5 estimate +1
    Vector est0(25);
    est0.head(15).setConstant(-1.0);
    est0.tail(10).setConstant(1.0);
    return est0;
}

}  // namespace

TEST_CASE("init_state window arithmetic and validation") {
    const QuadraticGame game = example1_game();
    const Graph graph = example1_graph();

    SUBCASE("tau = 1 windows") {
        const SeekingState st = init_state(game, graph, config_for(0.1, 1),
                                           example1_s0(), example2_est0());
        CHECK(st.strategies.size() == 2);
        CHECK(st.estimations.size() == 1);
    }
    SUBCASE("example1 constant histories, tau = 3") {
        const SeekingState st = init_state(game, graph, config_for(0.08, 3),
                                           example1_s0(), example2_est0());
        CHECK(st.strategies.size() == 4);
        CHECK(st.estimations.size() == 3);
        for (const Vector& s : st.strategies) CHECK(s == example1_s0());
        for (const Vector& e : st.estimations) CHECK(e == example2_est0());
    }
    SUBCASE("dimension mismatch") {
        CHECK_THROWS_AS(init_state(game, graph, config_for(0.1, 1),
                                   Vector::Zero(4), example2_est0()),
                        std::invalid_argument);
        CHECK_THROWS_AS(init_state(game, graph, config_for(0.1, 1),
                                   example1_s0(), Vector::Zero(24)),
                        std::invalid_argument);
    }
    SUBCASE("disconnected graph rejected") {
        const Graph broken =
            make_graph(GraphKind::custom, 5, {{0, 1}, {2, 3}});
        CHECK_THROWS_AS(init_state(game, broken, config_for(0.1, 1),
                                   example1_s0(), example2_est0()),
                        std::invalid_argument);
    }
}

TEST_CASE("zero learning rate freezes the estimations") {
    const QuadraticGame game = example1_game();
    const Graph graph = example1_graph();
    const SeekingConfig config = config_for(0.0, 2);
    SeekingState st = init_state(game, graph, config, example1_s0(),
                                 example2_est0());
    st = step(game, graph, config, st);
    const Vector s1 = st.strategies.back();
    CHECK(st.estimations.back() == example2_est0());
    for (int k = 0; k < 10; ++k) st = step(game, graph, config, st);
    CHECK(st.strategies.back() == s1);
}

TEST_CASE("the stacked equilibrium is a fixed point of step") {
    const QuadraticGame game = example1_game();
    const Graph graph = example1_graph();
    const Vector s_star = nash_equilibrium(game);
    Vector est_star(25);
    for (int i = 0; i < 5; ++i) est_star.segment(i * 5, 5) = s_star;

    for (int tau : {1, 2, 3}) {
        for (double xi : {0.05, 0.2, 0.7}) {
            const SeekingConfig config = config_for(xi, tau);
            SeekingState st = init_state(game, graph, config, s_star, est_star);
            st = step(game, graph, config, st);
            CHECK((st.strategies.back() - s_star).cwiseAbs().maxCoeff() < 1e-14);
            CHECK((st.estimations.back() - est_star).cwiseAbs().maxCoeff() <
                  1e-14);
        }
    }
}

TEST_CASE("one step reproduces the compact matrix update (tau = 1)") {
    const QuadraticGame game = example1_game();
    const Graph graph = example1_graph();
    const SeekingConfig config = config_for(0.18, 1);
    SeekingState st = init_state(game, graph, config, example1_s0(),
                                 example2_est0());
    st = step(game, graph, config, st);

    const EstimationMatrices em = build_estimation_matrices(graph);
    const GameMatrices gm = build_matrices(game);
    Vector sbar(25);
    for (int i = 0; i < 5; ++i) sbar.segment(i * 5, 5) = example1_s0();
    const Vector est_expect =
        (Matrix::Identity(25, 25) + 0.18 * em.P) * example2_est0() +
        0.18 * em.B * sbar;
    CHECK((st.estimations.back() - est_expect).cwiseAbs().maxCoeff() <= 1e-12);
    const Vector s_expect = gm.N * est_expect + gm.c;
    CHECK((st.strategies.back() - s_expect).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("example1 delayed runs: tau 3 converges, tau 4 diverges") {
    const QuadraticGame game = example1_game();
    const Graph graph = example1_graph();
    Vector est0(25);
    for (int i = 0; i < 5; ++i) est0.segment(i * 5, 5) = example1_s0();

    SeekingConfig config = config_for(0.08, 3);
    config.max_stages = 5000;
    Trajectory t3 = run(game, graph, config,
                        init_state(game, graph, config, example1_s0(), est0));
    CHECK(t3.status == RunStatus::converged);
    CHECK(t3.terminal_stage.has_value());

    // the tau = 4 blow-up is slow (rho just above 1): give it room
    config.tau = 4;
    config.max_stages = 20000;
    Trajectory t4 = run(game, graph, config,
                        init_state(game, graph, config, example1_s0(), est0));
    CHECK(t4.status == RunStatus::diverged);
}

TEST_CASE("example2: one-step delay converges with exponential decay") {
    const QuadraticGame game = example1_game();
    const Graph graph = example1_graph();
    SeekingConfig config = config_for(0.18, 1);
    config.max_stages = 5000;
    config.termination_delta = 1e-4;
    config.record_estimations = true;
    Trajectory traj = run(game, graph, config,
                          init_state(game, graph, config, example1_s0(),
                                     example2_est0()));
    REQUIRE(traj.status == RunStatus::converged);

    // least-squares slope of log error over the pre-termination window
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int count = 0;
    for (const StageRecord& rec : traj.records) {
        if (rec.profile_err <= 0.0) continue;
        const double x = static_cast<double>(rec.stage);
        const double y = std::log(rec.profile_err);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++count;
    }
    const double slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
    CHECK(slope < 0.0);
}

TEST_CASE("consensus at convergence: estimations match the equilibrium") {
    const QuadraticGame game = example1_game();
    const Graph graph = example1_graph();
    SeekingConfig config = config_for(0.15, 2);
    config.record_estimations = true;
    config.termination_delta = 1e-6;
    config.max_stages = 20000;
    Trajectory traj = run(game, graph, config,
                          init_state(game, graph, config, example1_s0(),
                                     example2_est0()));
    REQUIRE(traj.status == RunStatus::converged);
    const Vector s_star = nash_equilibrium(game);
    const Vector& est = *traj.records.back().estimation;
    double worst = 0.0;
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j)
            worst = std::max(worst, std::abs(est(i * 5 + j) - s_star(j)));
    CHECK(worst <= 50.0 * config.termination_delta);
}

TEST_CASE("property: step trajectories satisfy the stacked matrix recursion") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 12; ++trial) {
        const auto inst = testing::random_instance(rng, 3, 6);
        const int n = inst.game.n();
        for (int tau : {1, 2, 3}) {
            const SeekingConfig config =
                config_for(0.8 * delta1(inst.graph), tau);
            SeekingState st = init_state(inst.game, inst.graph, config,
                                         Vector::Ones(n),
                                         -Vector::Ones(n * n));
            // slog[t] = s(t), elog[t] = shat(t)
            std::vector<Vector> slog{st.strategies.back()};
            std::vector<Vector> elog;
            for (int t = 1; t <= 60; ++t) {
                st = step(inst.game, inst.graph, config, st);
                slog.push_back(st.strategies.back());
                elog.push_back(st.estimations.back());
            }
            const AugmentedSystem sys =
                build_augmented(inst.game, inst.graph, config.xi, tau);
            auto stacked = [&](int t) {
                return testing::stack_state(slog[static_cast<size_t>(t)],
                                            elog[static_cast<size_t>(t)]);
            };
            double worst = 0.0;
            for (int t = tau + 1; t + 1 < static_cast<int>(elog.size()); ++t) {
                const Vector lhs = stacked(t);
                const Vector rhs = sys.H1 * stacked(t - 1) +
                                   sys.H2 * stacked(t - tau) + sys.c_bar;
                worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff());
            }
            CHECK(worst <= 1e-10);
        }
    }
}

TEST_CASE("determinism: identical inputs give bitwise-identical trajectories") {
    const QuadraticGame game = example1_game();
    const Graph graph = example1_graph();
    SeekingConfig config = config_for(0.18, 2);
    config.max_stages = 300;
    config.termination_delta = 0.0;
    auto once = [&] {
        return run(game, graph, config,
                   init_state(game, graph, config, example1_s0(),
                              example2_est0()));
    };
    const Trajectory a = once();
    const Trajectory b = once();
    REQUIRE(a.records.size() == b.records.size());
    for (size_t t = 0; t < a.records.size(); ++t)
        CHECK(std::memcmp(a.records[t].s.data(), b.records[t].s.data(),
                          sizeof(double) * 5) == 0);
}

TEST_CASE("xi_max_by_simulation brackets the example1 instability onset") {
    const QuadraticGame game = example1_game();
    const Graph graph = example1_graph();
    XiSearchConfig search;
    search.width = 1e-3;
    const double xm = xi_max_by_simulation(game, graph, 1, search);
    CHECK(xm > 0.32);
    CHECK(xm < 0.35);
    const double spectral = xi_max_by_spectrum(game, graph, 1);
    CHECK(std::abs(xm - spectral) < 1e-2);
}
