#include <doctest.h>

#include "support.hpp"

using namespace neseek;

namespace {

QuadraticGame two_agent_game(double aii, double aij, double b_self) {
    Matrix A1(2, 2), A2(2, 2);
    A1 << aii, aij, aij, aii;
    A2 = A1;
    Vector b1(2), b2(2);
    b1 << b_self, 0;
    b2 << 0, b_self;
    return QuadraticGame({A1, A2}, {b1, b2});
}

}  // namespace

TEST_CASE("game construction validates inputs") {
    Matrix bad(2, 2);
    bad << -2, 1, 0, -2;  // asymmetric
    Vector z = Vector::Zero(2);
    CHECK_THROWS_AS(QuadraticGame({bad, bad}, {z, z}), std::invalid_argument);

    Matrix pos(2, 2);
    pos << 2, 1, 1, -2;  // nonnegative self-curvature for agent 0
    CHECK_THROWS_AS(QuadraticGame({pos, pos}, {z, z}), std::invalid_argument);

    // constructible but flagged: dominance violated
    Matrix weak(2, 2);
    weak << -1, 2, 2, -1;
    QuadraticGame flagged({weak, weak}, {z, z});
    CHECK_FALSE(flagged.assumption1_certified());
    CHECK(two_agent_game(-2, 1, 0).assumption1_certified());
}

TEST_CASE("payoff evaluates the quadratic form") {
    const QuadraticGame game = two_agent_game(-2, 1, 0);
    Vector zero = Vector::Zero(2);
    CHECK(payoff(game, zero, 0) == 0.0);
    Vector ones = Vector::Ones(2);
    CHECK(payoff(game, ones, 0) == doctest::Approx(-1.0).epsilon(1e-15));

    CHECK_THROWS_AS(payoff(game, zero, 2), std::out_of_range);
    CHECK_THROWS_AS(payoff(game, Vector::Zero(3), 0), std::invalid_argument);
}

TEST_CASE("best response of an interaction-free agent ignores the others") {
    Matrix A(2, 2);
    A << -2, 0, 0, -2;
    Vector b(2);
    b << 4, 4;
    QuadraticGame game({A, A}, {b, b});
    Vector anything(2);
    anything << 123.0, -7.0;
    CHECK(best_response(game, 0, anything) == doctest::Approx(2.0));
}

TEST_CASE("example1 best response and equilibrium fixed point") {
    const QuadraticGame game = example1_game();
    Vector zeros = Vector::Zero(5);
    CHECK(best_response(game, 0, zeros) == doctest::Approx(0.2).epsilon(1e-15));

    const Vector s_star = nash_equilibrium(game);
    for (int i = 0; i < 5; ++i)
        CHECK(best_response(game, i, s_star) ==
              doctest::Approx(s_star(i)).epsilon(1e-12));

    // exact rational equilibrium of the stated parameters
    const Vector exact = example1_exact_ne();
    CHECK((s_star - exact).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("build_matrices structure") {
    SUBCASE("two agents") {
        const GameMatrices gm = build_matrices(two_agent_game(-2, 1, 0));
        CHECK(gm.M(0, 0) == 0.0);
        CHECK(gm.M(1, 1) == 0.0);
        CHECK(gm.M(0, 1) == doctest::Approx(0.5));
        CHECK(gm.M(1, 0) == doctest::Approx(0.5));
        CHECK(gm.c.norm() == 0.0);
    }
    SUBCASE("diagonal game has M = 0") {
        Matrix A = -2 * Matrix::Identity(3, 3);
        Vector b(3);
        b << 1, 2, 3;
        QuadraticGame game({A, A, A}, {b, b, b});
        const GameMatrices gm = build_matrices(game);
        CHECK(gm.M.norm() == 0.0);
        CHECK(gm.c(0) == doctest::Approx(0.5));
        CHECK(gm.c(2) == doctest::Approx(1.5));
    }
    SUBCASE("example1 first row") {
        const GameMatrices gm = build_matrices(example1_game());
        for (int j = 1; j < 5; ++j)
            CHECK(gm.M(0, j) == doctest::Approx(-0.2).epsilon(1e-15));
        CHECK(gm.M(0, 0) == 0.0);
    }
}

TEST_CASE("nash_equilibrium closed form") {
    SUBCASE("M = 0 gives s* = c") {
        Matrix A = -2 * Matrix::Identity(2, 2);
        Vector b(2);
        b << 2, 2;
        QuadraticGame game({A, A}, {b, b});
        const Vector s = nash_equilibrium(game);
        CHECK(s(0) == doctest::Approx(1.0));
        CHECK(s(1) == doctest::Approx(1.0));
    }
    SUBCASE("fixed-point iteration oracle") {
        const QuadraticGame game = two_agent_game(-2, 1, 2);
        const Vector s = nash_equilibrium(game);
        // oracle: iterate s <- M s + c to the fixed point
        Vector it = Vector::Zero(2);
        const GameMatrices gm = build_matrices(game);
        for (int k = 0; k < 200; ++k) it = gm.M * it + gm.c;
        CHECK((s - it).norm() < 1e-12);
        CHECK(s(0) == doctest::Approx(2.0));
        CHECK(s(1) == doctest::Approx(2.0));
    }
    SUBCASE("uncertified game is rejected") {
        Matrix weak(2, 2);
        weak << -1, 2, 2, -1;
        Vector z = Vector::Zero(2);
        QuadraticGame flagged({weak, weak}, {z, z});
        CHECK_THROWS_AS(nash_equilibrium(flagged), std::invalid_argument);
    }
}

TEST_CASE("verify_nash residuals") {
    const QuadraticGame game = example1_game();
    const Vector s_star = nash_equilibrium(game);
    CHECK(verify_nash(game, s_star, 1e-9).is_equilibrium);

    Vector perturbed = s_star;
    perturbed(0) += 1.0;
    const NashCheck check = verify_nash(game, perturbed, 1e-9);
    CHECK_FALSE(check.is_equilibrium);
    CHECK(check.residuals(0) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("run_full_info converges to the equilibrium") {
    const QuadraticGame game = example1_game();
    Vector s0(5);
    s0 << -1, -1, -1, 1, 1;
    const auto traj = run_full_info(game, s0, 5000);
    CHECK((traj.back() - nash_equilibrium(game)).norm() < 1e-6);

    Matrix A = -2 * Matrix::Identity(2, 2);
    Vector b(2);
    b << 2, 2;
    QuadraticGame diag_game({A, A}, {b, b});
    const auto one = run_full_info(diag_game, Vector::Zero(2), 1);
    CHECK(one.back()(0) == doctest::Approx(1.0));
}

TEST_CASE("property: best response maximizes the payoff parabola") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> sdist(-2.0, 2.0);
    for (int trial = 0; trial < 30; ++trial) {
        const auto inst = testing::random_instance(rng);
        const int n = inst.game.n();
        Vector s(n);
        for (int i = 0; i < n; ++i) s(i) = sdist(rng);
        for (int i = 0; i < n; ++i) {
            Vector at = s;
            at(i) = best_response(inst.game, i, s);
            const double best = payoff(inst.game, at, i);
            for (double eps : {1e-3, 1e-1}) {
                for (double sign : {-1.0, 1.0}) {
                    Vector off = at;
                    off(i) += sign * eps;
                    CHECK(best > payoff(inst.game, off, i));
                }
            }
        }
    }
}

TEST_CASE("property: full-information dynamics reach the closed-form NE") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const auto inst = testing::random_instance(rng);
        const Vector s_star = nash_equilibrium(inst.game);
        const auto traj =
            run_full_info(inst.game, Vector::Zero(inst.game.n()), 4000);
        CHECK((traj.back() - s_star).norm() < 1e-6);
    }
}

TEST_CASE("property: N applied to a replicated profile equals M s") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> sdist(-5.0, 5.0);
    for (int trial = 0; trial < 10; ++trial) {
        const auto inst = testing::random_instance(rng);
        const int n = inst.game.n();
        const GameMatrices gm = build_matrices(inst.game);
        for (int rep = 0; rep < 10; ++rep) {
            Vector s(n);
            for (int i = 0; i < n; ++i) s(i) = sdist(rng);
            Vector replicated(n * n);
            for (int k = 0; k < n; ++k) replicated.segment(k * n, n) = s;
            const Vector lhs = gm.N * replicated;
            const Vector rhs = gm.M * s;
            CHECK((lhs - rhs).cwiseAbs().maxCoeff() <=
                  1e-12 * (1.0 + rhs.cwiseAbs().maxCoeff()));
        }
    }
}

TEST_CASE("property: per-agent payoff scaling leaves M, c and the NE alone") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> lambda_dist(0.1, 10.0);
    for (int trial = 0; trial < 10; ++trial) {
        const auto inst = testing::random_instance(rng);
        const int n = inst.game.n();
        std::vector<Matrix> A;
        std::vector<Vector> b;
        for (int i = 0; i < n; ++i) {
            const double lambda = lambda_dist(rng);
            A.push_back(lambda * inst.game.A(i));
            b.push_back(lambda * inst.game.b(i));
        }
        QuadraticGame scaled(std::move(A), std::move(b));
        const GameMatrices gm0 = build_matrices(inst.game);
        const GameMatrices gm1 = build_matrices(scaled);
        CHECK((gm0.M - gm1.M).cwiseAbs().maxCoeff() < 1e-14);
        CHECK((gm0.c - gm1.c).cwiseAbs().maxCoeff() < 1e-14);
        CHECK((nash_equilibrium(inst.game) - nash_equilibrium(scaled)).norm() <
              1e-12);
    }
}
