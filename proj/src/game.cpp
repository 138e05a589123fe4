#include "neseek/game.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>
#include <cmath>

namespace neseek {

QuadraticGame::QuadraticGame(std::vector<Matrix> A, std::vector<Vector> b,
                             Vector g)
    : A_(std::move(A)), b_(std::move(b)), g_(std::move(g)) {
    n_ = static_cast<int>(A_.size());
    if (n_ < 1) throw std::invalid_argument("game needs at least one agent");
    if (static_cast<int>(b_.size()) != n_)
        throw std::invalid_argument("A and b must have one entry per agent");
    if (g_.size() == 0) g_ = Vector::Zero(n_);
    if (g_.size() != n_)
        throw std::invalid_argument("g must have one offset per agent");

    for (int i = 0; i < n_; ++i) {
        const Matrix& Ai = A_[static_cast<size_t>(i)];
        if (Ai.rows() != n_ || Ai.cols() != n_)
            throw std::invalid_argument("A_i must be n x n");
        if (Ai != Ai.transpose())
            throw std::invalid_argument("A_i must be symmetric as stored");
        if (!(Ai(i, i) < 0.0))
            throw std::invalid_argument(
                "self-curvature a^i_ii must be strictly negative");
        if (b_[static_cast<size_t>(i)].size() != n_)
            throw std::invalid_argument("b_i must have length n");
    }

    assumption1_ = true;
    for (int i = 0; i < n_ && assumption1_; ++i) {
        const Matrix& Ai = A_[static_cast<size_t>(i)];
        double off_sum = 0.0;
        for (int j = 0; j < n_; ++j)
            if (j != i) off_sum += std::abs(Ai(i, j));
        if (!(std::abs(Ai(i, i)) > off_sum)) assumption1_ = false;
    }
}

double payoff(const QuadraticGame& game, const Vector& s, int i) {
    if (i < 0 || i >= game.n()) throw std::out_of_range("agent index");
    if (s.size() != game.n())
        throw std::invalid_argument("strategy profile has wrong length");
    return 0.5 * s.dot(game.A(i) * s) + game.b(i).dot(s) + game.g(i);
}

double best_response(const QuadraticGame& game, int i, const Vector& s) {
    if (i < 0 || i >= game.n()) throw std::out_of_range("agent index");
    if (s.size() != game.n())
        throw std::invalid_argument("strategy profile has wrong length");
    const Matrix& Ai = game.A(i);
    double acc = game.b(i)(i);
    for (int j = 0; j < game.n(); ++j)
        if (j != i) acc += Ai(i, j) * s(j);
    return -acc / Ai(i, i);
}

GameMatrices build_matrices(const QuadraticGame& game) {
    const int n = game.n();
    GameMatrices gm;
    gm.M = Matrix::Zero(n, n);
    gm.c = Vector::Zero(n);
    gm.N = Matrix::Zero(n, n * n);
    for (int i = 0; i < n; ++i) {
        const Matrix& Ai = game.A(i);
        for (int j = 0; j < n; ++j)
            if (j != i) gm.M(i, j) = -Ai(i, j) / Ai(i, i);
        gm.c(i) = -game.b(i)(i) / Ai(i, i);
        gm.N.block(i, i * n, 1, n) = gm.M.row(i);
    }
    return gm;
}

Vector nash_equilibrium(const QuadraticGame& game) {
    if (!game.assumption1_certified())
        throw std::invalid_argument(
            "nash_equilibrium requires an Assumption-1-certified game");
    const GameMatrices gm = build_matrices(game);
    const int n = game.n();
    const Matrix system = Matrix::Identity(n, n) - gm.M;
    Eigen::PartialPivLU<Matrix> lu(system);
    const Vector s = lu.solve(gm.c);
    const double residual = (system * s - gm.c).norm();
    const double scale = gm.c.norm() + 1.0;
    if (!s.allFinite() || residual > 1e-8 * scale) {
        Eigen::JacobiSVD<Matrix> svd(system);
        const double cond = svd.singularValues()(0) /
                            svd.singularValues()(svd.singularValues().size() - 1);
        throw SingularSystemError(
            "equilibrium solve unreliable; Assumption 1 violated despite "
            "certification",
            cond);
    }
    return s;
}

NashCheck verify_nash(const QuadraticGame& game, const Vector& s, double tol) {
    NashCheck check;
    check.residuals = Vector::Zero(game.n());
    check.is_equilibrium = true;
    for (int i = 0; i < game.n(); ++i) {
        check.residuals(i) = std::abs(best_response(game, i, s) - s(i));
        if (check.residuals(i) > tol) check.is_equilibrium = false;
    }
    return check;
}

std::vector<Vector> run_full_info(const QuadraticGame& game, const Vector& s0,
                                  int stages) {
    if (s0.size() != game.n())
        throw std::invalid_argument("initial profile has wrong length");
    const GameMatrices gm = build_matrices(game);
    std::vector<Vector> out;
    out.reserve(static_cast<size_t>(stages) + 1);
    out.push_back(s0);
    for (int t = 0; t < stages; ++t)
        out.push_back(gm.M * out.back() + gm.c);
    return out;
}

}  // namespace neseek
