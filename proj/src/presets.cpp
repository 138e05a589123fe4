#include "neseek/presets.hpp"

namespace neseek {

namespace {

/// Per-agent generator: A_i has diag(i) on its own diagonal entry, the
/// scalar offdiag(i) everywhere else, and the other diagonal entries zero.
QuadraticGame fill_game(const Vector& diag, const Vector& offdiag,
                        const Vector& b_common) {
    const int n = static_cast<int>(diag.size());
    std::vector<Matrix> A;
    std::vector<Vector> b;
    A.reserve(static_cast<size_t>(n));
    b.reserve(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        Matrix Ai = Matrix::Constant(n, n, offdiag(i));
        Ai.diagonal().setZero();
        Ai(i, i) = diag(i);
        A.push_back(std::move(Ai));
        b.push_back(b_common);
    }
    return QuadraticGame(std::move(A), std::move(b));
}

}  // namespace

QuadraticGame example1_game() {
    Vector diag(5), off(5), b(5);
    diag << -5, -4, -8, -2, -3;
    off << -1, -0.8, -1.5, -0.4, -0.5;
    b << 1, 2, 3, 4, 5;
    return fill_game(diag, off, b);
}

Graph example1_graph() { return make_graph(GraphKind::wheel, 5); }

QuadraticGame example3_game() {
    Vector diag(20), off(20), b(20);
    diag << -43, -27, -35, -41, -47, -49, -36, -24, -24, -27, -46, -27, -45,
        -27, -48, -30, -26, -27, -39, -34;
    off.setOnes();
    for (int i = 0; i < 20; ++i) b(i) = i + 1;
    return fill_game(diag, off, b);
}

Vector example1_exact_ne() {
    Vector s(5);
    s << -1901.0 / 4536.0, -25.0 / 567.0, -59.0 / 378.0, 8305.0 / 4536.0,
        1661.0 / 1134.0;
    return s;
}

QuadraticGame random_assumption1_game(std::mt19937_64& rng, int n) {
    std::uniform_real_distribution<double> diag_dist(1.0, 5.0);
    std::uniform_real_distribution<double> off_dist(-1.0, 1.0);
    std::uniform_real_distribution<double> slack_dist(0.1, 0.9);
    std::uniform_real_distribution<double> b_dist(-3.0, 3.0);

    std::vector<Matrix> A;
    std::vector<Vector> b;
    for (int i = 0; i < n; ++i) {
        Matrix Ai = Matrix::Zero(n, n);
        for (int r = 0; r < n; ++r)
            for (int c = r + 1; c < n; ++c) {
                const double v = off_dist(rng);
                Ai(r, c) = v;
                Ai(c, r) = v;
            }
        // scale row i so strict dominance holds with random slack
        double off_sum = 0.0;
        for (int j = 0; j < n; ++j)
            if (j != i) off_sum += std::abs(Ai(i, j));
        const double aii = diag_dist(rng);
        if (off_sum > 0.0) {
            const double scale = slack_dist(rng) * aii / off_sum;
            Ai.row(i) *= scale;
            Ai.col(i) *= scale;
        }
        Ai(i, i) = -aii;
        A.push_back(std::move(Ai));
        Vector bi(n);
        for (int j = 0; j < n; ++j) bi(j) = b_dist(rng);
        b.push_back(std::move(bi));
    }
    return QuadraticGame(std::move(A), std::move(b));
}

Graph random_connected_graph(std::mt19937_64& rng, int n, double edge_prob) {
    std::vector<std::pair<int, int>> edges;
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    // random spanning tree: attach each node to a random earlier one
    for (int v = 1; v < n; ++v) {
        std::uniform_int_distribution<int> pick(0, v - 1);
        edges.emplace_back(pick(rng), v);
    }
    Graph g = make_graph(GraphKind::custom, n, edges);
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            if (g.adj(a, b) == 0 && coin(rng) < edge_prob) {
                g.adj(a, b) = 1;
                g.adj(b, a) = 1;
            }
    return g;
}

}  // namespace neseek
