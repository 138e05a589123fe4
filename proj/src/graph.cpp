#include "neseek/graph.hpp"

#include <queue>
#include <set>

namespace neseek {

GraphKind graph_kind_from_string(const std::string& name) {
    if (name == "ring") return GraphKind::ring;
    if (name == "complete") return GraphKind::complete;
    if (name == "star") return GraphKind::star;
    if (name == "wheel") return GraphKind::wheel;
    if (name == "custom") return GraphKind::custom;
    throw std::invalid_argument("unknown graph kind: " + name);
}

std::string to_string(GraphKind kind) {
    switch (kind) {
        case GraphKind::ring: return "ring";
        case GraphKind::complete: return "complete";
        case GraphKind::star: return "star";
        case GraphKind::wheel: return "wheel";
        case GraphKind::custom: return "custom";
    }
    return "unknown";
}

Graph make_graph(GraphKind kind, int n,
                 const std::vector<std::pair<int, int>>& edges) {
    // A wheel needs a genuine rim ring (>= 3 rim nodes); smaller "wheels"
    // would collapse to graphs whose degree profile no longer matches the
    // family's closed forms.
    const int min_n =
        kind == GraphKind::wheel ? 4 : (kind == GraphKind::ring ? 3 : 2);
    if (n < min_n)
        throw std::invalid_argument("node count too small for " + to_string(kind));

    Graph g{n, Eigen::MatrixXi::Zero(n, n)};
    auto link = [&](int a, int b) {
        g.adj(a, b) = 1;
        g.adj(b, a) = 1;
    };

    switch (kind) {
        case GraphKind::ring:
            for (int i = 0; i < n; ++i) link(i, (i + 1) % n);
            break;
        case GraphKind::complete:
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j) link(i, j);
            break;
        case GraphKind::star:
            for (int i = 1; i < n; ++i) link(0, i);
            break;
        case GraphKind::wheel:
            // hub 0, rim ring on 1..n-1
            for (int i = 1; i < n; ++i) link(0, i);
            for (int i = 1; i < n; ++i) link(i, i == n - 1 ? 1 : i + 1);
            break;
        case GraphKind::custom: {
            std::set<std::pair<int, int>> seen;
            for (auto [a, b] : edges) {
                if (a < 0 || b < 0 || a >= n || b >= n)
                    throw std::invalid_argument("edge endpoint out of range");
                if (a == b) throw std::invalid_argument("self-loop not allowed");
                auto key = std::minmax(a, b);
                if (!seen.insert(key).second)
                    throw std::invalid_argument("duplicate edge");
                link(a, b);
            }
            break;
        }
    }
    return g;
}

Matrix laplacian(const Graph& g) {
    Matrix L = -g.adj.cast<double>();
    for (int i = 0; i < g.n; ++i) L(i, i) = g.adj.row(i).sum();
    return L;
}

bool is_connected(const Graph& g) {
    if (g.n == 0) return false;
    std::vector<bool> visited(static_cast<size_t>(g.n), false);
    std::queue<int> frontier;
    frontier.push(0);
    visited[0] = true;
    int count = 1;
    while (!frontier.empty()) {
        const int u = frontier.front();
        frontier.pop();
        for (int v = 0; v < g.n; ++v) {
            if (g.adj(u, v) != 0 && !visited[static_cast<size_t>(v)]) {
                visited[static_cast<size_t>(v)] = true;
                ++count;
                frontier.push(v);
            }
        }
    }
    return count == g.n;
}

EstimationMatrices build_estimation_matrices(const Graph& g) {
    if (g.n > kEstimationNodeCap)
        throw std::invalid_argument(
            "node count exceeds the dense estimation-operator cap");
    const int n = g.n;
    const int dim = n * n;
    EstimationMatrices em;
    em.L = laplacian(g);
    em.B = Matrix::Zero(dim, dim);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            em.B(i * n + j, i * n + j) = static_cast<double>(g.adj(i, j));
    em.P = Matrix::Zero(dim, dim);
    for (int bi = 0; bi < n; ++bi)
        for (int bj = 0; bj < n; ++bj)
            em.P.block(bi * n, bj * n, n, n) =
                -em.L(bi, bj) * Matrix::Identity(n, n);
    em.P -= em.B;
    return em;
}

}  // namespace neseek
