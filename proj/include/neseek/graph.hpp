#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

#include "neseek/game.hpp"

namespace neseek {

/// Undirected, unweighted communication graph given by its 0/1 adjacency.
struct Graph {
    int n;
    Eigen::MatrixXi adj;
};

enum class GraphKind { ring, complete, star, wheel, custom };

GraphKind graph_kind_from_string(const std::string& name);
std::string to_string(GraphKind kind);

/// Canonical constructions. Star and wheel use node 0 as the hub; the wheel
/// rim is a ring on nodes 1..n-1. Custom edges are 0-based index pairs and
/// must form a simple graph (no self-loops, no duplicates).
Graph make_graph(GraphKind kind, int n,
                 const std::vector<std::pair<int, int>>& edges = {});

/// L = D - adj with D the degree diagonal.
Matrix laplacian(const Graph& g);

/// Breadth-first reachability from node 0.
bool is_connected(const Graph& g);

/// Dense operators of the estimation layer, all of size n^2 x n^2 in the
/// coordinate ordering (1,1),...,(1,n),...,(n,1),...,(n,n):
///   B = diag(alpha_11, ..., alpha_nn),  P = -(L (x) I_n + B).
struct EstimationMatrices {
    Matrix B;
    Matrix P;
    Matrix L;
};

/// Node-count cap for the dense n^2-dimensional operators.
inline constexpr int kEstimationNodeCap = 60;

EstimationMatrices build_estimation_matrices(const Graph& g);

}  // namespace neseek
