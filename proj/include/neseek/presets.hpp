#pragma once

#include <cstdint>
#include <random>

#include "neseek/game.hpp"
#include "neseek/graph.hpp"

namespace neseek {

/// Five-agent game: diagonal (-5, -4, -8, -2, -3), per-agent off-diagonal
/// fill (-1, -0.8, -1.5, -0.4, -0.5), b = (1, 2, 3, 4, 5) for every agent.
QuadraticGame example1_game();

/// The wheel on 5 nodes that example1 communicates over (node 0 is the hub).
Graph example1_graph();

/// Twenty-agent game: diagonal -(43, 27, 35, 41, 47, 49, 36, 24, 24, 27,
/// 46, 27, 45, 27, 48, 30, 26, 27, 39, 34), off-diagonal 1, b = (1, ..., 20).
QuadraticGame example3_game();

/// Exact equilibrium of example1 as rational literals:
/// (-1901/4536, -25/567, -59/378, 8305/4536, 1661/1134).
Vector example1_exact_ne();

/// Random game satisfying Assumption 1: unit-magnitude negative diagonal
/// jittered, off-diagonal rows scaled so dominance holds with slack.
QuadraticGame random_assumption1_game(std::mt19937_64& rng, int n);

/// Random connected simple graph: a random spanning tree plus independent
/// extra edges with probability edge_prob.
Graph random_connected_graph(std::mt19937_64& rng, int n,
                             double edge_prob = 0.3);

}  // namespace neseek
