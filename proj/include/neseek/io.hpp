#pragma once

#include <iosfwd>
#include <string>

#include "neseek/game.hpp"
#include "neseek/graph.hpp"
#include "neseek/seeking.hpp"
#include "neseek/stability.hpp"

namespace neseek {

/// Game definition document (JSON). Either the explicit form
///   { "n": 2, "A": [[[...row-major...]], ...], "b": [[...], ...], "g": [...] }
/// or the compact generator form
///   { "n": 5, "diag": [...], "offdiag": [...], "b_common": [...] }
/// where diag lists a^i_{ii}, offdiag gives the per-agent scalar filling
/// every off-diagonal entry of A_i, and b_common is shared by all agents.
QuadraticGame load_game(const std::string& path);
QuadraticGame parse_game(const std::string& text);
std::string game_to_json(const QuadraticGame& game);
void save_game(const QuadraticGame& game, const std::string& path);

/// Graph document: { "kind": "wheel", "n": 5 } or
/// { "n": 4, "edges": [[1,2], [3,4]] } with 1-based node indices.
Graph load_graph(const std::string& path);
Graph parse_graph(const std::string& text);
std::string graph_to_json(const Graph& g);

/// CSV schema: stage, s_1..s_n, err_1..err_n, profile_err, utility_err and,
/// when estimations were recorded, est_1_1 .. est_n_n. Floats carry 17
/// significant digits.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj, int n);
void write_trajectory_csv(const std::string& path, const Trajectory& traj,
                          int n);

std::string report_to_json(const StabilityReport& report);

}  // namespace neseek
