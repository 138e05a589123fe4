#pragma once

#include <random>

#include "neseek/presets.hpp"
#include "neseek/seeking.hpp"
#include "neseek/stability.hpp"

namespace neseek::testing {

struct RandomInstance {
    QuadraticGame game;
    Graph graph;
};

inline RandomInstance random_instance(std::mt19937_64& rng, int min_n = 3,
                                      int max_n = 8) {
    std::uniform_int_distribution<int> n_dist(min_n, max_n);
    const int n = n_dist(rng);
    return RandomInstance{random_assumption1_game(rng, n),
                          random_connected_graph(rng, n)};
}

/// Stacked state col(1_n (x) s, shat) used by the compact-form checks.
inline Vector stack_state(const Vector& s, const Vector& est) {
    const int n = static_cast<int>(s.size());
    Vector out(2 * n * n);
    for (int k = 0; k < n; ++k) out.segment(k * n, n) = s;
    out.tail(n * n) = est;
    return out;
}

}  // namespace neseek::testing
