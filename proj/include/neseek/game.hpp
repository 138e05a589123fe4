#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <vector>

namespace neseek {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Thrown when the closed-form equilibrium solve encounters a (near-)singular
/// system. Carries a condition estimate of I - M for diagnostics.
class SingularSystemError : public std::runtime_error {
public:
    SingularSystemError(const std::string& what, double condition_estimate)
        : std::runtime_error(what), condition_estimate_(condition_estimate) {}
    double condition_estimate() const { return condition_estimate_; }

private:
    double condition_estimate_;
};

/// A non-cooperative quadratic game. Agent i's payoff is
///   J_i(s) = 1/2 s^T A_i s + b_i^T s + g_i,
/// with A_i symmetric and the self-curvature [A_i]_{ii} strictly negative so
/// the best response is the unique maximizer of a concave parabola.
class QuadraticGame {
public:
    /// Validates symmetry and negative self-curvature; throws
    /// std::invalid_argument on violation. g defaults to zero offsets.
    QuadraticGame(std::vector<Matrix> A, std::vector<Vector> b, Vector g = {});

    int n() const { return n_; }
    const Matrix& A(int i) const { return A_.at(static_cast<size_t>(i)); }
    const Vector& b(int i) const { return b_.at(static_cast<size_t>(i)); }
    double g(int i) const { return g_(i); }

    /// Strict diagonal dominance of row i of A_i for every agent. Games that
    /// violate it are still constructible (divergence experiments need them)
    /// but carry this flag.
    bool assumption1_certified() const { return assumption1_; }

private:
    int n_;
    std::vector<Matrix> A_;
    std::vector<Vector> b_;
    Vector g_;
    bool assumption1_;
};

/// Best-response dynamics matrices. M has zero diagonal and
/// M[i][j] = -a^i_{ij} / a^i_{ii}; c[i] = -b^i_i / a^i_{ii}.
/// N is the n x n^2 block-diagonal layout of M's rows, so that
/// N (1_n (x) s) = M s for every profile s.
struct GameMatrices {
    Matrix M;
    Vector c;
    Matrix N;
};

/// J_i(s); i is a 0-based agent index.
double payoff(const QuadraticGame& game, const Vector& s, int i);

/// Unique maximizer of J_i over agent i's coordinate; slot i of s is ignored.
double best_response(const QuadraticGame& game, int i, const Vector& s);

GameMatrices build_matrices(const QuadraticGame& game);

/// Closed-form equilibrium (I - M)^{-1} c by dense partial-pivoting solve.
/// Requires an Assumption-1-certified game; throws SingularSystemError when
/// the solve is numerically unreliable.
Vector nash_equilibrium(const QuadraticGame& game);

struct NashCheck {
    bool is_equilibrium;
    Vector residuals;  ///< |best_response(i, s) - s_i| per agent
};

NashCheck verify_nash(const QuadraticGame& game, const Vector& s, double tol);

/// Full-information baseline s(t+1) = M s(t) + c, returning the visited
/// profiles s(0), ..., s(stages).
std::vector<Vector> run_full_info(const QuadraticGame& game, const Vector& s0,
                                  int stages);

}  // namespace neseek
