#pragma once

#include <optional>
#include <string>

#include "neseek/game.hpp"
#include "neseek/graph.hpp"

namespace neseek {

/// Delay-free form of the stacked dynamics
///   frak_s(t) = H1 frak_s(t-1) + H2 frak_s(t-tau) + c_bar,
/// where frak_s = col(1_n (x) s, shat) lives in R^{2n^2},
///   H1 = [[0, 1_n (x) N], [0, I]],  H2 = xi [[0, 0], [B, P]].
struct AugmentedSystem {
    Matrix H1;
    Matrix H2;   ///< carries the factor xi
    Vector c_bar;
    int tau;
};

AugmentedSystem build_augmented(const QuadraticGame& game, const Graph& graph,
                                double xi, int tau);

/// H(xi) = H1 + H2(xi); the one-step-delay transition matrix.
Matrix build_H(const QuadraticGame& game, const Graph& graph, double xi);

/// Dimension cap for dense eigensolves; overridable through the
/// NESEEK_EIG_DIM_CAP environment variable.
int eigensolver_dimension_cap();

/// max |lambda_i| by a dense (real Schur) eigenvalue routine. Throws on
/// non-square input, cap excess, or solver failure.
double spectral_radius(const Matrix& m);

/// Block companion form of the delayed recursion: first block row
/// [H1, 0, ..., 0, H2] over an identity sub-diagonal, size 2n^2 tau.
/// For tau = 1 this is H1 + H2. Its spectral radius below 1 is the exact
/// convergence criterion for the affine recursion.
Matrix companion_system(const Matrix& H1, const Matrix& H2, int tau);

/// Convergence bound for tau = 1: min_{i,j} (alpha_ij + L_ii)^{-1},
/// i.e. 1 / (max degree + 1) on a connected graph.
double delta1(const Graph& g);

/// Instability bound for tau = 1: 3 n^2 / ((n+1) tr(L)).
double delta2(const Graph& g);

struct XiSpectrumSearchConfig {
    double width = 1e-3;
    double scan_cap = 2.0;
    int scan_points = 40;
};

/// Grid pre-scan then bisection on xi -> rho(companion(xi)) - 1, returning
/// the smallest crossing. Throws when no crossing exists below scan_cap.
double xi_max_by_spectrum(const QuadraticGame& game, const Graph& graph,
                          int tau, const XiSpectrumSearchConfig& search = {});

/// Matrices of the delay-dependent negativity condition F(tau, xi) < 0.
/// E1, E2 map R^{6n^2} -> R^{4n^2}; D and F are 6n^2 x 6n^2. Only defined
/// for tau >= 3: the third weight -3 tau / (tau^2 - 3 tau + 2) is singular
/// at tau = 2 and the construction is meaningless at tau = 1.
class Theorem1Blocks {
public:
    Theorem1Blocks(Matrix E1, Matrix E2, Matrix D, int tau, double xi, int n);

    const Matrix& E1() const { return E1_; }
    const Matrix& E2() const { return E2_; }
    const Matrix& D() const { return D_; }
    int tau() const { return tau_; }
    double xi() const { return xi_; }
    int n() const { return n_; }
    int dim_q1() const { return 4 * n_ * n_; }
    int dim_q23() const { return 2 * n_ * n_; }

    /// F = E2^T Q1 E2 - E1^T Q1 E1 + diag(Q2, -Q2, 0)
    ///   + D^T diag((tau-1) Q3, Q3/(1-tau), -3 tau Q3/(tau^2-3tau+2)) D,
    /// symmetrized to kill rounding asymmetry.
    Matrix assemble_F(const Matrix& Q1, const Matrix& Q2,
                      const Matrix& Q3) const;

private:
    Matrix E1_, E2_, D_;
    int tau_;
    double xi_;
    int n_;
};

Theorem1Blocks theorem1_blocks(const QuadraticGame& game, const Graph& graph,
                               int tau, double xi);

struct LmiVerdict {
    bool feasible;
    double q_margin;  ///< min over the three Q's of their smallest eigenvalue
    double f_margin;  ///< largest eigenvalue of F (must be < -tol)
};

/// Checks Q1, Q2, Q3 > 0 and F(tau, xi) < 0 at tolerance tol.
LmiVerdict lmi_verify(const Theorem1Blocks& blocks, const Matrix& Q1,
                      const Matrix& Q2, const Matrix& Q3, double tol = 1e-6);

struct LmiCertificate {
    Matrix Q1, Q2, Q3;
    int iterations;
    double f_margin;
};

struct FeasibilitySearchConfig {
    int budget = 5000;          ///< subgradient iterations
    double eig_floor = 1e-4;    ///< eigenvalue floor projected onto the Q's
    double accept_tol = 1e-6;
    double initial_step = 0.5;
    double step_decay = 0.01;   ///< step_k = initial / (1 + decay * k)
};

/// Best-effort search for a certificate: subgradient descent on the largest
/// eigenvalue of F over positive definite Q's, with eigenvalue-floor
/// projection after every step. Deterministic (identity initialization).
/// Returns a certificate only if lmi_verify accepts it; std::nullopt is not
/// a proof of infeasibility.
std::optional<LmiCertificate> feasibility_search(
    const Theorem1Blocks& blocks, const FeasibilitySearchConfig& config = {});

enum class Verdict { converges, diverges, marginal };

std::string to_string(Verdict v);

enum class LmiStatus { feasible, verifier_rejected, search_failed, not_applicable };

std::string to_string(LmiStatus s);

struct StabilityReport {
    double delta1;
    double delta2;
    std::optional<double> rho_H;  ///< tau = 1 only
    double rho_companion;
    Verdict verdict;
    LmiStatus lmi;
    std::optional<LmiCertificate> certificate;
    double xi;
    int tau;
};

/// rho-based verdict with a strict marginal band of half-width tol around 1.
Verdict classify_rho(double rho, double tol = 1e-9);

/// Full analysis for one (xi, tau): bounds, spectral radii, verdict, and the
/// optional LMI feasibility search (tau >= 3 only).
StabilityReport analyze(const QuadraticGame& game, const Graph& graph,
                        double xi, int tau, bool run_lmi_search = false,
                        const FeasibilitySearchConfig& lmi_config = {});

}  // namespace neseek
