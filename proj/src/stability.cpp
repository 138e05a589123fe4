#include "neseek/stability.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <cstdlib>

namespace neseek {

namespace {

Matrix ones_kron(const Matrix& block, int copies) {
    Matrix out(block.rows() * copies, block.cols());
    for (int k = 0; k < copies; ++k)
        out.block(k * block.rows(), 0, block.rows(), block.cols()) = block;
    return out;
}

}  // namespace

AugmentedSystem build_augmented(const QuadraticGame& game, const Graph& graph,
                                double xi, int tau) {
    if (xi < 0.0) throw std::invalid_argument("xi must be nonnegative");
    if (tau < 1) throw std::invalid_argument("tau must be >= 1");
    if (graph.n != game.n())
        throw std::invalid_argument("graph and game disagree on agent count");
    const int n = game.n();
    const int dim = n * n;
    const GameMatrices gm = build_matrices(game);
    const EstimationMatrices em = build_estimation_matrices(graph);

    AugmentedSystem sys;
    sys.tau = tau;
    sys.H1 = Matrix::Zero(2 * dim, 2 * dim);
    sys.H1.topRightCorner(dim, dim) = ones_kron(gm.N, n);
    sys.H1.bottomRightCorner(dim, dim) = Matrix::Identity(dim, dim);
    sys.H2 = Matrix::Zero(2 * dim, 2 * dim);
    sys.H2.bottomLeftCorner(dim, dim) = xi * em.B;
    sys.H2.bottomRightCorner(dim, dim) = xi * em.P;
    sys.c_bar = Vector::Zero(2 * dim);
    for (int k = 0; k < n; ++k) sys.c_bar.segment(k * n, n) = gm.c;
    return sys;
}

Matrix build_H(const QuadraticGame& game, const Graph& graph, double xi) {
    const AugmentedSystem sys = build_augmented(game, graph, xi, 1);
    return sys.H1 + sys.H2;
}

int eigensolver_dimension_cap() {
    if (const char* env = std::getenv("NESEEK_EIG_DIM_CAP")) {
        const int cap = std::atoi(env);
        if (cap > 0) return cap;
    }
    return 8000;
}

double spectral_radius(const Matrix& m) {
    if (m.rows() != m.cols())
        throw std::invalid_argument("spectral_radius needs a square matrix");
    if (m.rows() > eigensolver_dimension_cap())
        throw std::invalid_argument(
            "matrix dimension " + std::to_string(m.rows()) +
            " exceeds the eigensolver cap " +
            std::to_string(eigensolver_dimension_cap()));
    Eigen::EigenSolver<Matrix> solver(m, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("dense eigensolver failed to converge");
    return solver.eigenvalues().cwiseAbs().maxCoeff();
}

Matrix companion_system(const Matrix& H1, const Matrix& H2, int tau) {
    if (tau < 1) throw std::invalid_argument("tau must be >= 1");
    if (H1.rows() != H1.cols() || H2.rows() != H2.cols() ||
        H1.rows() != H2.rows())
        throw std::invalid_argument("H1 and H2 must be square and same size");
    const Eigen::Index m = H1.rows();
    if (m * tau > eigensolver_dimension_cap())
        throw std::invalid_argument("companion dimension exceeds the cap");
    if (tau == 1) return H1 + H2;
    Matrix C = Matrix::Zero(m * tau, m * tau);
    C.topLeftCorner(m, m) = H1;
    C.topRightCorner(m, m) += H2;
    for (int k = 1; k < tau; ++k)
        C.block(k * m, (k - 1) * m, m, m) = Matrix::Identity(m, m);
    return C;
}

double delta1(const Graph& g) {
    if (!is_connected(g))
        throw std::invalid_argument("delta1 needs a connected graph");
    const Matrix L = laplacian(g);
    double worst = 0.0;
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j)
            worst = std::max(worst, static_cast<double>(g.adj(i, j)) + L(i, i));
    return 1.0 / worst;
}

double delta2(const Graph& g) {
    if (!is_connected(g))
        throw std::invalid_argument("delta2 needs a connected graph");
    const double trace = laplacian(g).trace();
    const double n = static_cast<double>(g.n);
    return 3.0 * n * n / ((n + 1.0) * trace);
}

double xi_max_by_spectrum(const QuadraticGame& game, const Graph& graph,
                          int tau, const XiSpectrumSearchConfig& search) {
    if (!game.assumption1_certified())
        throw std::invalid_argument("xi search needs an Assumption-1 game");
    auto rho_at = [&](double xi) {
        const AugmentedSystem sys = build_augmented(game, graph, xi, tau);
        return spectral_radius(companion_system(sys.H1, sys.H2, tau));
    };

    double lo = 0.0;
    double hi = -1.0;
    for (int k = 1; k <= search.scan_points; ++k) {
        const double xi = search.scan_cap * k / search.scan_points;
        if (rho_at(xi) > 1.0) {
            hi = xi;
            break;
        }
        lo = xi;
    }
    if (hi < 0.0)
        throw std::runtime_error(
            "no spectral-radius crossing found below the scan cap");

    while (hi - lo > search.width) {
        const double mid = 0.5 * (lo + hi);
        if (rho_at(mid) < 1.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

Theorem1Blocks::Theorem1Blocks(Matrix E1, Matrix E2, Matrix D, int tau,
                               double xi, int n)
    : E1_(std::move(E1)), E2_(std::move(E2)), D_(std::move(D)), tau_(tau),
      xi_(xi), n_(n) {}

Matrix Theorem1Blocks::assemble_F(const Matrix& Q1, const Matrix& Q2,
                                  const Matrix& Q3) const {
    const int m = 2 * n_ * n_;
    if (Q1.rows() != 2 * m || Q1.cols() != 2 * m)
        throw std::invalid_argument("Q1 must be 4n^2 x 4n^2");
    if (Q2.rows() != m || Q2.cols() != m || Q3.rows() != m || Q3.cols() != m)
        throw std::invalid_argument("Q2 and Q3 must be 2n^2 x 2n^2");

    const double tau = static_cast<double>(tau_);
    const double w1 = tau - 1.0;
    const double w2 = 1.0 / (1.0 - tau);
    const double w3 = -3.0 * tau / (tau * tau - 3.0 * tau + 2.0);

    Matrix F = E2_.transpose() * Q1 * E2_ - E1_.transpose() * Q1 * E1_;
    F.topLeftCorner(m, m) += Q2;
    F.block(m, m, m, m) -= Q2;
    Matrix WD(3 * m, 3 * m);
    WD.setZero();
    WD.topLeftCorner(m, m) = w1 * Q3;
    WD.block(m, m, m, m) = w2 * Q3;
    WD.bottomRightCorner(m, m) = w3 * Q3;
    F += D_.transpose() * WD * D_;
    return 0.5 * (F + F.transpose());
}

Theorem1Blocks theorem1_blocks(const QuadraticGame& game, const Graph& graph,
                               int tau, double xi) {
    if (tau < 3)
        throw std::invalid_argument(
            "theorem1_blocks is defined for tau >= 3: the summation weights "
            "are singular at tau = 2 and undefined at tau = 1");
    if (!(xi > 0.0)) throw std::invalid_argument("xi must be positive");
    const AugmentedSystem sys = build_augmented(game, graph, xi, tau);
    const Eigen::Index m = sys.H1.rows();
    const Matrix I = Matrix::Identity(m, m);
    const Matrix Z = Matrix::Zero(m, m);

    Matrix E1(2 * m, 3 * m);
    E1 << I, Z, Z, -I, Z, I;
    Matrix E2(2 * m, 3 * m);
    E2 << sys.H1, sys.H2, Z, Z, -I, I;
    Matrix D(3 * m, 3 * m);
    D << sys.H1 - I, sys.H2, Z, I, -I, Z, I, I,
        -(2.0 / static_cast<double>(tau)) * I;
    return Theorem1Blocks(std::move(E1), std::move(E2), std::move(D), tau, xi,
                          game.n());
}

LmiVerdict lmi_verify(const Theorem1Blocks& blocks, const Matrix& Q1,
                      const Matrix& Q2, const Matrix& Q3, double tol) {
    auto min_eig = [](const Matrix& Q) {
        Eigen::SelfAdjointEigenSolver<Matrix> es(Q,
                                                 Eigen::EigenvaluesOnly);
        return es.eigenvalues().minCoeff();
    };
    LmiVerdict verdict;
    verdict.q_margin =
        std::min({min_eig(Q1), min_eig(Q2), min_eig(Q3)});
    const Matrix F = blocks.assemble_F(Q1, Q2, Q3);
    Eigen::SelfAdjointEigenSolver<Matrix> es(F, Eigen::EigenvaluesOnly);
    verdict.f_margin = es.eigenvalues().maxCoeff();
    verdict.feasible = verdict.q_margin > tol && verdict.f_margin < -tol;
    return verdict;
}

std::optional<LmiCertificate> feasibility_search(
    const Theorem1Blocks& blocks, const FeasibilitySearchConfig& config) {
    const int m = blocks.dim_q23();
    const double tau = static_cast<double>(blocks.tau());
    const double w1 = tau - 1.0;
    const double w2 = 1.0 / (1.0 - tau);
    const double w3 = -3.0 * tau / (tau * tau - 3.0 * tau + 2.0);

    Matrix Q1 = Matrix::Identity(2 * m, 2 * m);
    Matrix Q2 = Matrix::Identity(m, m);
    Matrix Q3 = Matrix::Identity(m, m);

    auto project = [&](Matrix& Q) {
        Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (Q + Q.transpose()));
        Vector lam = es.eigenvalues().cwiseMax(config.eig_floor);
        Q = es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().transpose();
    };

    for (int it = 0; it < config.budget; ++it) {
        const Matrix F = blocks.assemble_F(Q1, Q2, Q3);
        Eigen::SelfAdjointEigenSolver<Matrix> es(F);
        const double f_max = es.eigenvalues().maxCoeff();
        if (f_max < -config.accept_tol) {
            const LmiVerdict check =
                lmi_verify(blocks, Q1, Q2, Q3, config.accept_tol);
            if (check.feasible)
                return LmiCertificate{Q1, Q2, Q3, it, check.f_margin};
        }

        // Subgradient of lambda_max(F) at the top eigenvector.
        const Vector u = es.eigenvectors().col(es.eigenvectors().cols() - 1);
        const Vector e1u = blocks.E1() * u;
        const Vector e2u = blocks.E2() * u;
        const Vector du = blocks.D() * u;
        const double step =
            config.initial_step / (1.0 + config.step_decay * it);

        Q1.noalias() -= step * (e2u * e2u.transpose());
        Q1.noalias() += step * (e1u * e1u.transpose());
        Q2.noalias() -= step * (u.head(m) * u.head(m).transpose());
        Q2.noalias() += step * (u.segment(m, m) * u.segment(m, m).transpose());
        Q3.noalias() -= step * w1 * (du.head(m) * du.head(m).transpose());
        Q3.noalias() -= step * w2 * (du.segment(m, m) * du.segment(m, m).transpose());
        Q3.noalias() -= step * w3 * (du.tail(m) * du.tail(m).transpose());

        project(Q1);
        project(Q2);
        project(Q3);

        // F is homogeneous in the Q's; keep them at unit scale.
        const double scale = Q1.trace() / static_cast<double>(2 * m);
        if (scale > 10.0 || scale < 0.1) {
            Q1 /= scale;
            Q2 /= scale;
            Q3 /= scale;
        }
    }
    return std::nullopt;
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::converges: return "converges";
        case Verdict::diverges: return "diverges";
        case Verdict::marginal: return "marginal";
    }
    return "unknown";
}

std::string to_string(LmiStatus s) {
    switch (s) {
        case LmiStatus::feasible: return "feasible";
        case LmiStatus::verifier_rejected: return "verifier-rejected";
        case LmiStatus::search_failed: return "search-failed";
        case LmiStatus::not_applicable: return "not-applicable";
    }
    return "unknown";
}

Verdict classify_rho(double rho, double tol) {
    if (rho < 1.0 - tol) return Verdict::converges;
    if (rho > 1.0 + tol) return Verdict::diverges;
    return Verdict::marginal;
}

StabilityReport analyze(const QuadraticGame& game, const Graph& graph,
                        double xi, int tau, bool run_lmi_search,
                        const FeasibilitySearchConfig& lmi_config) {
    StabilityReport report;
    report.xi = xi;
    report.tau = tau;
    report.delta1 = delta1(graph);
    report.delta2 = delta2(graph);

    const AugmentedSystem sys = build_augmented(game, graph, xi, tau);
    report.rho_companion =
        spectral_radius(companion_system(sys.H1, sys.H2, tau));
    report.rho_H = tau == 1 ? std::optional<double>(report.rho_companion)
                            : std::nullopt;
    report.verdict = classify_rho(report.rho_companion);

    if (tau < 3 || !run_lmi_search) {
        report.lmi = LmiStatus::not_applicable;
        return report;
    }
    const Theorem1Blocks blocks = theorem1_blocks(game, graph, tau, xi);
    auto cert = feasibility_search(blocks, lmi_config);
    if (cert.has_value()) {
        report.lmi = LmiStatus::feasible;
        report.certificate = std::move(cert);
    } else {
        report.lmi = LmiStatus::search_failed;
    }
    return report;
}

}  // namespace neseek
