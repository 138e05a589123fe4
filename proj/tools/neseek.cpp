#include <CLI11.hpp>

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <thread>

#include "neseek/game.hpp"
#include "neseek/graph.hpp"
#include "neseek/io.hpp"
#include "neseek/presets.hpp"
#include "neseek/seeking.hpp"
#include "neseek/stability.hpp"

namespace {

using namespace neseek;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitDiverged = 2;
constexpr int kExitMarginal = 3;

QuadraticGame resolve_game(const std::string& source, uint64_t seed, int n) {
    if (source == "example1") return example1_game();
    if (source == "example3") return example3_game();
    if (source == "random") {
        std::mt19937_64 rng(seed);
        return random_assumption1_game(rng, n);
    }
    return load_game(source);
}

Graph resolve_graph(const std::string& source, int n_hint, uint64_t seed) {
    // named presets: "wheel:5", "ring:20", ... ; "random:8"
    const auto colon = source.find(':');
    if (colon != std::string::npos) {
        const std::string kind = source.substr(0, colon);
        const int n = std::stoi(source.substr(colon + 1));
        if (kind == "random") {
            std::mt19937_64 rng(seed);
            return random_connected_graph(rng, n);
        }
        return make_graph(graph_kind_from_string(kind), n);
    }
    if (source == "wheel" || source == "ring" || source == "complete" ||
        source == "star")
        return make_graph(graph_kind_from_string(source), n_hint);
    return load_graph(source);
}

std::filesystem::path out_path(const std::string& dir, const std::string& name) {
    std::filesystem::create_directories(dir);
    return std::filesystem::path(dir) / name;
}

struct CommonOpts {
    std::string game = "example1";
    std::string graph = "wheel";
    std::string out_dir = "out";
    double xi = 0.08;
    int tau = 1;
    double delta = 1e-4;
    int max_stages = 5000;
    uint64_t seed = 0;
    int workers = static_cast<int>(std::thread::hardware_concurrency());
    int random_n = 5;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--game", opts.game, "game file or preset {example1|example3|random}");
    cmd->add_option("--graph", opts.graph, "graph file or preset, e.g. wheel:5");
    cmd->add_option("--xi", opts.xi, "learning rate");
    cmd->add_option("--tau", opts.tau, "delay step");
    cmd->add_option("--delta", opts.delta, "termination threshold");
    cmd->add_option("--max-stages", opts.max_stages, "stage cap");
    cmd->add_option("--out", opts.out_dir, "output directory");
    cmd->add_option("--seed", opts.seed, "seed for random presets");
    cmd->add_option("--workers", opts.workers, "sweep worker count");
    cmd->add_option("--n", opts.random_n, "agent count for random presets");
}

int simulate_once(const QuadraticGame& game, const Graph& graph,
                  const SeekingConfig& config, const std::string& csv_path) {
    const Vector s0 = Vector::Ones(game.n());
    const Vector est0 = Vector::Ones(game.n() * game.n());
    Trajectory traj =
        run(game, graph, config, init_state(game, graph, config, s0, est0));
    if (!csv_path.empty()) write_trajectory_csv(csv_path, traj, game.n());

    switch (traj.status) {
        case RunStatus::converged:
            std::cout << "converged: terminal stage " << *traj.terminal_stage
                      << ", final profile error "
                      << traj.records.back().profile_err << "\n";
            return kExitOk;
        case RunStatus::diverged:
            std::cout << "diverged at stage " << traj.records.back().stage
                      << " (blow-up threshold hit)\n";
            return kExitDiverged;
        case RunStatus::max_stages_reached:
            std::cout << "max-stages-reached: final profile error "
                      << traj.records.back().profile_err << "\n";
            return kExitMarginal;
    }
    return kExitError;
}

int cmd_simulate(const CommonOpts& opts) {
    const QuadraticGame game = resolve_game(opts.game, opts.seed, opts.random_n);
    const Graph graph = resolve_graph(opts.graph, game.n(), opts.seed);
    SeekingConfig config;
    config.xi = opts.xi;
    config.tau = opts.tau;
    config.max_stages = opts.max_stages;
    config.termination_delta = opts.delta;
    const auto csv = out_path(opts.out_dir, "trajectory.csv");
    const int code = simulate_once(game, graph, config, csv.string());
    std::cout << "trajectory written to " << csv.string() << "\n";
    return code;
}

int cmd_analyze(const CommonOpts& opts, bool with_lmi) {
    const QuadraticGame game = resolve_game(opts.game, opts.seed, opts.random_n);
    const Graph graph = resolve_graph(opts.graph, game.n(), opts.seed);
    const StabilityReport report =
        analyze(game, graph, opts.xi, opts.tau, with_lmi);
    const auto path = out_path(opts.out_dir, "report.json");
    std::ofstream(path) << report_to_json(report) << '\n';
    std::cout << "delta1 = " << report.delta1 << ", delta2 = " << report.delta2
              << "\nrho(companion) = " << report.rho_companion;
    if (report.rho_H.has_value()) std::cout << " (= rho(H), tau = 1)";
    std::cout << "\nverdict: " << to_string(report.verdict)
              << "\nlmi: " << to_string(report.lmi) << "\nreport written to "
              << path.string() << "\n";
    switch (report.verdict) {
        case Verdict::converges: return kExitOk;
        case Verdict::diverges: return kExitDiverged;
        case Verdict::marginal: return kExitMarginal;
    }
    return kExitError;
}

struct SweepRow {
    double value;
    std::string verdict;
    double rho;
    long terminal_stage;  // -1 when not reached
};

int cmd_sweep(const CommonOpts& opts, const std::string& parameter,
              double lo, double hi, int points) {
    if (points < 1) throw std::runtime_error("sweep needs a nonempty range");
    const QuadraticGame game = resolve_game(opts.game, opts.seed, opts.random_n);
    const Graph graph = resolve_graph(opts.graph, game.n(), opts.seed);

    std::vector<double> grid(static_cast<size_t>(points));
    for (int k = 0; k < points; ++k)
        grid[static_cast<size_t>(k)] =
            points == 1 ? lo : lo + (hi - lo) * k / (points - 1);

    auto eval = [&](double value) -> SweepRow {
        SeekingConfig config;
        config.xi = parameter == "xi" ? value : opts.xi;
        config.tau = parameter == "tau" ? static_cast<int>(std::lround(value))
                                        : opts.tau;
        config.max_stages = opts.max_stages;
        config.termination_delta = opts.delta;
        const AugmentedSystem sys =
            build_augmented(game, graph, config.xi, config.tau);
        const double rho =
            spectral_radius(companion_system(sys.H1, sys.H2, config.tau));
        const Vector s0 = Vector::Ones(game.n());
        const Vector est0 = Vector::Ones(game.n() * game.n());
        const Trajectory traj = run(game, graph, config,
                                    init_state(game, graph, config, s0, est0));
        return SweepRow{value, to_string(traj.status), rho,
                        traj.terminal_stage.value_or(-1)};
    };

    // independent grid points in parallel; a single collector keeps row order
    const int workers = std::max(1, opts.workers);
    std::vector<SweepRow> rows(grid.size());
    std::vector<std::future<void>> futures;
    std::atomic<size_t> next{0};
    for (int w = 0; w < workers; ++w)
        futures.push_back(std::async(std::launch::async, [&] {
            for (size_t k = next.fetch_add(1); k < grid.size();
                 k = next.fetch_add(1))
                rows[k] = eval(grid[k]);
        }));
    for (auto& f : futures) f.get();

    const auto path = out_path(opts.out_dir, "sweep.csv");
    std::ofstream out(path);
    out << parameter << ",verdict,rho,terminal_stage\n" << std::setprecision(17);
    for (const SweepRow& row : rows)
        out << row.value << ',' << row.verdict << ',' << row.rho << ','
            << row.terminal_stage << '\n';
    std::cout << "sweep written to " << path.string() << "\n";
    return kExitOk;
}

int reproduce_example1(const CommonOpts& opts) {
    const QuadraticGame game = example1_game();
    const Graph graph = example1_graph();
    const Vector s_star = nash_equilibrium(game);
    std::cout << "equilibrium: " << s_star.transpose() << "\n";

    int worst = kExitOk;
    for (int tau : {3, 4}) {
        SeekingConfig config;
        config.xi = 0.08;
        config.tau = tau;
        // the tau = 4 instability grows slowly (rho just above 1); give the
        // run enough stages to actually hit the blow-up threshold
        config.max_stages =
            tau == 4 ? std::max(opts.max_stages, 20000) : opts.max_stages;
        config.termination_delta = opts.delta;
        Vector s0(5);
        s0 << -1, -1, -1, 1, 1;
        Vector est0(25);
        for (int i = 0; i < 5; ++i) est0.segment(i * 5, 5) = s0;
        Trajectory traj = run(game, graph, config,
                              init_state(game, graph, config, s0, est0));
        const auto csv = out_path(
            opts.out_dir, "example1_tau" + std::to_string(tau) + ".csv");
        write_trajectory_csv(csv.string(), traj, 5);
        const StabilityReport report = analyze(game, graph, 0.08, tau, tau >= 3);
        std::cout << "tau = " << tau << ": " << to_string(traj.status)
                  << ", rho(companion) = " << report.rho_companion
                  << ", lmi " << to_string(report.lmi) << "\n";
        if (tau == 4 && traj.status != RunStatus::diverged) worst = kExitError;
    }
    return worst;
}

int reproduce_example2(const CommonOpts& opts) {
    const QuadraticGame game = example1_game();
    const Graph graph = example1_graph();
    std::cout << "delta1 = " << delta1(graph) << " (0.2), delta2 = "
              << delta2(graph) << " (25/32)\n";

    SeekingConfig config;
    config.xi = 0.18;
    config.tau = 1;
    config.max_stages = 5000;
    config.termination_delta = 1e-4;
    Vector s0(5);
    s0 << -1, -1, -1, 1, 1;
    Vector est0(25);
    est0.head(15).setConstant(-1.0);
    est0.tail(10).setConstant(1.0);
    Trajectory traj =
        run(game, graph, config, init_state(game, graph, config, s0, est0));
    const auto csv = out_path(opts.out_dir, "example2_tau1.csv");
    write_trajectory_csv(csv.string(), traj, 5);
    std::cout << "xi = 0.18, tau = 1: " << to_string(traj.status);
    if (traj.terminal_stage.has_value())
        std::cout << " at stage " << *traj.terminal_stage;
    std::cout << "\nrho(H(0.18)) = "
              << spectral_radius(build_H(game, graph, 0.18))
              << ", rho(H(0.35)) = "
              << spectral_radius(build_H(game, graph, 0.35)) << "\n";
    const double xm = xi_max_by_spectrum(game, graph, 1);
    std::cout << "xi_max (spectrum) = " << xm << " (instability onset 1/3)\n";
    return traj.status == RunStatus::converged ? kExitOk : kExitError;
}

int reproduce_example3(const CommonOpts& opts) {
    const QuadraticGame game = example3_game();
    const Vector s_star = nash_equilibrium(game);
    double total = 0.0;
    for (int i = 0; i < 20; ++i) total += payoff(game, s_star, i);
    std::cout << "total utility at the equilibrium: " << total << "\n";

    // Case 2: ring graph, tau = 4, xi = 0.2 (divergent); remaining cases are
    // user-configurable through `simulate`.
    const Graph ring = make_graph(GraphKind::ring, 20);
    SeekingConfig config;
    config.xi = 0.2;
    config.tau = 4;
    config.max_stages = 50;
    config.termination_delta = opts.delta;
    const Vector s0 = Vector::Ones(20);
    const Vector est0 = Vector::Ones(400);
    Trajectory traj =
        run(game, ring, config, init_state(game, ring, config, s0, est0));
    const auto csv = out_path(opts.out_dir, "example3_case2.csv");
    write_trajectory_csv(csv.string(), traj, 20);
    std::cout << "case 2 (ring, tau = 4, xi = 0.2): " << to_string(traj.status)
              << " within " << traj.records.back().stage << " stages\n";
    return kExitOk;
}

int reproduce_table1() {
    std::cout << "graph n delta1 delta1_closed delta2 delta2_closed\n";
    bool all_equal = true;
    for (int n = 3; n <= 10; ++n) {
        const double dn = n;
        const struct {
            GraphKind kind;
            double d1;
            double d2;
        } rows[] = {
            {GraphKind::ring, 1.0 / 3.0, 3.0 * dn / (2.0 * (dn + 1.0))},
            {GraphKind::complete, 1.0 / dn, 3.0 * dn / (dn * dn - 1.0)},
            {GraphKind::star, 1.0 / dn, 3.0 * dn * dn / (2.0 * (dn * dn - 1.0))},
            {GraphKind::wheel, 1.0 / dn, 3.0 * dn * dn / (4.0 * (dn * dn - 1.0))},
        };
        for (const auto& row : rows) {
            // no wheel exists on 3 nodes (its rim must be a ring)
            if (row.kind == GraphKind::wheel && n < 4) continue;
            const Graph g = make_graph(row.kind, n);
            const double d1 = delta1(g);
            const double d2 = delta2(g);
            std::cout << to_string(row.kind) << ' ' << n << ' ' << d1 << ' '
                      << row.d1 << ' ' << d2 << ' ' << row.d2 << '\n';
            if (std::abs(d1 - row.d1) > 1e-14 * std::abs(row.d1) ||
                std::abs(d2 - row.d2) > 1e-14 * std::abs(row.d2))
                all_equal = false;
        }
    }
    std::cout << (all_equal ? "all closed forms match\n"
                            : "MISMATCH against closed forms\n");
    return all_equal ? kExitOk : kExitError;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Nash-equilibrium seeking under delayed information exchange"};
    app.require_subcommand(1);

    CommonOpts opts;
    auto* simulate = app.add_subcommand("simulate", "run the seeking dynamics");
    add_common(simulate, opts);

    bool with_lmi = false;
    auto* analyze_cmd = app.add_subcommand("analyze", "stability report");
    add_common(analyze_cmd, opts);
    analyze_cmd->add_flag("--lmi", with_lmi, "run the LMI feasibility search (tau >= 3)");

    std::string sweep_param = "xi";
    double sweep_lo = 0.05, sweep_hi = 1.0;
    int sweep_points = 20;
    auto* sweep = app.add_subcommand("sweep", "grid sweep over xi or tau");
    add_common(sweep, opts);
    sweep->add_option("--parameter", sweep_param, "xi or tau");
    sweep->add_option("--lo", sweep_lo, "range start");
    sweep->add_option("--hi", sweep_hi, "range end");
    sweep->add_option("--points", sweep_points, "grid size");

    std::string what;
    auto* reproduce = app.add_subcommand("reproduce", "rebuild a reference scenario");
    add_common(reproduce, opts);
    reproduce->add_option("target", what, "example1|example2|example3|table1")
        ->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (simulate->parsed()) return cmd_simulate(opts);
        if (analyze_cmd->parsed()) return cmd_analyze(opts, with_lmi);
        if (sweep->parsed())
            return cmd_sweep(opts, sweep_param, sweep_lo, sweep_hi, sweep_points);
        if (reproduce->parsed()) {
            if (what == "example1") return reproduce_example1(opts);
            if (what == "example2") return reproduce_example2(opts);
            if (what == "example3") return reproduce_example3(opts);
            if (what == "table1") return reproduce_table1();
            std::cerr << "unknown reproduce target: " << what << "\n";
            return kExitError;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}
