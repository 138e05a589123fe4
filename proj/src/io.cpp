#include "neseek/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

namespace neseek {

namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

Vector to_vector(const json& arr) {
    Vector v(arr.size());
    for (size_t i = 0; i < arr.size(); ++i) v(static_cast<int>(i)) = arr[i];
    return v;
}

json from_vector(const Vector& v) {
    json arr = json::array();
    for (int i = 0; i < v.size(); ++i) arr.push_back(v(i));
    return arr;
}

}  // namespace

QuadraticGame parse_game(const std::string& text) {
    json doc = json::parse(text);
    const int n = doc.at("n");
    if (n < 1) throw std::runtime_error("game file: n must be positive");

    if (doc.contains("diag")) {
        const Vector diag = to_vector(doc.at("diag"));
        const Vector off = to_vector(doc.at("offdiag"));
        const Vector b_common = to_vector(doc.at("b_common"));
        if (diag.size() != n || off.size() != n || b_common.size() != n)
            throw std::runtime_error("game file: generator fields must have length n");
        std::vector<Matrix> A;
        std::vector<Vector> b;
        for (int i = 0; i < n; ++i) {
            Matrix Ai = Matrix::Constant(n, n, off(i));
            Ai.diagonal().setZero();
            Ai(i, i) = diag(i);
            A.push_back(std::move(Ai));
            b.push_back(b_common);
        }
        return QuadraticGame(std::move(A), std::move(b));
    }

    const json& amats = doc.at("A");
    const json& bvecs = doc.at("b");
    if (static_cast<int>(amats.size()) != n || static_cast<int>(bvecs.size()) != n)
        throw std::runtime_error("game file: A and b must list n entries");
    std::vector<Matrix> A;
    std::vector<Vector> b;
    for (int i = 0; i < n; ++i) {
        const json& rows = amats[static_cast<size_t>(i)];
        if (static_cast<int>(rows.size()) != n)
            throw std::runtime_error("game file: A_i must have n rows");
        Matrix Ai(n, n);
        for (int r = 0; r < n; ++r) {
            const json& row = rows[static_cast<size_t>(r)];
            if (static_cast<int>(row.size()) != n)
                throw std::runtime_error("game file: A_i rows must have n entries");
            for (int c = 0; c < n; ++c) Ai(r, c) = row[static_cast<size_t>(c)];
        }
        A.push_back(std::move(Ai));
        b.push_back(to_vector(bvecs[static_cast<size_t>(i)]));
    }
    Vector g;
    if (doc.contains("g")) g = to_vector(doc.at("g"));
    return QuadraticGame(std::move(A), std::move(b), std::move(g));
}

QuadraticGame load_game(const std::string& path) {
    return parse_game(read_file(path));
}

std::string game_to_json(const QuadraticGame& game) {
    json doc;
    const int n = game.n();
    doc["n"] = n;
    json amats = json::array();
    json bvecs = json::array();
    json g = json::array();
    for (int i = 0; i < n; ++i) {
        json rows = json::array();
        for (int r = 0; r < n; ++r) {
            json row = json::array();
            for (int c = 0; c < n; ++c) row.push_back(game.A(i)(r, c));
            rows.push_back(row);
        }
        amats.push_back(rows);
        bvecs.push_back(from_vector(game.b(i)));
        g.push_back(game.g(i));
    }
    doc["A"] = amats;
    doc["b"] = bvecs;
    doc["g"] = g;
    return doc.dump(2);
}

void save_game(const QuadraticGame& game, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << game_to_json(game) << '\n';
}

Graph parse_graph(const std::string& text) {
    json doc = json::parse(text);
    const int n = doc.at("n");
    if (doc.contains("kind")) {
        const GraphKind kind = graph_kind_from_string(doc.at("kind"));
        if (kind == GraphKind::custom)
            throw std::runtime_error("graph file: custom kind requires edges");
        return make_graph(kind, n);
    }
    std::vector<std::pair<int, int>> edges;
    for (const auto& e : doc.at("edges")) {
        if (e.size() != 2) throw std::runtime_error("graph file: bad edge");
        // 1-based in the file
        edges.emplace_back(static_cast<int>(e[0]) - 1,
                           static_cast<int>(e[1]) - 1);
    }
    return make_graph(GraphKind::custom, n, edges);
}

Graph load_graph(const std::string& path) {
    return parse_graph(read_file(path));
}

std::string graph_to_json(const Graph& g) {
    json doc;
    doc["n"] = g.n;
    json edges = json::array();
    for (int a = 0; a < g.n; ++a)
        for (int b = a + 1; b < g.n; ++b)
            if (g.adj(a, b) != 0) edges.push_back(json::array({a + 1, b + 1}));
    doc["edges"] = edges;
    return doc.dump(2);
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj, int n) {
    const bool with_est =
        !traj.records.empty() &&
        std::any_of(traj.records.begin(), traj.records.end(),
                    [](const StageRecord& r) { return r.estimation.has_value(); });
    out << "stage";
    for (int i = 1; i <= n; ++i) out << ",s_" << i;
    for (int i = 1; i <= n; ++i) out << ",err_" << i;
    out << ",profile_err,utility_err";
    if (with_est)
        for (int i = 1; i <= n; ++i)
            for (int j = 1; j <= n; ++j) out << ",est_" << i << "_" << j;
    out << '\n';

    out << std::setprecision(17);
    for (const StageRecord& rec : traj.records) {
        out << rec.stage;
        for (int i = 0; i < n; ++i) out << ',' << rec.s(i);
        for (int i = 0; i < n; ++i) out << ',' << rec.per_agent_err(i);
        out << ',' << rec.profile_err << ',' << rec.utility_err;
        if (with_est) {
            for (int k = 0; k < n * n; ++k)
                out << ','
                    << (rec.estimation.has_value() ? (*rec.estimation)(k)
                                                   : std::nan(""));
        }
        out << '\n';
    }
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj,
                          int n) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    write_trajectory_csv(out, traj, n);
}

std::string report_to_json(const StabilityReport& report) {
    json doc;
    doc["xi"] = report.xi;
    doc["tau"] = report.tau;
    doc["delta1"] = report.delta1;
    doc["delta2"] = report.delta2;
    if (report.rho_H.has_value()) doc["rho_H"] = *report.rho_H;
    doc["rho_companion"] = report.rho_companion;
    doc["verdict"] = to_string(report.verdict);
    doc["lmi"] = to_string(report.lmi);
    if (report.certificate.has_value()) {
        auto dump = [](const Matrix& Q) {
            json rows = json::array();
            for (int r = 0; r < Q.rows(); ++r) {
                json row = json::array();
                for (int c = 0; c < Q.cols(); ++c) row.push_back(Q(r, c));
                rows.push_back(row);
            }
            return rows;
        };
        json cert;
        cert["iterations"] = report.certificate->iterations;
        cert["f_margin"] = report.certificate->f_margin;
        cert["Q1"] = dump(report.certificate->Q1);
        cert["Q2"] = dump(report.certificate->Q2);
        cert["Q3"] = dump(report.certificate->Q3);
        doc["certificate"] = cert;
    }
    return doc.dump(2);
}

}  // namespace neseek
