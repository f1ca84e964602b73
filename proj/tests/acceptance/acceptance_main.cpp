// Acceptance gate: one PASS/FAIL line per criterion, non-zero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "icecast/icecast.hpp"
#include "icecast_cli/cli.hpp"
#include "joint_gaussian_oracle.hpp"
#include "numeric_oracles.hpp"
#include "route_oracle.hpp"
#include "temp_dir.hpp"

namespace fs = std::filesystem;
using namespace icecast;

namespace {

const fs::path kData = ICECAST_TEST_DATA_DIR;

// A check returns an empty string on success, otherwise the first mismatch.
using Check = std::function<std::string()>;

std::string cli(const std::vector<std::string>& args, int* code = nullptr) {
    std::ostringstream out, err;
    const int rc = cli::run(args, out, err);
    if (code) *code = rc;
    if (rc != 0 && !code) throw std::runtime_error("icecast " + args.front() + " exited " + std::to_string(rc) + ": " + err.str());
    return out.str();
}

FilterState scalar_state(double m, double P) {
    return {Eigen::VectorXd::Constant(1, m), Eigen::MatrixXd::Constant(1, 1, P), -1};
}

StateSpaceModel level(double q, double r) {
    const double comps[] = {q};
    return build_model(ModelKind::Level).with_variances(comps, r);
}

std::string c1_fixture_grid_and_store() {
    const GridModel grid = paper_fixture_grid();
    const std::vector<std::pair<int, int>> coords{{50, 80}, {135, 85}, {173, 95}, {193, 132}};
    if (grid.points().size() != 4) return "grid has " + std::to_string(grid.points().size()) + " points";
    for (std::size_t i = 0; i < 4; ++i) {
        const GridPoint& p = grid.points()[i];
        if (p.gx != coords[i].first || p.gy != coords[i].second || p.cell_area_km2 != 25.0)
            return "point " + std::to_string(p.id) + " differs";
    }

    const std::string source = test::slurp(kData / "fixture.obs");
    test::TempDir dir;
    fs::copy(kData / "fixture_store", dir / "bundled");
    const std::string bundled = (dir / "bundled").string();
    const std::string fresh = (dir / "fresh").string();
    std::string all = "#obs v1\n";
    for (PointId id = 1; id <= 4; ++id) {
        const std::string q = cli({"--store", bundled, "query", "--point", std::to_string(id)});
        const auto records = parse_records(q);
        if (records.size() != 602 || format_timestamp(records.front().timestamp) != "2012-01-01T00:00:00Z" ||
            format_timestamp(records.back().timestamp) != "2013-08-24T00:00:00Z")
            return "point " + std::to_string(id) + " does not span 2012-01-01..2013-08-24";
        all += q.substr(q.find('\n') + 1);
        test::spit(dir / "q.obs", q);
        cli({"--store", fresh, "ingest", (dir / "q.obs").string()});
        if (cli({"--store", fresh, "query", "--point", std::to_string(id)}) != q)
            return "re-ingested query differs for point " + std::to_string(id);
    }
    return all == source ? "" : "queried store differs from the bundled source file";
}

std::string c2_oracle_equivalence() {
    std::mt19937_64 rng(20240601);
    std::uniform_real_distribution<double> u(-1.0, 1.0), var(0.05, 1.0);
    std::uniform_int_distribution<int> dim(1, 3), len(1, 5);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = dim(rng);
        Eigen::MatrixXd F(n, n), A(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) F(i, j) = 0.6 * u(rng);
        Eigen::RowVectorXd H(n);
        for (int i = 0; i < n; ++i) H(i) = u(rng);
        H(0) = 1.0;
        Eigen::VectorXd q(n);
        for (int i = 0; i < n; ++i) q(i) = var(rng);
        const auto model = make_custom_model(F, H, q, var(rng));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) A(i, j) = u(rng);
        FilterState init{Eigen::VectorXd(n), A * A.transpose() + 0.1 * Eigen::MatrixXd::Identity(n, n), -1};
        for (int i = 0; i < n; ++i) init.m(i) = u(rng);
        std::vector<std::optional<double>> ys(static_cast<std::size_t>(len(rng)));
        for (auto& y : ys)
            if (u(rng) > -0.6) y = u(rng);

        const auto res = kf_filter(ys, model, init);
        const auto sm = kf_smooth(res, model);
        const test::JointGaussianOracle oracle(F, H, q, model.r, init.m, init.P, ys);
        const std::string where = "configuration " + std::to_string(trial);
        if (!(std::abs(res.log_likelihood - oracle.log_likelihood()) <= 1e-9)) return where + ": log-likelihood";
        for (std::size_t t = 0; t < ys.size(); ++t) {
            if (!((res.filtered[t].m - oracle.conditional_mean(t, t)).cwiseAbs().maxCoeff() <= 1e-9))
                return where + ": filtered mean";
            if (!((sm[t].m - oracle.conditional_mean(t, ys.size() - 1)).cwiseAbs().maxCoeff() <= 1e-9))
                return where + ": smoothed mean";
        }
    }
    return "";
}

std::string c3_one_step_update() {
    using test::Fraction;
    const Fraction m{1, 2}, P{1, 20}, R{1, 50}, y{7, 10};
    const Fraction K = P / (P + R);
    const Fraction m_post = m + K * (y - m);
    const Fraction P_post = (Fraction{1} - K) * P;
    if (!(K == Fraction(5, 7) && m_post == Fraction(9, 14) && P_post == Fraction(1, 70))) return "rational oracle";
    const auto u = kf_update(scalar_state(0.5, 0.05), level(0.0, 0.02), 0.7);
    const double gain = 0.05 / u.innovation_variance;
    if (!(std::abs(gain - K.value()) <= 1e-12)) return "gain";
    if (!(std::abs(u.state.m(0) - m_post.value()) <= 1e-12)) return "posterior mean";
    if (!(std::abs(u.state.P(0, 0) - P_post.value()) <= 1e-12)) return "posterior variance";
    return "";
}

std::string c4_fit_sanity() {
    const auto truth = level(1e-4, 1e-3);
    DailySeries series;
    series.start = parse_day("2012-01-01");
    for (double y : simulate(truth, make_initial_state(truth, 0.5), 2000, 42)) series.values.emplace_back(y);
    const FitResult res = fit(series, ModelKind::Level);
    const double at_truth = series_log_likelihood(series, truth);
    if (!(res.log_likelihood >= at_truth - 1e-6))
        return "fitted " + format_sig9(res.log_likelihood) + " < generating " + format_sig9(at_truth);
    for (std::size_t i = 1; i < res.trace.size(); ++i)
        if (res.trace[i] < res.trace[i - 1]) return "trace decreases at iteration " + std::to_string(i);
    return "";
}

std::string c5_gap_variance() {
    const double P = 0.013, Q = 0.0021;
    const auto model = level(Q, 0.004);
    for (int g = 1; g <= 50; ++g) {
        const std::vector<std::optional<double>> ys(static_cast<std::size_t>(g));
        const auto res = kf_filter(ys, model, scalar_state(0.6, P));
        if (!(std::abs(res.predicted.back().P(0, 0) - (P + g * Q)) <= 1e-12)) return "gap " + std::to_string(g);
        const auto fc = forecast(scalar_state(0.6, P), model, g);
        if (!(std::abs(fc.back().variance - (P + g * Q + 0.004)) <= 1e-12))
            return "forecast gap " + std::to_string(g);
    }
    return "";
}

std::string c6_hazard_math() {
    auto fc = [](double mean, double variance) { return Forecast{1, mean, variance, mean}; };
    for (double c : {0.1, 0.5, 0.7, 0.9})
        if (cell_hazard(fc(c, 0.02), c) != 0.5) return "mean at threshold is not 0.5";
    const double oracle = test::normal_tail_by_quadrature(0.8, 0.1, 0.9);
    if (!(std::abs(cell_hazard(fc(0.8, 0.01), 0.9) - oracle) <= 1e-9)) return "tail probability vs quadrature";
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> mean(-0.5, 1.5), sd(0.0, 0.5), thr(0.01, 0.99), step(0.0, 0.2);
    for (int i = 0; i < 10000; ++i) {
        const double m = mean(rng), s = sd(rng), c = thr(rng), d = step(rng);
        const double p = cell_hazard(fc(m, s * s), c);
        if (!(p >= 0.0 && p <= 1.0)) return "probability out of range";
        if (cell_hazard(fc(m + d, s * s), c) < p) return "not increasing in mean";
        if (c + d < 1.0 && cell_hazard(fc(m, s * s), c + d) > p) return "not decreasing in threshold";
        if (m < c && cell_hazard(fc(m, (s + d) * (s + d)), c) < p) return "not increasing in spread below threshold";
    }
    return "";
}

std::string c7_route_optimality() {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int w = 1; w <= 4; ++w) {
        for (int h = 1; h <= 4; ++h) {
            const GridModel grid = make_mesh(w, h);
            for (int seed = 0; seed < 100; ++seed) {
                std::mt19937_64 rng(static_cast<std::uint64_t>(seed * 16 + (w - 1) * 4 + (h - 1)));
                RiskField field;
                for (const auto& p : grid.points()) {
                    // Some exact zeros and ones exercise the tie-break and the cap.
                    const double roll = u(rng);
                    const double prob = roll < 0.1 ? 0.0 : roll > 0.97 ? 1.0 : u(rng);
                    field.cells[p.id] = {p.id, prob, classify_hazard(prob)};
                }
                for (const auto& s : grid.points()) {
                    for (const auto& [goal, best] : test::enumerate_best_paths(grid, field, s.id)) {
                        const Route r = best_route(grid, field, s.id, goal);
                        const std::string where = std::to_string(w) + "x" + std::to_string(h) + " seed " +
                                                  std::to_string(seed) + " " + std::to_string(s.id) + "->" +
                                                  std::to_string(goal);
                        if (r.cells != best.cells) return where + ": path differs";
                        if (!(std::abs(r.survival - best.survival) <= 1e-12)) return where + ": survival";
                    }
                }
            }
        }
    }
    return "";
}

std::string c8_store_integrity() {
    test::TempDir dir;
    const fs::path root = dir / "store";
    {
        Store store = Store::open(root);
        for (int batch = 0; batch < 2; ++batch) {
            std::vector<IceObservation> recs;
            for (int t = 0; t < 6; ++t)
                recs.push_back({static_cast<PointId>(batch + 1), Instant(parse_day("2012-01-01") + std::chrono::days(t)),
                                0.1 + 0.125 * t, ""});
            store.append_records(recs);
        }
    }
    std::vector<fs::path> segments;
    for (const auto& e : fs::directory_iterator(root))
        if (e.path().extension() == ".ice") segments.push_back(e.path());
    std::sort(segments.begin(), segments.end());
    if (segments.size() != 2) return "expected two segments";
    if (!verify_store(root).clean()) return "pristine store reported dirty";

    for (const fs::path& seg : segments) {
        const std::string original = test::slurp(seg);
        std::size_t line = 1;
        for (std::size_t i = 0; i < original.size(); ++i) {
            for (unsigned char mask : {0x01, 0x20, 0xff}) {
                std::string text = original;
                text[i] = static_cast<char>(static_cast<unsigned char>(text[i]) ^ mask);
                test::spit(seg, text);
                const IntegrityReport rep = verify_store(root);
                const std::string where = seg.filename().string() + " byte " + std::to_string(i);
                if (rep.failures.empty()) return where + ": not detected";
                for (const auto& f : rep.failures)
                    if (f.file != seg || f.line != line)
                        return where + ": reported " + f.file.filename().string() + ":" + std::to_string(f.line) +
                               ", expected line " + std::to_string(line);
            }
            if (original[i] == '\n') ++line;
        }
        test::spit(seg, original);
    }
    return verify_store(root).clean() ? "" : "restored store reported dirty";
}

std::vector<std::string> pipeline_run(const fs::path& dir) {
    const std::string grid = (dir / "mesh.grid").string();
    test::spit(grid, serialize_grid(make_mesh(3, 3)));
    const std::string store = (dir / "store").string();
    cli({"synth", "--seed", "99", "--days", "240", "--point", "1,2,3,4,5,6,7,8,9", "--seasonal", "1", "--period",
         "120", "--level", "0.55", "--amplitude", "0.3", "--out", (dir / "synth.obs").string()});
    cli({"--store", store, "ingest", (dir / "synth.obs").string()});
    cli({"--store", store, "--grid", grid, "fit", "--seasonal", "1", "--period", "120", "--out",
         (dir / "models.icemodel").string()});
    cli({"forecast", "--model", (dir / "models.icemodel").string(), "--horizon", "14", "--out",
         (dir / "forecast.txt").string()});
    cli({"--grid", grid, "risk", "--model", (dir / "models.icemodel").string(), "--horizon", "14", "--out",
         (dir / "risk.txt").string()});
    test::spit(dir / "route.txt",
               cli({"--grid", grid, "route", "--riskfield", (dir / "risk.txt").string(), "--start", "1", "--goal", "9"}));
    std::vector<std::string> files;
    for (const char* name : {"synth.obs", "models.icemodel", "forecast.txt", "risk.txt", "route.txt"})
        files.push_back(test::slurp(dir / name));
    files.push_back(test::slurp(dir / "store" / "seg-000001.ice"));
    return files;
}

std::string c9_end_to_end_determinism() {
    test::TempDir a, b;
    const auto first = pipeline_run(a.path());
    const auto second = pipeline_run(b.path());
    const char* names[] = {"synth.obs", "models.icemodel", "forecast.txt", "risk.txt", "route.txt", "segment"};
    for (std::size_t i = 0; i < first.size(); ++i) {
        if (first[i].empty()) return std::string(names[i]) + " is empty";
        if (first[i] != second[i]) return std::string(names[i]) + " differs between runs";
    }
    return "";
}

struct Criterion {
    int number;
    const char* name;
    double limit_seconds;  // 0 means no runtime bound
    Check check;
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "fixture grid and store", 1.0, c1_fixture_grid_and_store},
        {2, "Kalman oracle equivalence", 10.0, c2_oracle_equivalence},
        {3, "one-step update exactness", 0.0, c3_one_step_update},
        {4, "fit sanity", 30.0, c4_fit_sanity},
        {5, "gap-variance law", 0.0, c5_gap_variance},
        {6, "hazard math", 0.0, c6_hazard_math},
        {7, "route optimality", 20.0, c7_route_optimality},
        {8, "store integrity", 10.0, c8_store_integrity},
        {9, "end-to-end determinism", 0.0, c9_end_to_end_determinism},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        std::string problem;
        try {
            problem = c.check();
        } catch (const std::exception& e) {
            problem = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (problem.empty() && c.limit_seconds > 0.0 && secs >= c.limit_seconds)
            problem = "runtime " + format_sig9(secs) + " s exceeds " + format_sig9(c.limit_seconds) + " s";
        std::printf("%s criterion %d: %s (%.3f s)%s%s\n", problem.empty() ? "PASS" : "FAIL", c.number, c.name, secs,
                    problem.empty() ? "" : ": ", problem.c_str());
        if (!problem.empty()) ++failed;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
