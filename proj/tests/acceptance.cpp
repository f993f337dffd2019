// Acceptance suite: one line per criterion, exit 0 only if all pass.
// argv[1] (optional) is the path to the bellcli binary, used by the
// determinism criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "bell/catalog.hpp"
#include "bell/construction.hpp"
#include "bell/eig.hpp"
#include "bell/knorm.hpp"
#include "bell/local_analysis.hpp"
#include "bell/model.hpp"
#include "bell/quantum_analysis.hpp"
#include "bell/rng.hpp"
#include "oracles.hpp"

using namespace bell;

namespace {

int failures = 0;

void report(int criterion, const std::string& name, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %2d: %s (%s)\n", pass ? "PASS" : "FAIL", criterion,
                name.c_str(), detail.c_str());
    if (!pass) ++failures;
}

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

BellFunctional random_functional(int inputs, int outputs, RngStream& s) {
    Scenario scen{inputs, outputs, false};
    BellFunctional M{scen, Tensor4(scen)};
    for (double& v : M.m.flat()) v = 2.0 * s.uniform() - 1.0;
    return M;
}

void criterion_1_chsh() {
    const auto t0 = std::chrono::steady_clock::now();
    const BellFunctional chsh = chsh_functional();
    const double tsirelson = 2.0 * std::sqrt(2.0);

    // Independent angle-grid oracle for the quantum value.
    double oracle = 0.0;
    const int g = 48;
    for (int i0 = 0; i0 < g; ++i0)
        for (int i1 = 0; i1 < g; ++i1)
            for (int j0 = 0; j0 < g; ++j0)
                for (int j1 = 0; j1 < g; ++j1)
                    oracle = std::max(
                        oracle, oracles::chsh_value_at_angles(
                                    i0 * std::numbers::pi / g, i1 * std::numbers::pi / g,
                                    j0 * std::numbers::pi / g, j1 * std::numbers::pi / g));

    const ClassicalBoundResult cb = classical_bound(chsh);
    SeesawConfig cfg;
    cfg.dim_a = cfg.dim_b = 2;
    cfg.restarts = 20;
    cfg.rng = RngStream(20260801, 0);
    const SeesawResult sw = seesaw(chsh, cfg);
    const ViolationReport vr = violation_report(chsh, cfg);
    const double elapsed = seconds_since(t0);

    const bool pass = cb.report.certificate == "exact" &&
                      std::abs(cb.report.value - 2.0) <= 1e-12 &&
                      sw.report.value >= tsirelson - 1e-4 &&
                      std::abs(vr.ratio - std::sqrt(2.0)) <= 1e-3 &&
                      oracle >= tsirelson - 5e-3 && elapsed < 10.0;
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "classical=%.12f seesaw=%.6f ratio=%.6f oracle=%.4f %.1fs<10s",
                  cb.report.value, sw.report.value, vr.ratio, oracle, elapsed);
    report(1, "CHSH suite", pass, buf);
}

void criterion_2_equivalence() {
    const auto t0 = std::chrono::steady_clock::now();
    double worst = 0.0;
    RngStream rng(424242, 0);
    for (int i = 0; i < 100; ++i) {
        RngStream s = rng.substream(static_cast<std::uint64_t>(i));
        const Behavior P = random_ns_behavior(s);
        const EquivalenceResult r = check_equivalence(P);
        worst = std::max(worst, r.residual);
    }
    const double elapsed = seconds_since(t0);
    const bool pass = worst <= 1e-5 && elapsed < 120.0;
    char buf[128];
    std::snprintf(buf, sizeof(buf), "max |nu-(2/pi-1)|=%.2e over 100 behaviors, %.1fs<120s",
                  worst, elapsed);
    report(2, "nu/pi equivalence", pass, buf);
}

void criterion_3_padding() {
    const auto t0 = std::chrono::steady_clock::now();
    RngStream rng(515151, 0);
    double worst_ratio_diff = 0.0;
    double worst_pairing = 0.0;
    bool all_ok = true;
    for (int i = 0; i < 50; ++i) {
        RngStream s = rng.substream(static_cast<std::uint64_t>(i));
        const BellFunctional M = random_functional(2, 2, s);
        SeesawConfig cfg;
        cfg.restarts = 4;
        cfg.rng = RngStream(8800 + static_cast<std::uint64_t>(i), 0);
        const ViolationReport base = violation_report(M, cfg);
        const ViolationReport padded = violation_report(pad_functional(M), cfg);
        worst_ratio_diff = std::max(worst_ratio_diff, std::abs(base.ratio - padded.ratio));
        if (std::abs(base.ratio - padded.ratio) > 1e-9) all_ok = false;

        Behavior P{M.scenario, Tensor4(M.scenario), Provenance::nonsignalling_raw};
        for (double& v : P.p.flat()) v = s.uniform();
        const double diff =
            std::abs(pair(pad_functional(M), embed_behavior(P)) - pair(M, P));
        worst_pairing = std::max(worst_pairing, diff);
        if (diff != 0.0) all_ok = false;
    }
    const double elapsed = seconds_since(t0);
    char buf[160];
    std::snprintf(buf, sizeof(buf), "max LV diff=%.2e, max pairing diff=%.2e, %.1fs",
                  worst_ratio_diff, worst_pairing, elapsed);
    report(3, "padding invariance", all_ok, buf);
}

void criterion_4_nu_lower_bound() {
    Scenario scen{2, 2, false};
    bool all_ok = true;
    double worst = 0.0;
    for (int a0 = 0; a0 < 2; ++a0)
        for (int a1 = 0; a1 < 2; ++a1)
            for (int b0 = 0; b0 < 2; ++b0)
                for (int b1 = 0; b1 < 2; ++b1) {
                    const double nu =
                        nu_of_behavior(behavior_from_point(scen, {{a0, a1}, {b0, b1}}))
                            .report.value;
                    worst = std::max(worst, std::abs(nu - 1.0));
                    if (std::abs(nu - 1.0) > 1e-9) all_ok = false;
                }
    double min_nu = 1e9;
    RngStream rng(616161, 0);
    for (int i = 0; i < 40; ++i) {
        RngStream s = rng.substream(static_cast<std::uint64_t>(i));
        min_nu = std::min(min_nu, nu_of_behavior(random_ns_behavior(s)).report.value);
    }
    min_nu = std::min(min_nu, nu_of_behavior(tsirelson_behavior()).report.value);
    min_nu = std::min(min_nu, nu_of_behavior(pr_box_behavior()).report.value);
    if (min_nu < 1.0 - 1e-9) all_ok = false;
    char buf[128];
    std::snprintf(buf, sizeof(buf), "max |nu-1| on 16 points=%.2e, min nu overall=%.9f",
                  worst, min_nu);
    report(4, "nu lower bound", all_ok, buf);
}

void criterion_5_gaussian_lemma() {
    const auto t0 = std::chrono::steady_clock::now();
    const int n = 64, m = 512, seeds = 200;
    const int rank_index = static_cast<int>(std::ceil(0.05 * n)) - 1;  // s_4, 1-indexed
    int hits = 0;
    for (int seed = 0; seed < seeds; ++seed) {
        const Eigen::MatrixXd g =
            gaussian_matrix(n, m, RngStream(static_cast<std::uint64_t>(seed), 5));
        const SvdResult dec = svd(g / std::sqrt(static_cast<double>(m)));
        if (dec.singular_values(rank_index) >= 0.5) ++hits;
    }
    const double fraction = static_cast<double>(hits) / seeds;
    const double elapsed = seconds_since(t0);
    const bool pass = fraction >= 0.95 && elapsed < 60.0;
    char buf[128];
    std::snprintf(buf, sizeof(buf), "fraction s_%d>=1/2: %.3f over %d seeds, %.1fs<60s",
                  rank_index + 1, fraction, seeds, elapsed);
    report(5, "gaussian retention statistic", pass, buf);
}

void criterion_6_chevet() {
    const auto t0 = std::chrono::steady_clock::now();
    struct Cell {
        NormSpace a, b;
        int n, m;
    };
    const std::vector<Cell> cells = {{NormSpace::l2, NormSpace::l2, 8, 8},
                                     {NormSpace::l1, NormSpace::l2, 8, 12},
                                     {NormSpace::l2, NormSpace::linf, 12, 12}};
    bool all_ok = true;
    std::string detail;
    int idx = 0;
    for (const auto& c : cells) {
        const ChevetReport r = chevet_monte_carlo(
            c.a, c.b, c.n, c.m, 100, RngStream(717171, static_cast<std::uint64_t>(idx++)));
        all_ok = all_ok && r.pass;
        char buf[96];
        std::snprintf(buf, sizeof(buf), "[%s,%s: %.3f<=%.3f] ", to_string(c.a).c_str(),
                      to_string(c.b).c_str(), r.empirical_mean, r.bound * r.slack);
        detail += buf;
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.1fs", seconds_since(t0));
    report(6, "Chevet verifier (b=1 real)", all_ok, detail + buf);
}

void criterion_7_knorm() {
    const auto t0 = std::chrono::steady_clock::now();
    double worst_gap = 0.0;
    RngStream rng(818181, 0);
    for (double t : {0.1, 0.5, 1.0}) {
        for (int i = 0; i < 100; ++i) {
            RngStream s = rng.substream(static_cast<std::uint64_t>(1000 * t) * 1000 +
                                        static_cast<std::uint64_t>(i));
            const int m = 1 + i % 4;
            Eigen::VectorXd x(m);
            for (int j = 0; j < m; ++j) x(j) = 2.0 * s.uniform() - 1.0;
            const double dual = k_norm(x, t);
            const double primal = oracles::k_norm_bruteforce(x, t);
            worst_gap = std::max(worst_gap, std::abs(dual - primal));
        }
    }
    double worst_hoelder = 0.0;
    for (int i = 0; i < 10000; ++i) {
        RngStream s = rng.substream(900000 + static_cast<std::uint64_t>(i));
        const int m = 1 + i % 4;
        const double t = 0.05 + 2.0 * s.uniform();
        Eigen::VectorXd x(m), a(m);
        for (int j = 0; j < m; ++j) x(j) = 2.0 * s.uniform() - 1.0;
        for (int j = 0; j < m; ++j) a(j) = 2.0 * s.uniform() - 1.0;
        worst_hoelder = std::max(
            worst_hoelder, std::abs(x.dot(a)) - k_norm(x, t) * j_norm(a, 1.0 / t));
    }
    const double elapsed = seconds_since(t0);
    const bool pass = worst_gap <= 1e-4 && worst_hoelder <= 1e-10;
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "max primal/dual gap=%.2e, max Hoelder violation=%.2e, %.1fs",
                  worst_gap, worst_hoelder, elapsed);
    report(7, "K-norm duality", pass, buf);
}

void criterion_8_pipeline() {
    const auto t0 = std::chrono::steady_clock::now();
    bool all_ok = true;
    double min_lv = 1e9;
    std::vector<double> d_hats;
    for (int seed = 0; seed < 20; ++seed) {
        ConstructionParams p;
        p.n = 2;
        p.q = 4.0;
        p.seed = static_cast<std::uint64_t>(seed);
        SeesawConfig cfg;
        cfg.restarts = 8;
        cfg.rng = RngStream(p.seed, 20);
        const PipelineResult r = pipeline(p, cfg);
        min_lv = std::min(min_lv, r.lv);
        d_hats.push_back(r.d_hat);
        if (r.lv < 1.0 - 1e-9 || !r.tensor_symmetric ||
            r.classical.certificate != "exact")
            all_ok = false;
    }
    std::sort(d_hats.begin(), d_hats.end());
    const double elapsed = seconds_since(t0);
    if (elapsed >= 300.0) all_ok = false;
    char buf[192];
    std::snprintf(buf, sizeof(buf),
                  "min LV=%.9f, D-hat quartiles=(%.3f, %.3f, %.3f) over 20 seeds, %.1fs<300s",
                  min_lv, d_hats[5], d_hats[10], d_hats[15], elapsed);
    report(8, "end-to-end pipeline n=2 q=4", all_ok, buf);
}

void criterion_9_monitors() {
    bool all_ok = true;
    double worst_margin = 0.0;
    auto check = [&](const Behavior& P, int d, int k) {
        const MonitorReport r = upper_bound_monitor(P, d, k);
        worst_margin = std::max(worst_margin, r.nu / r.threshold);
        if (r.failed) all_ok = false;
    };
    check(tsirelson_behavior(), 2, 2);
    check(pr_box_behavior(), 2, 2);
    Scenario scen{2, 2, false};
    check(behavior_from_point(scen, {{0, 1}, {1, 0}}), 2, 2);
    RngStream rng(919191, 0);
    for (int i = 0; i < 30; ++i) {
        RngStream s = rng.substream(static_cast<std::uint64_t>(i));
        check(random_ns_behavior(s), 2, 2);
    }
    char buf[96];
    std::snprintf(buf, sizeof(buf), "max nu/threshold=%.4f over 33 behaviors", worst_margin);
    report(9, "upper-bound monitors", all_ok, buf);
}

void criterion_10_determinism(const char* cli_path) {
    if (cli_path == nullptr) {
        report(10, "byte-identical reports", false, "bellcli path not provided");
        return;
    }
    auto run = [&](const std::string& args, const std::string& out) {
        const std::string cmd = std::string(cli_path) + " " + args + " --no-meta --out " +
                                out + " > /dev/null 2>&1";
        return std::system(cmd.c_str()) == 0;
    };
    bool all_ok = true;
    const std::vector<std::string> cases = {
        "pipeline --n 2 --q 4 --seeds 2 --restarts 4 --seed 7",
        "verify chevet --pair l1,l2 --n 6 --m 8 --trials 40 --seed 3",
        "verify knorm --m 3 --t 0.5 --vectors 50 --seed 5",
    };
    int idx = 0;
    for (const auto& c : cases) {
        const std::string f1 = "acceptance_det_a" + std::to_string(idx) + ".json";
        const std::string f2 = "acceptance_det_b" + std::to_string(idx) + ".json";
        if (!run(c, f1) || !run(c, f2)) {
            all_ok = false;
            break;
        }
        const std::string a = read_file(f1), b = read_file(f2);
        if (a.empty() || a != b) all_ok = false;
        std::remove(f1.c_str());
        std::remove(f2.c_str());
        ++idx;
    }
    report(10, "byte-identical reports", all_ok,
           all_ok ? "3 commands rerun byte-identically" : "mismatch or command failure");
}

}  // namespace

int main(int argc, char** argv) {
    criterion_1_chsh();
    criterion_2_equivalence();
    criterion_3_padding();
    criterion_4_nu_lower_bound();
    criterion_5_gaussian_lemma();
    criterion_6_chevet();
    criterion_7_knorm();
    criterion_8_pipeline();
    criterion_9_monitors();
    criterion_10_determinism(argc > 1 ? argv[1] : nullptr);
    if (failures > 0) {
        std::printf("%d criterion(s) failed\n", failures);
        return 1;
    }
    std::printf("all acceptance criteria passed\n");
    return 0;
}
