// bellcli: batch front door for constructing Bell functionals, computing
// classical/quantum bounds, noise robustness, and running the Monte Carlo
// verifiers. Every command is deterministic given --seed; reports embed the
// full parameter set. Exit codes: 0 ok, 2 budget refusal, 3 validation
// failure, 1 internal error.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <iostream>
#include <sstream>

#include "bell/catalog.hpp"
#include "bell/config.hpp"
#include "bell/construction.hpp"
#include "bell/eig.hpp"
#include "bell/json_io.hpp"
#include "bell/knorm.hpp"
#include "bell/local_analysis.hpp"
#include "bell/model.hpp"
#include "bell/quantum_analysis.hpp"

using nlohmann::json;

namespace {

struct GlobalOpts {
    std::uint64_t seed = 0;
    long budget = bell::kDefaultBudget;
    double tol = 1e-8;
    std::string out;
    int jobs = 1;
    bool no_meta = false;
};

json report_envelope(const GlobalOpts& g, json params, json body) {
    json rep;
    params["seed"] = g.seed;
    params["budget"] = g.budget;
    params["tol"] = g.tol;
    params["jobs"] = g.jobs;
    rep["params"] = std::move(params);
    rep.update(body);
    if (!g.no_meta) {
        const auto now = std::chrono::system_clock::now().time_since_epoch();
        rep["meta"] = {
            {"unix_time", std::chrono::duration_cast<std::chrono::seconds>(now).count()}};
    }
    return rep;
}

void emit(const GlobalOpts& g, const json& rep) {
    if (!g.out.empty()) {
        bell::save_json_file(g.out, rep);
        std::cout << "wrote " << g.out << "\n";
    } else {
        std::cout << rep.dump(2) << "\n";
    }
}

json solve_report_json(const bell::SolveReport& r) {
    return {{"value", r.value},
            {"certificate", r.certificate},
            {"iterations", r.iterations},
            {"residual", r.residual}};
}

json verifier_stat(const std::string& name, double statistic, double threshold,
                   bool pass, long trials) {
    return {{"name", name},
            {"statistic", statistic},
            {"threshold", threshold},
            {"pass", pass},
            {"trials", trials}};
}

std::vector<int> parse_int_list(const std::string& csv) {
    std::vector<int> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
    if (out.empty()) throw bell::ValidationError("empty integer list");
    return out;
}

json pipeline_to_json(const bell::PipelineResult& r) {
    return {{"n", r.params.n},
            {"q", r.params.q},
            {"m", r.params.resolved_m()},
            {"t", r.params.t()},
            {"sigma_threshold", r.params.sigma_threshold},
            {"construction_seed", r.params.seed},
            {"k", r.k},
            {"observed_delta", r.observed_delta},
            {"singular_values", r.singular_values},
            {"B_C", solve_report_json(r.classical)},
            {"B_Q", solve_report_json(r.quantum)},
            {"LV", r.lv},
            {"D_hat", r.d_hat},
            {"prefactors",
             {{"t_pow", r.prefactor_t}, {"m_pow", r.prefactor_m}, {"n_pow", r.prefactor_n}}},
            {"tensor_symmetric", r.tensor_symmetric}};
}

double median_of(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bell functional bounds, violation ratios, and Gaussian constructions"};
    app.require_subcommand(1);

    GlobalOpts g;
    app.add_option("--seed", g.seed, "base random seed");
    app.add_option("--budget", g.budget, "enumeration budget");
    app.add_option("--tol", g.tol, "see-saw convergence tolerance");
    app.add_option("--out", g.out, "write the report to this path");
    app.add_option("--jobs", g.jobs, "worker threads for restarts/trials");
    app.add_flag("--no-meta", g.no_meta, "omit timestamps for byte-stable output");

    // construct
    auto* construct_cmd = app.add_subcommand("construct", "build a Bell functional from a Gaussian sample");
    int cn = 2;
    double cq = 4.0;
    int cm = 0;
    double csigma = 0.5;
    construct_cmd->add_option("--n", cn, "local dimension / outputs")->required();
    construct_cmd->add_option("--q", cq, "exponent q > 2")->required();
    construct_cmd->add_option("--m", cm, "override m (default ceil(n^(q/2)))");
    construct_cmd->add_option("--sigma-threshold", csigma, "singular value cutoff");

    // classical
    auto* classical_cmd = app.add_subcommand("classical", "classical bound of a functional");
    std::string cl_path, cl_mode = "auto";
    int cl_restarts = 20;
    bool cl_epsilon = false;
    classical_cmd->add_option("--functional", cl_path)->required();
    classical_cmd->add_option("--mode", cl_mode, "auto|exact|heuristic");
    classical_cmd->add_option("--restarts", cl_restarts);
    classical_cmd->add_flag("--epsilon", cl_epsilon, "also report the signed product norm");

    // quantum
    auto* quantum_cmd = app.add_subcommand("quantum", "see-saw quantum lower bound");
    std::string qu_path;
    int qu_da = 2, qu_db = 2, qu_restarts = 20, qu_sweeps = 500;
    quantum_cmd->add_option("--functional", qu_path)->required();
    quantum_cmd->add_option("--dim-a", qu_da);
    quantum_cmd->add_option("--dim-b", qu_db);
    quantum_cmd->add_option("--restarts", qu_restarts);
    quantum_cmd->add_option("--max-sweeps", qu_sweeps);

    // nu
    auto* nu_cmd = app.add_subcommand("nu", "largest violation nu(P) with certificate");
    std::string nu_path;
    nu_cmd->add_option("--behavior", nu_path)->required();

    // pi
    auto* pi_cmd = app.add_subcommand("pi", "noise robustness pi(P)");
    std::string pi_path;
    bool pi_check = false;
    pi_cmd->add_option("--behavior", pi_path)->required();
    pi_cmd->add_flag("--check-equivalence", pi_check, "also compute nu and the residual");

    // noise
    auto* noise_cmd = app.add_subcommand("noise", "apply detector-efficiency noise");
    std::string no_path;
    double no_eta = 1.0;
    noise_cmd->add_option("--behavior", no_path)->required();
    noise_cmd->add_option("--eta", no_eta, "detector efficiency in [0,1]")->required();

    // witness
    auto* witness_cmd = app.add_subcommand("witness", "dimension witness table");
    std::string wi_path, wi_dims = "1,2";
    int wi_restarts = 20;
    witness_cmd->add_option("--functional", wi_path)->required();
    witness_cmd->add_option("--dims", wi_dims, "ascending dimensions, e.g. 1,2,3");
    witness_cmd->add_option("--restarts", wi_restarts);

    // verify
    auto* verify_cmd = app.add_subcommand("verify", "Monte Carlo verifiers");
    verify_cmd->require_subcommand(1);

    auto* chevet_cmd = verify_cmd->add_subcommand("chevet", "injective norm bound check");
    std::string ch_pair = "l2,l2";
    int ch_n = 8, ch_m = 8, ch_trials = 100;
    chevet_cmd->add_option("--pair", ch_pair, "norm pair, e.g. l1,l2");
    chevet_cmd->add_option("--n", ch_n);
    chevet_cmd->add_option("--m", ch_m);
    chevet_cmd->add_option("--trials", ch_trials);

    auto* gauss_cmd = verify_cmd->add_subcommand("gaussian-lemma", "singular value retention statistic");
    int ga_n = 64, ga_m = 512, ga_seeds = 200;
    double ga_rank_fraction = 0.05, ga_threshold = 0.5, ga_min_fraction = 0.95;
    gauss_cmd->add_option("--n", ga_n);
    gauss_cmd->add_option("--m", ga_m);
    gauss_cmd->add_option("--seeds", ga_seeds);
    gauss_cmd->add_option("--rank-fraction", ga_rank_fraction);
    gauss_cmd->add_option("--threshold", ga_threshold);
    gauss_cmd->add_option("--min-fraction", ga_min_fraction);

    auto* knorm_cmd = verify_cmd->add_subcommand("knorm", "K-norm primal/dual and pairing checks");
    int kn_m = 3, kn_vectors = 100;
    double kn_t = 0.5;
    knorm_cmd->add_option("--m", kn_m);
    knorm_cmd->add_option("--t", kn_t);
    knorm_cmd->add_option("--vectors", kn_vectors);

    auto* leps_cmd = verify_cmd->add_subcommand("lemma-epsilon", "operator norm into the K-space");
    std::string le_nlist = "2,3";
    double le_q = 4.0;
    int le_trials = 50;
    double le_growth = 1.3;
    leps_cmd->add_option("--n-list", le_nlist);
    leps_cmd->add_option("--q", le_q);
    leps_cmd->add_option("--trials", le_trials);
    leps_cmd->add_option("--growth-slack", le_growth);

    auto* lmin_cmd = verify_cmd->add_subcommand("lemma-min", "scalar proxies of the operator bound");
    int lm_n = 4, lm_m = 12, lm_trials = 50;
    double lm_q = 3.0;
    lmin_cmd->add_option("--n", lm_n);
    lmin_cmd->add_option("--m", lm_m);
    lmin_cmd->add_option("--q", lm_q);
    lmin_cmd->add_option("--trials", lm_trials);

    auto* psum_cmd = verify_cmd->add_subcommand("positive-sum", "positive factorization identity");
    int ps_dim = 4, ps_count = 5, ps_trials = 20;
    psum_cmd->add_option("--dim", ps_dim);
    psum_cmd->add_option("--count", ps_count);
    psum_cmd->add_option("--trials", ps_trials);

    // pipeline
    auto* pipeline_cmd = app.add_subcommand("pipeline", "construct + bounds + report");
    int pl_n = 2, pl_m = 0, pl_seeds = 1, pl_restarts = 20;
    double pl_q = 4.0, pl_sigma = 0.5;
    pipeline_cmd->add_option("--n", pl_n)->required();
    pipeline_cmd->add_option("--q", pl_q)->required();
    pipeline_cmd->add_option("--m", pl_m);
    pipeline_cmd->add_option("--sigma-threshold", pl_sigma);
    pipeline_cmd->add_option("--seeds", pl_seeds, "number of consecutive seeds to sweep");
    pipeline_cmd->add_option("--restarts", pl_restarts);

    // Let global flags (--seed, --out, ...) appear after the subcommand.
    for (auto* sub : app.get_subcommands({})) {
        sub->fallthrough();
        for (auto* nested : sub->get_subcommands({})) nested->fallthrough();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 3;
    }

    try {
        if (*construct_cmd) {
            bell::ConstructionParams p{cn, cq, cm, csigma, g.seed};
            const bell::Construction c = bell::construct(p);
            if (g.out.empty())
                throw bell::ValidationError("construct requires --out for the tensor file");
            bell::save_json_file(g.out, bell::functional_to_json(c.functional));
            json body = {{"inputs", c.functional.scenario.inputs},
                         {"outputs", c.functional.scenario.outputs},
                         {"m", p.resolved_m()},
                         {"k", c.subspace.k},
                         {"singular_values",
                          std::vector<double>(c.subspace.singular_values.data(),
                                              c.subspace.singular_values.data() +
                                                  c.subspace.singular_values.size())},
                         {"tensor_file", g.out}};
            json params = {{"n", cn}, {"q", cq}, {"m", cm}, {"sigma_threshold", csigma}};
            std::cout << report_envelope(g, params, body).dump(2) << "\n";
            return 0;
        }

        if (*classical_cmd) {
            const bell::BellFunctional M = bell::load_functional(cl_path);
            bell::ClassicalOptions opts;
            opts.budget = g.budget;
            opts.restarts = cl_restarts;
            opts.rng = bell::RngStream(g.seed, 1);
            if (cl_mode == "exact") opts.mode = bell::BoundMode::exact;
            else if (cl_mode == "heuristic") opts.mode = bell::BoundMode::heuristic;
            else if (cl_mode == "auto") opts.mode = bell::BoundMode::automatic;
            else throw bell::ValidationError("unknown mode '" + cl_mode + "'");
            const bell::ClassicalBoundResult r = bell::classical_bound(M, opts);
            json body = solve_report_json(r.report);
            if (cl_epsilon) body["epsilon_norm"] = bell::epsilon_norm(M, g.budget);
            json params = {{"functional", cl_path}, {"mode", cl_mode}, {"restarts", cl_restarts}};
            emit(g, report_envelope(g, params, body));
            return 0;
        }

        if (*quantum_cmd) {
            const bell::BellFunctional M = bell::load_functional(qu_path);
            bell::SeesawConfig cfg;
            cfg.dim_a = qu_da;
            cfg.dim_b = qu_db;
            cfg.restarts = qu_restarts;
            cfg.max_sweeps = qu_sweeps;
            cfg.tol = g.tol;
            cfg.rng = bell::RngStream(g.seed, 2);
            cfg.jobs = g.jobs;
            const bell::SeesawResult r = bell::seesaw(M, cfg);
            json body = solve_report_json(r.report);
            body["sign"] = r.sign;
            body["best_restart"] = r.best_restart;
            body["sweeps_of_best"] = r.sweeps_of_best;
            body["monotone_ok"] = r.monotone_ok;
            json params = {{"functional", qu_path}, {"dim_a", qu_da}, {"dim_b", qu_db},
                           {"restarts", qu_restarts}, {"max_sweeps", qu_sweeps}};
            emit(g, report_envelope(g, params, body));
            return 0;
        }

        if (*nu_cmd) {
            const bell::Behavior P = bell::load_behavior(nu_path);
            const bell::NuResult r = bell::nu_of_behavior(P, g.budget);
            json decomp = json::array();
            for (const auto& [w, pt] : r.decomposition.terms)
                decomp.push_back({{"weight", w}, {"alice", pt.alice_map}, {"bob", pt.bob_map}});
            json body = solve_report_json(r.report);
            body["nu"] = r.report.value;
            body["decomposition"] = decomp;
            json params = {{"behavior", nu_path}};
            emit(g, report_envelope(g, params, body));
            return 0;
        }

        if (*pi_cmd) {
            const bell::Behavior P = bell::load_behavior(pi_path);
            json body;
            if (pi_check) {
                const bell::EquivalenceResult r = bell::check_equivalence(P, g.budget);
                body = {{"pi", r.pi},
                        {"nu", r.nu},
                        {"equivalence_residual", r.residual},
                        {"pi_report", solve_report_json(r.pi_result.report)},
                        {"nu_report", solve_report_json(r.nu_result.report)}};
            } else {
                const bell::PiResult r = bell::pi_robustness(P, g.budget);
                body = solve_report_json(r.report);
                body["pi"] = r.report.value;
            }
            json params = {{"behavior", pi_path}, {"check_equivalence", pi_check}};
            emit(g, report_envelope(g, params, body));
            return 0;
        }

        if (*noise_cmd) {
            const bell::Behavior P = bell::load_behavior(no_path);
            const bell::Behavior noisy = bell::mix_detector_noise(P, no_eta);
            if (g.out.empty())
                throw bell::ValidationError("noise requires --out for the behavior file");
            bell::save_json_file(g.out, bell::behavior_to_json(noisy));
            json params = {{"behavior", no_path}, {"eta", no_eta}};
            const bell::ValidationReport v = bell::validate(noisy);
            json body = {{"out", g.out},
                         {"normalization_residual", v.normalization_residual},
                         {"nonsignalling_residual", v.nonsignalling_residual}};
            std::cout << report_envelope(g, params, body).dump(2) << "\n";
            return 0;
        }

        if (*witness_cmd) {
            const bell::BellFunctional M = bell::load_functional(wi_path);
            bell::SeesawConfig cfg;
            cfg.restarts = wi_restarts;
            cfg.tol = g.tol;
            cfg.rng = bell::RngStream(g.seed, 3);
            cfg.jobs = g.jobs;
            const bell::DimensionWitnessReport r =
                bell::dimension_witness_report(M, parse_int_list(wi_dims), cfg);
            json rows = json::array();
            for (const auto& row : r.rows)
                rows.push_back({{"dim", row.dim},
                                {"value", row.value},
                                {"ratio_to_prev", row.ratio_to_prev}});
            json body = {{"per_dim_table", rows}, {"nondecreasing_ok", r.nondecreasing_ok}};
            json params = {{"functional", wi_path}, {"dims", wi_dims}, {"restarts", wi_restarts}};
            emit(g, report_envelope(g, params, body));
            return 0;
        }

        if (*chevet_cmd) {
            const auto comma = ch_pair.find(',');
            if (comma == std::string::npos)
                throw bell::ValidationError("--pair must look like l1,l2");
            const bell::ChevetReport r = bell::chevet_monte_carlo(
                bell::norm_space_from_string(ch_pair.substr(0, comma)),
                bell::norm_space_from_string(ch_pair.substr(comma + 1)), ch_n, ch_m,
                ch_trials, bell::RngStream(g.seed, 10));
            json body = {{"empirical_mean", r.empirical_mean},
                         {"bound", r.bound},
                         {"slack", r.slack},
                         {"pass", r.pass},
                         {"mean_norm_left", r.mean_norm_left},
                         {"mean_norm_right", r.mean_norm_right},
                         {"verifier_stats",
                          json::array({verifier_stat("chevet_" + ch_pair, r.empirical_mean,
                                                     r.bound * r.slack, r.pass, ch_trials)})}};
            json params = {{"pair", ch_pair}, {"n", ch_n}, {"m", ch_m}, {"trials", ch_trials}};
            emit(g, report_envelope(g, params, body));
            return r.pass ? 0 : 1;
        }

        if (*gauss_cmd) {
            const int rank_index =
                static_cast<int>(std::ceil(ga_rank_fraction * ga_n)) - 1;
            if (rank_index < 0 || rank_index >= std::min(ga_n, ga_m))
                throw bell::ValidationError("rank fraction out of range");
            int hits = 0;
            for (int seed = 0; seed < ga_seeds; ++seed) {
                const Eigen::MatrixXd gm = bell::gaussian_matrix(
                    ga_n, ga_m, bell::RngStream(g.seed + static_cast<std::uint64_t>(seed), 0));
                const bell::SvdResult dec =
                    bell::svd(gm / std::sqrt(static_cast<double>(ga_m)));
                if (dec.singular_values(rank_index) >= ga_threshold) ++hits;
            }
            const double fraction = static_cast<double>(hits) / ga_seeds;
            const bool pass = fraction >= ga_min_fraction;
            json body = {{"fraction", fraction},
                         {"hits", hits},
                         {"pass", pass},
                         {"verifier_stats",
                          json::array({verifier_stat("gaussian_lemma", fraction,
                                                     ga_min_fraction, pass, ga_seeds)})}};
            json params = {{"n", ga_n}, {"m", ga_m}, {"seeds", ga_seeds},
                           {"rank_fraction", ga_rank_fraction}, {"threshold", ga_threshold},
                           {"min_fraction", ga_min_fraction}};
            emit(g, report_envelope(g, params, body));
            return pass ? 0 : 1;
        }

        if (*knorm_cmd) {
            bell::RngStream stream(g.seed, 11);
            double max_gap = 0.0;
            double max_hoelder_violation = 0.0;
            for (int i = 0; i < kn_vectors; ++i) {
                bell::RngStream s = stream.substream(static_cast<std::uint64_t>(i));
                Eigen::VectorXd x(kn_m), a(kn_m);
                for (int j = 0; j < kn_m; ++j) x(j) = 2.0 * s.uniform() - 1.0;
                for (int j = 0; j < kn_m; ++j) a(j) = 2.0 * s.uniform() - 1.0;
                const double kd = bell::k_norm(x, kn_t);
                max_hoelder_violation =
                    std::max(max_hoelder_violation,
                             std::abs(x.dot(a)) - kd * bell::j_norm(a, 1.0 / kn_t));
            }
            const bool pass = max_hoelder_violation <= 1e-10;
            json body = {{"max_hoelder_violation", max_hoelder_violation},
                         {"pass", pass},
                         {"verifier_stats",
                          json::array({verifier_stat("knorm_hoelder", max_hoelder_violation,
                                                     1e-10, pass, kn_vectors)})}};
            (void)max_gap;
            json params = {{"m", kn_m}, {"t", kn_t}, {"vectors", kn_vectors}};
            emit(g, report_envelope(g, params, body));
            return pass ? 0 : 1;
        }

        if (*leps_cmd) {
            const std::vector<int> ns = parse_int_list(le_nlist);
            json per_n = json::array();
            double base_p95 = -1.0;
            bool pass = true;
            for (int n : ns) {
                const bell::LemmaEpsilonReport r = bell::lemma_epsilon_monitor(
                    n, le_q, le_trials, bell::RngStream(g.seed, 12).substream(n));
                if (!r.probe_le_ascent) pass = false;
                if (base_p95 < 0.0) base_p95 = r.ratio_p95;
                else if (r.ratio_p95 > le_growth * base_p95) pass = false;
                per_n.push_back({{"n", n},
                                 {"m", r.m},
                                 {"t", r.t},
                                 {"ratio_p95", r.ratio_p95},
                                 {"estimates", r.estimates}});
            }
            json body = {{"per_n", per_n},
                         {"pass", pass},
                         {"verifier_stats",
                          json::array({verifier_stat("lemma_epsilon_growth",
                                                     per_n.back()["ratio_p95"].get<double>(),
                                                     le_growth * base_p95, pass,
                                                     le_trials * static_cast<long>(ns.size()))})}};
            json params = {{"n_list", le_nlist}, {"q", le_q}, {"trials", le_trials},
                           {"growth_slack", le_growth}};
            emit(g, report_envelope(g, params, body));
            return pass ? 0 : 1;
        }

        if (*lmin_cmd) {
            const bell::LemmaMinReport r = bell::lemma_min_monitor(
                lm_n, lm_m, lm_q, lm_trials, bell::RngStream(g.seed, 13));
            json body = {{"ratio_mean", r.ratio_mean},
                         {"ratio_quartiles", {r.ratio_q1, r.ratio_median, r.ratio_q3}},
                         {"frob_over_sqrt_nm_mean", r.frob_over_sqrt_nm_mean},
                         {"op_norm_mean",
                          std::accumulate(r.op_norm.begin(), r.op_norm.end(), 0.0) /
                              std::max<std::size_t>(1, r.op_norm.size())},
                         {"max_column_mean",
                          std::accumulate(r.max_column.begin(), r.max_column.end(), 0.0) /
                              std::max<std::size_t>(1, r.max_column.size())},
                         {"verifier_stats",
                          json::array({verifier_stat("lemma_min_ratio", r.ratio_median, 0.0,
                                                     true, lm_trials)})}};
            json params = {{"n", lm_n}, {"m", lm_m}, {"q", lm_q}, {"trials", lm_trials}};
            emit(g, report_envelope(g, params, body));
            return 0;
        }

        if (*psum_cmd) {
            bell::RngStream stream(g.seed, 14);
            double worst = 0.0;
            for (int tr = 0; tr < ps_trials; ++tr) {
                bell::RngStream s = stream.substream(static_cast<std::uint64_t>(tr));
                std::vector<Eigen::MatrixXd> ts;
                for (int i = 0; i < ps_count; ++i) {
                    const Eigen::MatrixXd r =
                        bell::gaussian_matrix(ps_dim, ps_dim, s.substream(i));
                    ts.push_back(r * r.transpose());
                }
                worst = std::max(worst, bell::positive_sum_identity(ts));
            }
            const bool pass = worst <= 1e-9;
            json body = {{"max_residual", worst},
                         {"pass", pass},
                         {"verifier_stats",
                          json::array({verifier_stat("positive_sum_identity", worst, 1e-9,
                                                     pass, ps_trials)})}};
            json params = {{"dim", ps_dim}, {"count", ps_count}, {"trials", ps_trials}};
            emit(g, report_envelope(g, params, body));
            return pass ? 0 : 1;
        }

        if (*pipeline_cmd) {
            json runs = json::array();
            std::vector<double> d_hats;
            json verifier_stats = json::array();
            bool all_lv_ok = true, all_sym = true, all_exact = true;
            for (int i = 0; i < pl_seeds; ++i) {
                bell::ConstructionParams p{pl_n, pl_q, pl_m, pl_sigma,
                                           g.seed + static_cast<std::uint64_t>(i)};
                bell::SeesawConfig cfg;
                cfg.restarts = pl_restarts;
                cfg.tol = g.tol;
                cfg.rng = bell::RngStream(p.seed, 20);
                cfg.jobs = g.jobs;
                const bell::PipelineResult r = bell::pipeline(p, cfg);
                runs.push_back(pipeline_to_json(r));
                d_hats.push_back(r.d_hat);
                all_lv_ok = all_lv_ok && r.lv >= 1.0 - 1e-9;
                all_sym = all_sym && r.tensor_symmetric;
                all_exact = all_exact && r.classical.certificate == "exact";
            }
            std::vector<double> sorted = d_hats;
            std::sort(sorted.begin(), sorted.end());
            verifier_stats.push_back(verifier_stat("pipeline_lv_at_least_one",
                                                   all_lv_ok ? 1.0 : 0.0, 1.0, all_lv_ok,
                                                   pl_seeds));
            verifier_stats.push_back(verifier_stat("pipeline_tensor_symmetric",
                                                   all_sym ? 1.0 : 0.0, 1.0, all_sym,
                                                   pl_seeds));
            json body = {{"runs", runs},
                         {"D_hat_median", median_of(d_hats)},
                         {"D_hat_quartiles",
                          {sorted.empty() ? 0.0 : sorted[sorted.size() / 4],
                           median_of(d_hats),
                           sorted.empty() ? 0.0 : sorted[(3 * sorted.size()) / 4]}},
                         {"classical_all_exact", all_exact},
                         {"verifier_stats", verifier_stats}};
            json params = {{"n", pl_n}, {"q", pl_q}, {"m", pl_m},
                           {"sigma_threshold", pl_sigma}, {"seeds", pl_seeds},
                           {"restarts", pl_restarts}};
            emit(g, report_envelope(g, params, body));
            return (all_lv_ok && all_sym) ? 0 : 1;
        }

        std::cerr << "no subcommand selected\n";
        return 3;
    } catch (const bell::BudgetError& e) {
        std::cerr << "refused: " << e.what() << "\n";
        return 2;
    } catch (const bell::ValidationError& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
