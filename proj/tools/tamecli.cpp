// Configuration-driven driver: solves, verification suites, constant
// estimation, and descent-vs-Newton amplitude sweeps. All outputs are plain
// CSV/JSON and byte-identical under a fixed seed.

#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "tame/io.hpp"
#include "tame/smoothing.hpp"
#include "tame/solver.hpp"
#include "tame/verify.hpp"

namespace {

using nlohmann::json;
using namespace tame;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Config {
    json raw;
    std::string out_dir = "out";
    unsigned seed = 1;
    int workers = 1;
    NormFamily family;
    int n_grid = 128;
    std::unique_ptr<TameProblem> problem;
    SolveOptions opts;
    double m_prime_scale = 1.0;
};

Config load_config(const std::string& path, const std::string& out_override, int seed_override,
                   int workers_override) {
    Config cfg;
    try {
        std::ifstream f(path);
        if (!f) throw ConfigError("cannot open config: " + path);
        f >> cfg.raw;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }

    try {
        const json& j = cfg.raw;
        cfg.out_dir = j.value("out", "out");
        cfg.seed = j.value("seed", 1u);
        cfg.workers = j.value("workers", 1);
        cfg.n_grid = j.value("n_grid", 128);
        cfg.family.k_max = j.value("k_max", 12);
        if (cfg.family.k_max < 1 || cfg.family.k_max > 12)
            throw ConfigError("k_max must be in [1, 12]");
        std::string flavor = j.value("family", "sobolev");
        if (flavor == "sobolev") cfg.family.flavor = NormFlavor::SobolevHk;
        else if (flavor == "sup") cfg.family.flavor = NormFlavor::SupCk;
        else throw ConfigError("unknown family: " + flavor);

        const json& pj = j.at("problem");
        std::string name = pj.at("name").get<std::string>();
        if (name == "linear_transport")
            cfg.problem = problem_linear_transport(pj.value("alpha", 0.5), cfg.n_grid);
        else if (name == "nonlinear_transport")
            cfg.problem = problem_nonlinear_transport(cfg.n_grid);
        else
            throw ConfigError("unknown problem: " + name);
        if (j.contains("k0")) cfg.problem->set_k0(j.at("k0").get<int>());

        if (j.contains("solver")) {
            const json& s = j.at("solver");
            cfg.opts.mu = s.value("mu", 0.0);
            cfg.opts.tol = s.value("tol", 1e-11);
            cfg.opts.max_iters = s.value("max_iters", 200);
            cfg.opts.step_shrink = s.value("step_shrink", 0.5);
            cfg.opts.armijo_c = s.value("armijo_c", 0.1);
            cfg.opts.enforce_ball = s.value("enforce_ball", true);
            cfg.opts.require_certificate = s.value("require_certificate", true);
            cfg.m_prime_scale = s.value("m_prime_scale", 1.0);
        }
        cfg.opts.seed = cfg.seed;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config error: ") + e.what());
    }

    if (!out_override.empty()) cfg.out_dir = out_override;
    if (seed_override >= 0) { cfg.seed = static_cast<unsigned>(seed_override); cfg.opts.seed = cfg.seed; }
    if (workers_override > 0) cfg.workers = workers_override;

    ensure_constants(*cfg.problem, cfg.family, cfg.seed + 1000);
    if (cfg.m_prime_scale != 1.0) {
        TameConstants c = cfg.problem->constants();
        for (double& v : c.m_prime) v *= cfg.m_prime_scale;
        cfg.problem->set_constants(c);
    }
    std::filesystem::create_directories(cfg.out_dir);
    return cfg;
}

GradedElement build_target(const Config& cfg) {
    if (!cfg.raw.contains("target")) throw ConfigError("missing target");
    const json& t = cfg.raw.at("target");
    std::string kind = t.value("kind", "mode");
    const int dim = cfg.problem->dim(), ng = cfg.problem->n_grid();
    if (kind == "zero") return GradedElement(dim, ng);
    if (kind == "mode")
        return mode_element(dim, ng, t.value("m", 1), t.value("amp_cos", 0.0),
                            t.value("amp_sin", 1.0)) *= t.value("scale", 1.0);
    if (kind == "random") {
        std::mt19937_64 rng(cfg.seed);
        GradedElement y = random_bandlimited(rng, dim, ng, ng / 4);
        int kc = cfg.problem->k0() + cfg.problem->d2();
        return scaled_to_norm(y, kc, cfg.family, t.value("norm", 0.1));
    }
    throw ConfigError("unknown target kind: " + kind);
}

void parallel_for(int n, int workers, const std::function<void(int)>& fn) {
    workers = std::max(1, std::min(workers, n));
    if (workers == 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
        });
    for (auto& t : pool) t.join();
}

int cmd_solve(const Config& cfg) {
    GradedElement y = build_target(cfg);
    SolveReport rep = solve_to_target(*cfg.problem, y, cfg.family, cfg.opts);

    std::ostringstream csv;
    write_iterates_csv(csv, rep);
    write_text_file(cfg.out_dir + "/iterates.csv", csv.str());
    write_text_file(cfg.out_dir + "/report.json", report_to_json(rep).dump(2) + "\n");

    std::cout << "solve: " << to_string(rep.status) << " iterations="
              << (rep.iterates.empty() ? 0 : rep.iterates.back().iter) << "\n";
    return rep.solved() ? 0 : 1;
}

int cmd_verify(const Config& cfg) {
    std::vector<std::string> suites =
        cfg.raw.value("suites", std::vector<std::string>{"surjection", "lipschitz",
                                                         "directional", "smoothing"});
    const TameProblem& p = *cfg.problem;
    const int kc = p.k0() + p.d2();
    const double mp = p.constants().m_prime_at(p.k0());
    std::vector<CheckResult> checks;

    for (const std::string& suite : suites) {
        if (suite == "surjection") {
            int samples = cfg.raw.value("surjection_samples", 20);
            double mu = cfg.opts.mu > 0 ? cfg.opts.mu : 1.1 * mp;
            std::vector<CheckResult> res(samples);
            parallel_for(samples, cfg.workers, [&](int i) {
                res[i] = check_local_surjection(p, cfg.family, mu, 1,
                                                cfg.seed + static_cast<unsigned>(i))[0];
                res[i].name = "surjection[" + std::to_string(i) + "]";
            });
            checks.insert(checks.end(), res.begin(), res.end());
        } else if (suite == "lipschitz") {
            std::mt19937_64 rng(cfg.seed + 17);
            double amp = 0.45 * effective_radius(p) / mp;
            GradedElement y0 = scaled_to_norm(
                random_bandlimited(rng, p.dim(), p.n_grid(), p.n_grid() / 4), kc, cfg.family,
                amp);
            GradedElement y1 = scaled_to_norm(
                random_bandlimited(rng, p.dim(), p.n_grid(), p.n_grid() / 4), kc, cfg.family,
                0.5 * amp);
            double mu = cfg.opts.mu > 0 ? cfg.opts.mu : 1.1 * mp;
            checks.push_back(check_lipschitz_inverse(p, cfg.family, y0, y1, mu));
        } else if (suite == "directional") {
            std::mt19937_64 rng(cfg.seed + 29);
            GradedElement x = p.zero();
            if (std::isfinite(p.R()))
                x = scaled_to_norm(random_bandlimited(rng, p.dim(), p.n_grid(), 8), p.k0(),
                                   cfg.family, 0.25 * p.R());
            else
                x = random_bandlimited(rng, p.dim(), p.n_grid(), 8);
            // Small direction keeps the curvature term of the one-sided
            // difference well below the first-order envelope.
            GradedElement xi = scaled_to_norm(random_bandlimited(rng, p.dim(), p.n_grid(), 8),
                                              p.k0() + 2, cfg.family, 0.05);
            auto rep = check_directional_derivative(p, x, xi, p.k0(), cfg.family,
                                                    {1e-2, 1e-3, 1e-4});
            checks.push_back(rep.result);
        } else if (suite == "smoothing") {
            // Single modes at and just above each cutoff pin the per-n axiom
            // constants; a random probe exercises the mixed-mode case.
            std::mt19937_64 rng(cfg.seed + 41);
            std::vector<GradedElement> probes;
            for (int m : {4, 5, 8, 9, 16, 17, 32, 33})
                probes.push_back(mode_element(p.dim(), p.n_grid(), m, 0.3, 1.0));
            probes.push_back(random_bandlimited(rng, p.dim(), p.n_grid(), p.n_grid() / 4));
            auto sv = verify_smoothing_axioms(cfg.family, probes, {0, 3}, {1, 2},
                                              {4, 8, 16, 32, p.n_grid() / 2});
            CheckResult res;
            res.name = "smoothing_axioms";
            res.observed = sv.c2_est;
            res.bound = 2.0 * sv.c2_est;  // informational; pass comes from the verifier
            res.passed = sv.pass;
            res.context = "c1_est=" + format_double(sv.c1_est);
            checks.push_back(res);
        } else {
            throw ConfigError("unknown suite: " + suite);
        }
    }

    std::ostringstream csv;
    write_checks_csv(csv, checks, cfg.seed);
    write_text_file(cfg.out_dir + "/checks.csv", csv.str());
    write_text_file(cfg.out_dir + "/summary.json", checks_summary_json(checks).dump(2) + "\n");

    int failed = 0;
    for (const auto& c : checks) failed += c.passed ? 0 : 1;
    std::cout << "verify: " << checks.size() - failed << "/" << checks.size() << " passed\n";
    return failed == 0 ? 0 : 1;
}

int cmd_estimate(const Config& cfg) {
    TameEstimates est =
        estimate_tame_constants(*cfg.problem, cfg.family, cfg.raw.value("probes", 24), cfg.seed);
    json j{{"problem", cfg.problem->name()},
           {"m", est.m},
           {"m_prime", est.m_prime},
           {"c1_table", est.c1_table}};
    write_text_file(cfg.out_dir + "/constants.json", j.dump(2) + "\n");
    std::cout << "estimate: m'_k0 = " << format_double(est.m_prime[cfg.problem->k0()]) << "\n";
    return 0;
}

// Bisection on the largest amplitude c with y = c sin(w) solvable, per
// method, under identical ground rules (no ball rejection, no certificate).
int cmd_bench(const Config& cfg) {
    json bj = cfg.raw.value("bench", json::object());
    double c_lo = bj.value("c_min", 0.0);
    double c_hi = bj.value("c_max", 1.0);
    int iters = bj.value("bisection_iters", 12);
    if (c_hi <= c_lo) {
        write_text_file(cfg.out_dir + "/bench.csv", "method,c,solved\n");
        write_text_file(cfg.out_dir + "/bench_summary.json", json::object().dump(2) + "\n");
        std::cout << "bench: empty sweep range\n";
        return 0;
    }

    SolveOptions opts = cfg.opts;
    opts.enforce_ball = false;
    opts.require_certificate = false;

    const TameProblem& p = *cfg.problem;
    auto solvable = [&](const std::string& method, double c) {
        GradedElement y = c * mode_element(p.dim(), p.n_grid(), 1, 0.0, 1.0);
        SolveReport rep = method == "newton" ? newton_solve(p, y, cfg.family, opts)
                                             : solve_to_target(p, y, cfg.family, opts);
        return rep.solved();
    };

    std::ostringstream csv;
    csv << "method,c,solved\n";
    json summary;
    for (const std::string method : {"descent", "newton"}) {
        double lo = c_lo, hi = c_hi;
        if (!solvable(method, hi)) {
            for (int i = 0; i < iters; ++i) {
                double mid = 0.5 * (lo + hi);
                bool ok = solvable(method, mid);
                csv << method << ',' << format_double(mid) << ',' << (ok ? 1 : 0) << '\n';
                (ok ? lo : hi) = mid;
            }
        } else {
            lo = hi;
            csv << method << ',' << format_double(hi) << ",1\n";
        }
        summary[method + "_c_max"] = lo;
        std::cout << "bench: " << method << " c_max = " << format_double(lo) << "\n";
    }
    write_text_file(cfg.out_dir + "/bench.csv", csv.str());
    write_text_file(cfg.out_dir + "/bench_summary.json", summary.dump(2) + "\n");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"graded-norm tame solver driver"};
    app.require_subcommand(1);

    std::string config_path, out_override;
    int seed_override = -1, workers_override = 0;
    for (const std::string name : {"solve", "verify", "estimate", "bench"}) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("config", config_path, "experiment config (JSON)")->required();
        sub->add_option("--seed", seed_override, "seed override");
        sub->add_option("--out", out_override, "output directory override");
        sub->add_option("--workers", workers_override, "worker threads");
    }

    CLI11_PARSE(app, argc, argv);

    try {
        Config cfg = load_config(config_path, out_override, seed_override, workers_override);
        std::string sub = app.get_subcommands().front()->get_name();
        if (sub == "solve") return cmd_solve(cfg);
        if (sub == "verify") return cmd_verify(cfg);
        if (sub == "estimate") return cmd_estimate(cfg);
        return cmd_bench(cfg);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
