// tcm: exact single-mode field dynamics for N two-level molecules, with the
// average-field approximation, closed-form oracles, figure presets, parameter
// sweeps and a validation suite.
//
// Exit codes: 0 ok, 1 configuration error, 2 numerical/truncation error,
// 3 validation failure.

#include <cstdio>
#include <map>

#include "CLI11.hpp"
#include "tcm/config.hpp"
#include "tcm/svg.hpp"
#include "tcm/validation.hpp"

namespace {

void emit(const tcm::CsvTable& table, const std::string& csv_path, const std::string& svg_path,
          const std::string& title) {
    tcm::write_text_file(csv_path, tcm::format_csv(table));
    std::printf("wrote %s\n", csv_path.c_str());
    if (!svg_path.empty()) {
        tcm::write_text_file(svg_path, tcm::render_svg(table, title));
        std::printf("wrote %s\n", svg_path.c_str());
    }
}

std::vector<double> series_re(tcm::ObservableSeries s) { return std::move(s.re); }

// ---------------------------------------------------------------- presets

struct PresetArgs {
    std::string out_dir = ".";
    int threads = 1;
    std::optional<double> beta;
    std::optional<double> delta;
    bool svg = false;
};

double preset_beta(const PresetArgs& a, double fallback_beta) {
    if (a.beta && a.delta) throw std::invalid_argument("beta and delta are mutually exclusive");
    if (a.delta) {
        if (*a.delta < 0.0) throw std::invalid_argument("delta must be >= 0");
        return 2.0 * std::sqrt(*a.delta);
    }
    return a.beta ? *a.beta : fallback_beta;
}

const std::vector<int>& diagnostic_n_grid() {
    static const std::vector<int> ns = {0,  1,  2,  3,   4,   5,   6,   7,    8,    9,
                                        10, 20, 50, 100, 200, 500, 1000, 2000, 5000, 10000};
    return ns;
}

tcm::CsvTable preset_fig1(const PresetArgs& a) {
    const auto taus = tcm::uniform_grid(20.0, 1001);
    const auto d = tcm::coherent(100.0);
    const double b_nr = 10.0;  // delta = 25
    tcm::CsvTable t;
    t.comments = {"preset: fig1",
                  "stimulated gain S1, exact vs average-field approximation",
                  "N=4 distribution=coherent:100 curves: beta=0 and delta=25",
                  "n_trunc=" + std::to_string(d.n_trunc())};
    t.columns = {"tau", "exact_beta0", "afa_beta0", "exact_delta25", "afa_delta25"};
    const auto e0 = series_re(tcm::s1_all_up(4, 0.0, d, taus, a.threads));
    const auto a0 = series_re(tcm::s1_afa(4, 0.0, d, taus));
    const auto e25 = series_re(tcm::s1_all_up(4, b_nr, d, taus, a.threads));
    const auto a25 = series_re(tcm::s1_afa(4, b_nr, d, taus));
    for (std::size_t i = 0; i < taus.size(); ++i)
        t.rows.push_back({taus[i], e0[i], a0[i], e25[i], a25[i]});
    return t;
}

tcm::CsvTable preset_fig2(const PresetArgs& a) {
    const auto taus = tcm::uniform_grid(20.0, 1001);
    const auto d = tcm::thermal(30.0);
    const double beta = 20.0;  // delta = 100
    tcm::CsvTable t;
    t.comments = {"preset: fig2",
                  "stimulated gain S1, exact vs average-field approximation",
                  "N=4 distribution=thermal:30 delta=100",
                  "n_trunc=" + std::to_string(d.n_trunc())};
    t.columns = {"tau", "exact", "afa"};
    const auto e = series_re(tcm::s1_all_up(4, beta, d, taus, a.threads));
    const auto f = series_re(tcm::s1_afa(4, beta, d, taus));
    for (std::size_t i = 0; i < taus.size(); ++i) t.rows.push_back({taus[i], e[i], f[i]});
    return t;
}

tcm::CsvTable preset_figE1(const PresetArgs& a) {
    const auto taus = tcm::uniform_grid(25.0, 1201);
    tcm::CsvTable t;
    t.comments = {"preset: figE1", "spontaneous emission, all molecules up",
                  "N=50 distribution=fock:0 beta=0 observable=s1"};
    t.columns = {"tau", "s1_exact"};
    const auto e = series_re(tcm::s1_all_up(50, 0.0, tcm::fock(0), taus, a.threads));
    for (std::size_t i = 0; i < taus.size(); ++i) t.rows.push_back({taus[i], e[i]});
    return t;
}

tcm::CsvTable preset_figE2(const PresetArgs& a) {
    const auto taus = tcm::uniform_grid(25.0, 1201);
    tcm::CsvTable t;
    t.comments = {"preset: figE2", "super-radiant half-excited Dicke state (decay and revival)",
                  "N=50 distribution=fock:0 beta=0 observable=ee scenario=half_up"};
    t.columns = {"tau", "ee_exact"};
    const auto st = tcm::make_tlm_state({tcm::ScenarioKind::dicke, 0}, 50);
    const auto e = series_re(tcm::ee_general(50, 0.0, tcm::fock(0), st, taus, a.threads));
    for (std::size_t i = 0; i < taus.size(); ++i) t.rows.push_back({taus[i], e[i]});
    return t;
}

tcm::CsvTable preset_figF1(const PresetArgs& a) {
    const auto taus = tcm::uniform_grid(10.0, 1001);
    const auto df = tcm::fock(4);
    const auto dc = tcm::coherent(4.0);
    tcm::CsvTable t;
    t.comments = {"preset: figF1",
                  "photon number: gain (all up, nbar+S1) vs absorption (all down, nbar-S4)",
                  "N=10 beta=0 distributions: fock:4 and coherent:4",
                  "n_trunc=" + std::to_string(dc.n_trunc())};
    t.columns = {"tau", "fock_up", "fock_down", "coherent_up", "coherent_down"};
    const auto fu = series_re(tcm::s1_all_up(10, 0.0, df, taus, a.threads));
    const auto fd = series_re(tcm::s4_all_down(10, 0.0, df, taus, a.threads));
    const auto cu = series_re(tcm::s1_all_up(10, 0.0, dc, taus, a.threads));
    const auto cd = series_re(tcm::s4_all_down(10, 0.0, dc, taus, a.threads));
    for (std::size_t i = 0; i < taus.size(); ++i)
        t.rows.push_back({taus[i], 4.0 + fu[i], 4.0 - fd[i], 4.0 + cu[i], 4.0 - cd[i]});
    return t;
}

tcm::CsvTable preset_figB1(const PresetArgs& a) {
    const int N = 4, k = 1;
    const double beta = preset_beta(a, 10.0);  // default delta = 25
    auto rows = tcm::q_difference_table(N, beta, diagnostic_n_grid(), k);
    tcm::CsvTable t;
    t.comments = {"preset: figB1", "same-block eigenvalue gaps q_j - q_{j+1} vs n",
                  "N=4 beta=" + tcm::format_value(beta) +
                      " (beta/delta are preset parameters; default delta=25)",
                  "afa_pred = sqrt(4 n0 + beta^2) with n0 = n + N/2"};
    t.columns = {"n", "afa_pred"};
    for (int j = 0; j + k <= N; ++j) t.columns.push_back("dq_j" + std::to_string(j));
    for (const auto& r : rows) {
        const double n0 = r.n + 0.5 * N;
        std::vector<double> row{double(r.n), std::sqrt(4.0 * n0 + beta * beta)};
        row.insert(row.end(), r.same_block.begin(), r.same_block.end());
        t.rows.push_back(std::move(row));
    }
    return t;
}

tcm::CsvTable preset_figB2(const PresetArgs& a) {
    const int N = 4, k = 0;
    const double beta = preset_beta(a, 10.0);
    auto rows = tcm::q_difference_table(N, beta, diagnostic_n_grid(), k);
    tcm::CsvTable t;
    t.comments = {"preset: figB2",
                  "adjacent-block eigenvalue gaps q^c_j - q^{c+1}_j - beta vs n (sub-unit spread)",
                  "N=4 beta=" + tcm::format_value(beta) +
                      " (beta/delta are preset parameters; default delta=25)"};
    t.columns = {"n"};
    for (int j = 0; j + k <= N; ++j) t.columns.push_back("dq_j" + std::to_string(j));
    for (const auto& r : rows) {
        std::vector<double> row{double(r.n)};
        row.insert(row.end(), r.adjacent.begin(), r.adjacent.end());
        t.rows.push_back(std::move(row));
    }
    return t;
}

tcm::CsvTable preset_figB3(const PresetArgs& a) {
    const int N = 4;
    const double beta = preset_beta(a, 0.0);
    tcm::CsvTable t;
    t.comments = {"preset: figB3",
                  "gain coefficient sums by eigenvalue gap k (k=1 -> -N/4, k>=2 -> 0)",
                  "N=4 beta=" + tcm::format_value(beta)};
    t.columns = {"n"};
    for (int k = 1; k <= N; ++k) t.columns.push_back("k" + std::to_string(k));
    for (int n : diagnostic_n_grid()) {
        std::vector<double> row{double(n)};
        for (int k = 1; k <= N; ++k) row.push_back(tcm::coefficient_sums(N, beta, n, k).s1_sum);
        t.rows.push_back(std::move(row));
    }
    return t;
}

tcm::CsvTable preset_figB4(const PresetArgs& a) {
    const int N = 10;
    const double beta = preset_beta(a, 10.0);
    const double D = 0.25 * beta * beta;
    tcm::CsvTable t;
    t.comments = {"preset: figB4",
                  "amplitude coefficient sums by gap k vs the average-field prediction",
                  "N=10 beta=" + tcm::format_value(beta),
                  "pred_k0 = sqrt(n+1) + N/(4 sqrt(n+1)) n0/(n0+delta); pred_k1 = -half of the "
                  "oscillating part"};
    t.columns = {"n", "k0", "kp1", "km1", "pred_k0", "pred_k1"};
    for (int n : diagnostic_n_grid()) {
        const double n0 = n + 0.5 * N;
        const double pred0 = std::sqrt(n + 1.0) + N / (4.0 * std::sqrt(n + 1.0)) * n0 / (n0 + D);
        const double pred1 = -N / (8.0 * std::sqrt(n + 1.0)) * n0 / (n0 + D);
        t.rows.push_back({double(n), tcm::coefficient_sums(N, beta, n, 0).s2_sum,
                          tcm::coefficient_sums(N, beta, n, 1).s2_sum,
                          tcm::coefficient_sums(N, beta, n, -1).s2_sum, pred0, pred1});
    }
    return t;
}

tcm::CsvTable preset_collapse_revival(const PresetArgs& a) {
    const auto taus = tcm::uniform_grid(80.0, 4001);
    const auto d = tcm::coherent(100.0);
    tcm::CsvTable t;
    t.comments = {"preset: collapse_revival",
                  "collapse and revival of the one-molecule gain (revival near tau = 2 pi sqrt(nbar))",
                  "N=1 distribution=coherent:100 beta=0",
                  "n_trunc=" + std::to_string(d.n_trunc())};
    t.columns = {"tau", "s1_exact"};
    const auto e = series_re(tcm::s1_all_up(1, 0.0, d, taus, a.threads));
    for (std::size_t i = 0; i < taus.size(); ++i) t.rows.push_back({taus[i], e[i]});
    return t;
}

using PresetFn = tcm::CsvTable (*)(const PresetArgs&);

const std::map<std::string, PresetFn>& preset_registry() {
    static const std::map<std::string, PresetFn> reg = {
        {"fig1", preset_fig1},
        {"fig2", preset_fig2},
        {"figE1", preset_figE1},
        {"figE2", preset_figE2},
        {"figF1", preset_figF1},
        {"figB1", preset_figB1},
        {"figB2", preset_figB2},
        {"figB3", preset_figB3},
        {"figB4", preset_figB4},
        {"collapse_revival", preset_collapse_revival},
    };
    return reg;
}

// ------------------------------------------------------------------ sweep

struct SweepArgs {
    std::vector<int> Ns;
    std::vector<double> nbars;
    std::vector<double> betas = {0.0};
    std::string observable = "s1";
    std::string scenario = "all_up";
    std::string statistic = "stationary_mean";
    std::string dist_kind = "coherent";
    double tau_max = 20.0;
    int steps = 201;
    double tail_tol = 1e-12;
    int threads = 1;
    std::string csv_path = "sweep.csv";
};

tcm::CsvTable run_sweep(const SweepArgs& a) {
    const tcm::ObservableKind obs = tcm::parse_observable(a.observable);
    if (obs == tcm::ObservableKind::s2)
        throw std::invalid_argument("sweep supports observables s1, s4 and ee");
    if (a.statistic != "stationary_mean" && a.statistic != "series")
        throw std::invalid_argument("statistic must be stationary_mean or series");
    const bool series = a.statistic == "series";

    tcm::CsvTable t;
    t.comments = {"sweep over N x nbar x beta",
                  "observable=" + a.observable + " scenario=" + a.scenario +
                      " statistic=" + a.statistic + " distribution_kind=" + a.dist_kind,
                  "rows ordered lexicographically by (N, nbar, beta" +
                      std::string(series ? ", tau)" : ")")};
    t.columns = {"N", "nbar", "beta"};
    if (series) {
        t.columns.push_back("tau");
        t.columns.push_back("value_re");
    } else {
        t.columns.push_back("stationary_mean");
    }

    // grids are already user-ordered; sort to pin the lexicographic contract
    auto Ns = a.Ns;
    auto nbars = a.nbars;
    auto betas = a.betas;
    std::sort(Ns.begin(), Ns.end());
    std::sort(nbars.begin(), nbars.end());
    std::sort(betas.begin(), betas.end());

    const auto taus = tcm::uniform_grid(a.tau_max, a.steps);
    for (int N : Ns)
        for (double nbar : nbars)
            for (double beta : betas) {
                tcm::DistributionSpec spec;
                spec.value = nbar;
                if (a.dist_kind == "fock")
                    spec.kind = tcm::DistributionSpec::Kind::fock;
                else if (a.dist_kind == "coherent")
                    spec.kind = tcm::DistributionSpec::Kind::coherent;
                else if (a.dist_kind == "thermal")
                    spec.kind = tcm::DistributionSpec::Kind::thermal;
                else
                    throw std::invalid_argument("distribution kind must be fock|coherent|thermal");
                if (spec.kind == tcm::DistributionSpec::Kind::fock &&
                    (nbar < 0.0 || nbar != std::floor(nbar)))
                    throw std::invalid_argument("fock sweep values must be non-negative integers");
                const auto density = tcm::make_density(spec, a.tail_tol);
                const auto scen = tcm::parse_scenario(a.scenario, N);
                if (series) {
                    tcm::ObservableSeries s;
                    switch (obs) {
                        case tcm::ObservableKind::s1:
                            s = tcm::s1_all_up(N, beta, density, taus, a.threads);
                            break;
                        case tcm::ObservableKind::s4:
                            s = tcm::s4_all_down(N, beta, density, taus, a.threads);
                            break;
                        default:
                            s = tcm::ee_general(N, beta, density, tcm::make_tlm_state(scen, N), taus,
                                                a.threads);
                            break;
                    }
                    for (std::size_t i = 0; i < taus.size(); ++i)
                        t.rows.push_back({double(N), nbar, beta, taus[i], s.re[i]});
                } else {
                    double m = 0.0;
                    switch (obs) {
                        case tcm::ObservableKind::s1:
                            m = tcm::stationary_mean_s1(N, beta, density);
                            break;
                        case tcm::ObservableKind::s4:
                            m = tcm::stationary_mean_s4(N, beta, density);
                            break;
                        default:
                            m = tcm::stationary_mean_ee(N, beta, density, tcm::make_tlm_state(scen, N));
                            break;
                    }
                    t.rows.push_back({double(N), nbar, beta, m});
                }
            }
    return t;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "exact time evolution of a single quantized field mode coupled to N two-level molecules"};
    app.require_subcommand(1);

    // ---- run ----
    tcm::RunConfig cfg;
    cfg.csv_path = "run.csv";
    auto* run = app.add_subcommand("run", "evaluate one configuration and write CSV (and SVG)");
    run->set_config("--config", "", "flat key=value config file (command-line flags win)");
    run->add_option("--observable", cfg.observable, "s1|s2|s4|ee")->capture_default_str();
    run->add_option("--method", cfg.method, "exact|afa|closed")->capture_default_str();
    run->add_option("--scenario", cfg.scenario,
                    "all_up|all_down|one_up_specified|one_up_dicke|two_up_specified|half_up|dicke:m")
        ->capture_default_str();
    run->add_option("-N,--molecules", cfg.N, "molecule count")->capture_default_str();
    run->add_option("--distribution", cfg.distribution, "fock:n0|coherent:nbar|thermal:nbar")
        ->capture_default_str();
    auto* beta_opt = run->add_option("--beta", cfg.beta, "detuning beta");
    run->add_option("--delta", cfg.delta, "detuning delta = beta^2/4")->excludes(beta_opt);
    run->add_option("--tau-max", cfg.tau_max, "grid endpoint")->capture_default_str();
    run->add_option("--steps", cfg.steps, "grid size (>= 2)")->capture_default_str();
    run->add_option("--tail-tol", cfg.tail_tol, "density truncation tail bound")->capture_default_str();
    run->add_option("--threads", cfg.threads, "worker threads")->capture_default_str();
    run->add_option("--csv", cfg.csv_path, "output CSV path")->capture_default_str();
    run->add_option("--svg", cfg.svg_path, "optional SVG plot path");

    // ---- preset ----
    std::string preset_name;
    PresetArgs pargs;
    auto* preset = app.add_subcommand("preset", "write a named figure-reproduction CSV");
    preset->add_option("name", preset_name, "fig1|fig2|figE1|figE2|figF1|figB1|figB2|figB3|figB4|collapse_revival")
        ->required();
    preset->add_option("--out-dir", pargs.out_dir, "output directory")->capture_default_str();
    preset->add_option("--threads", pargs.threads, "worker threads")->capture_default_str();
    auto* pbeta = preset->add_option("--beta", pargs.beta, "override beta (figB presets)");
    preset->add_option("--delta", pargs.delta, "override delta (figB presets)")->excludes(pbeta);
    preset->add_flag("--svg", pargs.svg, "also write an SVG plot");

    // ---- sweep ----
    SweepArgs sargs;
    auto* sweep = app.add_subcommand("sweep", "grid over N x nbar x beta, one CSV table");
    sweep->add_option("--N", sargs.Ns, "molecule counts")->delimiter(',');
    sweep->add_option("--nbar", sargs.nbars, "distribution parameters")->delimiter(',');
    sweep->add_option("--beta", sargs.betas, "detunings (default 0)")->delimiter(',');
    sweep->add_option("--observable", sargs.observable, "s1|s4|ee")->capture_default_str();
    sweep->add_option("--scenario", sargs.scenario, "scenario for ee")->capture_default_str();
    sweep->add_option("--statistic", sargs.statistic, "stationary_mean|series")->capture_default_str();
    sweep->add_option("--distribution-kind", sargs.dist_kind, "fock|coherent|thermal")
        ->capture_default_str();
    sweep->add_option("--tau-max", sargs.tau_max, "grid endpoint (series)")->capture_default_str();
    sweep->add_option("--steps", sargs.steps, "grid size (series)")->capture_default_str();
    sweep->add_option("--tail-tol", sargs.tail_tol, "density truncation tail bound")
        ->capture_default_str();
    sweep->add_option("--threads", sargs.threads, "worker threads")->capture_default_str();
    sweep->add_option("--csv", sargs.csv_path, "output CSV path")->capture_default_str();

    // ---- validate ----
    int vthreads = 1;
    auto* validate = app.add_subcommand("validate", "run the oracle/invariant suite");
    validate->add_option("--threads", vthreads, "worker threads")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }

    try {
        if (*run) {
            const auto table = tcm::execute_run(cfg);
            emit(table, cfg.csv_path, cfg.svg_path,
                 std::string(cfg.observable) + " (" + cfg.method + ")");
        } else if (*preset) {
            const auto& reg = preset_registry();
            auto it = reg.find(preset_name);
            if (it == reg.end()) {
                std::string names;
                for (const auto& [k, v] : reg) names += (names.empty() ? "" : ", ") + k;
                throw std::invalid_argument("unknown preset '" + preset_name + "' (have: " + names + ")");
            }
            const auto table = it->second(pargs);
            const std::string base = pargs.out_dir + "/" + preset_name;
            emit(table, base + ".csv", pargs.svg ? base + ".svg" : "", preset_name);
        } else if (*sweep) {
            const auto table = run_sweep(sargs);
            emit(table, sargs.csv_path, "", "sweep");
        } else if (*validate) {
            const auto checks = tcm::run_validation(vthreads);
            const int failed = tcm::print_validation_report(checks);
            if (failed > 0) return 3;
        }
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const tcm::numerical_error& e) {  // includes truncation_error
        std::fprintf(stderr, "numerical error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
