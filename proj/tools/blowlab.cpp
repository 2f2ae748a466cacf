// Command-line laboratory for the critical-gradient blow-up model
//   u_t = Lap u + mu |grad u|^q + |u|^{p-1} u,  q = 2p/(p+1), p > 3.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "blowlab/blowup.hpp"
#include "blowlab/config.hpp"
#include "blowlab/cutoff.hpp"
#include "blowlab/errors.hpp"
#include "blowlab/hermite.hpp"
#include "blowlab/io.hpp"
#include "blowlab/monitor.hpp"
#include "blowlab/quadrature.hpp"
#include "blowlab/semigroup.hpp"
#include "blowlab/shooting.hpp"
#include "blowlab/solver.hpp"
#include "blowlab/terms.hpp"

using namespace blowlab;
namespace fs = std::filesystem;

namespace {

struct Cli {
    std::string config_path;
    std::string out_dir;
    std::string trajectory_dir;
    int threads = 0;  // 0: take the config value
    bool resume = false;
};

FullConfig load(const Cli& cli) {
    FullConfig cfg = cli.config_path.empty() ? parse_config("")
                                             : load_config_file(cli.config_path);
    if (cli.threads > 0) cfg.opts.threads = cli.threads;
    return cfg;
}

std::string ensure_out(const Cli& cli, const std::string& cmd) {
    std::string dir = cli.out_dir.empty() ? "out-" + cmd : cli.out_dir;
    fs::create_directories(dir);
    return dir;
}

double wall_since(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int run_constants(const Cli& cli) {
    const auto t0 = std::chrono::steady_clock::now();
    const FullConfig cfg = load(cli);
    const std::string dir = ensure_out(cli, "constants");
    const ModelParams& mp = cfg.params;

    std::string block;
    auto kv = [&](const char* k, double v) { block += std::string(k) + "=" + fmt17(v) + "\n"; };
    kv("p", mp.p);
    kv("mu", mp.mu);
    block += "dim=1\n";
    kv("q", mp.q);
    kv("beta", mp.beta);
    kv("kappa", mp.kappa);
    kv("b", mp.b);
    kv("a", mp.a);
    kv("K", mp.K);
    kv("gamma", cfg.shrink.gamma);
    std::cout << block;
    write_text_file(dir + "/constants.txt", block);

    nlohmann::json j;
    j["p"] = fmt17(mp.p);
    j["mu"] = fmt17(mp.mu);
    j["dim"] = 1;
    j["q"] = fmt17(mp.q);
    j["beta"] = fmt17(mp.beta);
    j["kappa"] = fmt17(mp.kappa);
    j["b"] = fmt17(mp.b);
    j["a"] = fmt17(mp.a);
    j["K"] = fmt17(mp.K);
    j["gamma"] = fmt17(cfg.shrink.gamma);
    write_text_file(dir + "/constants.json", j.dump(2) + "\n");
    write_manifest(dir, "constants", cfg, {"constants.txt", "constants.json"},
                   wall_since(t0));
    return 0;
}

int run_spectral_check(const Cli& cli) {
    const auto t0 = std::chrono::steady_clock::now();
    const FullConfig cfg = load(cli);
    const std::string dir = ensure_out(cli, "spectral-check");

    const Quadrature quad = Quadrature::gauss_hermite_rho(256);
    CsvWriter ortho(dir + "/orthogonality.csv", {"n", "m", "computed", "exact", "error"});
    double worst = 0.0;
    for (int n = 0; n <= 8; ++n)
        for (int m = 0; m <= 8; ++m) {
            const double got = quad.integrate(
                [n, m](double y) { return hermite_h(n, y) * hermite_h(m, y); });
            const double want = (n == m) ? hermite_norm_sq(n) : 0.0;
            const double scale =
                std::max(1.0, std::sqrt(hermite_norm_sq(n) * hermite_norm_sq(m)));
            const double err = std::abs(got - want) / scale;
            worst = std::max(worst, err);
            ortho.row({static_cast<double>(n), static_cast<double>(m), got, want, err});
        }

    CsvWriter mom(dir + "/moments.csv", {"name", "computed", "exact", "error"});
    const auto h2 = [](double y) { return y * y - 2.0; };
    const double m2 = quad.inner(h2, h2);
    mom.row_mixed({"h2_h2", fmt17(m2), fmt17(8.0), fmt17(std::abs(m2 - 8.0))});
    const double m3 = quad.integrate([&](double y) { return std::pow(h2(y), 3); });
    mom.row_mixed({"h2_cubed", fmt17(m3), fmt17(64.0), fmt17(std::abs(m3 - 64.0))});
    for (double p : {4.0, 5.0, 7.0, 9.0}) {
        const double q = 2.0 * p / (p + 1.0);
        const double lhs = integrate_rho_graded(
            [q](double y) { return std::pow(std::abs(y), q) * (y * y - 2.0); });
        const double rhs = 2.0 * q * abs_moment_rho(q);
        mom.row_mixed({"qmoment_p" + std::to_string(static_cast<int>(p)), fmt17(lhs),
                       fmt17(rhs), fmt17(std::abs(lhs - rhs) / rhs)});
    }
    std::cout << "orthogonality max normalized error " << fmt17(worst) << "\n";
    write_manifest(dir, "spectral-check", cfg, {"orthogonality.csv", "moments.csv"},
                   wall_since(t0));
    return 0;
}

int run_semigroup_check(const Cli& cli) {
    const auto t0 = std::chrono::steady_clock::now();
    const FullConfig cfg = load(cli);
    const std::string dir = ensure_out(cli, "semigroup-check");

    CsvWriter csv(dir + "/eigenaction.csv", {"m", "theta", "rel_error"});
    for (int m = 0; m <= 4; ++m)
        for (double theta : {0.1, 1.0, 3.0}) {
            const GridField r = GridField::sample(0.0, 30.0, 0.02,
                                                  [m](double y) { return hermite_h(m, y); });
            const GridField out = apply_semigroup(theta, r);
            const double lam = std::exp((1.0 - 0.5 * m) * theta);
            double sup_err = 0.0, sup_ref = 0.0;
            for (int j = 0; j < out.size(); ++j) {
                if (std::abs(out.y(j)) > 10.0) continue;
                sup_err = std::max(sup_err,
                                   std::abs(out.values[j] - lam * hermite_h(m, out.y(j))));
                sup_ref = std::max(sup_ref, std::abs(hermite_h(m, out.y(j))));
            }
            csv.row({static_cast<double>(m), theta, sup_err / sup_ref});
        }

    CsvWriter law(dir + "/semigroup_law.csv", {"theta1", "theta2", "sup_error"});
    const GridField r = GridField::sample(0.0, 30.0, 0.02, [](double y) {
        return std::exp(-y * y) * std::cos(2.0 * y);
    });
    const GridField two = apply_semigroup(0.8, apply_semigroup(0.7, r));
    const GridField one = apply_semigroup(1.5, r);
    double sup = 0.0;
    for (int j = 0; j < r.size(); ++j)
        if (std::abs(r.y(j)) <= 12.0) sup = std::max(sup, std::abs(two.values[j] - one.values[j]));
    law.row({0.7, 0.8, sup});
    write_manifest(dir, "semigroup-check", cfg, {"eigenaction.csv", "semigroup_law.csv"},
                   wall_since(t0));
    return 0;
}

int run_residual_study(const Cli& cli) {
    const auto t0 = std::chrono::steady_clock::now();
    const FullConfig cfg = load(cli);
    const std::string dir = ensure_out(cli, "residual-study");
    const ModelParams& mp = cfg.params;
    const ModelParams mpb = mp.with_scaled_b(cfg.opts.b_factor);

    CsvWriter csv(dir + "/residuals.csv",
                  {"s", "R0", "R1", "R2", "s2b1_R0", "s4b_R2", "R2_bvariant",
                   "s2b1_R2_bvariant"});
    const int n = cfg.opts.s_ladder_n;
    for (int k = 0; k < n; ++k) {
        const double s = cfg.opts.s_ladder_lo *
                         std::pow(cfg.opts.s_ladder_hi / cfg.opts.s_ladder_lo,
                                  n > 1 ? static_cast<double>(k) / (n - 1) : 0.0);
        const ResidualModes m = residual_modes(s, mp);
        const ResidualModes mb = residual_modes(s, mpb);
        csv.row({s, m.R0, m.R1, m.R2, m.R0 * std::pow(s, 2.0 * mp.beta + 1.0),
                 m.R2 * std::pow(s, 4.0 * mp.beta), mb.R2,
                 mb.R2 * std::pow(s, 2.0 * mp.beta + 1.0)});
    }
    write_manifest(dir, "residual-study", cfg, {"residuals.csv"}, wall_since(t0));
    return 0;
}

void write_series_csv(const std::string& path, const std::vector<TrajectoryPoint>& series) {
    CsvWriter csv(path, {"s", "v0", "v1", "v2", "norm_minus_weighted", "norm_e", "sup_v"});
    for (const TrajectoryPoint& pt : series)
        csv.row({pt.s, pt.v0, pt.v1, pt.v2, pt.norm_minus_weighted, pt.norm_e, pt.sup_v});
}

void write_snapshot_csv(const std::string& path, const GridField& f) {
    CsvWriter csv(path, {"y", "v"});
    for (int j = 0; j < f.size(); ++j) csv.row({f.y(j), f.values[j]});
}

int run_simulate(const Cli& cli) {
    const auto t0 = std::chrono::steady_clock::now();
    const FullConfig cfg = load(cli);
    const std::string dir = ensure_out(cli, "simulate");
    const ModelParams& mp = cfg.params;
    const CommandOptions& op = cfg.opts;
    const double s_end = op.s_end > 0.0 ? op.s_end : op.s0 + op.window;

    GridField v0;
    if (cli.resume && fs::exists(dir + "/final_state.csv")) {
        const auto rows = read_csv(dir + "/final_state.csv");
        v0.dy = cfg.run.dy;
        v0.s = std::stod(rows.front()[2]);
        v0.values = Eigen::ArrayXd(rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i) v0.values[i] = std::stod(rows[i][1]);
    } else {
        v0 = initial_psi(op.d0, op.d1, op.s0, cfg.shrink.A, mp, cfg.run);
    }
    if (v0.s >= s_end) {
        std::cerr << "nothing to do: state already at s_end\n";
        return 0;
    }

    std::vector<std::string> outputs = {"series.csv", "final_state.csv"};
    const Trajectory traj = run_solver(v0, s_end, mp, cfg.run);
    write_series_csv(dir + "/series.csv", traj.series);
    for (const GridField& snap : traj.snapshots) {
        char name[64];
        std::snprintf(name, sizeof(name), "snapshot_%012.6f.csv", snap.s);
        write_snapshot_csv(dir + "/" + name, snap);
        outputs.push_back(name);
    }
    {
        CsvWriter csv(dir + "/final_state.csv", {"y", "v", "s"});
        for (int j = 0; j < traj.final_v.size(); ++j)
            csv.row({traj.final_v.y(j), traj.final_v.values[j], traj.final_v.s});
    }
    write_manifest(dir, "simulate", cfg, outputs, wall_since(t0));
    return 0;
}

int run_shoot(const Cli& cli) {
    const auto t0 = std::chrono::steady_clock::now();
    const FullConfig cfg = load(cli);
    const std::string dir = ensure_out(cli, "shoot");
    const CommandOptions& op = cfg.opts;

    const SearchResult res =
        topological_search(op.s0, op.window, cfg.shrink.A, cfg.params, cfg.run, op.depth,
                           cfg.shrink.epsilon_gamma, op.threads);

    CsvWriter csv(dir + "/shots.csv", {"d0", "d1", "s_exit", "confined_window",
                                       "exit_component", "sign_v0", "sign_v1", "confined"});
    for (const ShotSummary& s : res.shots)
        csv.row_mixed({fmt17(s.d0), fmt17(s.d1), fmt17(s.s_exit), fmt17(s.confined_window),
                       component_name(s.exit_component), std::to_string(s.sign_v0),
                       std::to_string(s.sign_v1), s.confined ? "1" : "0"});

    nlohmann::json j;
    j["best"] = {{"d0", fmt17(res.d0)}, {"d1", fmt17(res.d1)},
                 {"confined_window", fmt17(res.best_confined)}};
    j["center"] = {{"d0", fmt17(res.center_d0)}, {"d1", fmt17(res.center_d1)}};
    j["degree_lost"] = res.degree_lost;
    j["levels"] = nlohmann::json::array();
    for (const SearchLevel& lv : res.levels) {
        nlohmann::json lj;
        lj["level"] = lv.level;
        lj["rect"] = {fmt17(lv.lo0), fmt17(lv.hi0), fmt17(lv.lo1), fmt17(lv.hi1)};
        lj["chosen_quadrant"] = lv.chosen_quadrant;
        lj["best_confined"] = fmt17(lv.best_confined);
        j["levels"].push_back(lj);
    }
    write_text_file(dir + "/refinement.json", j.dump(2) + "\n");
    write_manifest(dir, "shoot", cfg, {"shots.csv", "refinement.json"}, wall_since(t0));
    std::cout << "best (d0,d1) = (" << fmt17(res.d0) << ", " << fmt17(res.d1)
              << ") confined " << fmt17(res.best_confined) << "\n";
    return res.degree_lost ? 6 : 0;
}

int run_monitor(const Cli& cli) {
    const auto t0 = std::chrono::steady_clock::now();
    const FullConfig cfg = load(cli);
    const std::string dir = ensure_out(cli, "monitor");
    const std::string traj_dir = cli.trajectory_dir.empty() ? dir : cli.trajectory_dir;

    std::vector<TrajectoryPoint> series;
    for (const auto& row : read_csv(traj_dir + "/series.csv")) {
        TrajectoryPoint pt;
        pt.s = std::stod(row[0]);
        pt.v0 = std::stod(row[1]);
        pt.v1 = std::stod(row[2]);
        pt.v2 = std::stod(row[3]);
        pt.norm_minus_weighted = std::stod(row[4]);
        pt.norm_e = std::stod(row[5]);
        pt.sup_v = std::stod(row[6]);
        series.push_back(pt);
    }
    const ModeOdeResiduals res = mode_ode_residuals(series, cfg.params);

    CsvWriter csv(dir + "/membership.csv",
                  {"s", "slack_e", "slack_minus", "slack_0", "slack_1", "slack_2", "r0", "r1",
                   "r2_residual"});
    for (std::size_t i = 0; i < series.size(); ++i) {
        const TrajectoryPoint& pt = series[i];
        ModeDecomposition dec;
        dec.s = pt.s;
        dec.v0 = pt.v0;
        dec.v1 = pt.v1;
        dec.v2 = pt.v2;
        dec.norm_minus_weighted = pt.norm_minus_weighted;
        dec.norm_e = pt.norm_e;
        const MembershipReport rep = check_membership(dec, cfg.shrink, pt.s);
        // residual series starts 4 samples in
        double r0 = 0.0, r1 = 0.0, r2 = 0.0;
        if (i >= 4 && i - 4 < res.s.size()) {
            r0 = res.r0[i - 4];
            r1 = res.r1[i - 4];
            r2 = res.r2[i - 4];
        }
        csv.row({pt.s, rep.slack_e, rep.slack_minus, rep.slack_0, rep.slack_1, rep.slack_2,
                 r0, r1, r2});
    }
    std::cout << "min confining A = "
              << fmt17(min_confining_A(series, cfg.params, cfg.shrink.gamma)) << "\n";
    write_manifest(dir, "monitor", cfg, {"membership.csv"}, wall_since(t0));
    return 0;
}

int run_analyze(const Cli& cli) {
    const auto t0 = std::chrono::steady_clock::now();
    const FullConfig cfg = load(cli);
    const std::string dir = ensure_out(cli, "analyze");
    const ModelParams& mp = cfg.params;
    const CommandOptions& op = cfg.opts;

    // ride the trapped trajectory (pinned expanding modes) until the physical
    // guard, then run every physical-variable diagnostic
    RunConfig rc = cfg.run;
    rc.pin_modes = true;
    const double guard = rc.guard_u;
    GridField v0 = initial_psi(op.d0, op.d1, op.s0, cfg.shrink.A, mp, rc);
    Observer stop_at_guard = [&](const TrajectoryPoint& pt, const GridField&) {
        return std::exp(pt.s / (mp.p - 1.0)) * pt.sup_w < guard;
    };
    const double s_end = op.s_end > 0.0
                             ? op.s_end
                             : (mp.p - 1.0) * std::log(guard / mp.kappa) + 2.0;
    const Trajectory traj = run_solver(v0, s_end, mp, rc, stop_at_guard);
    const PhysicalTrajectory phys = physical_trajectory(traj, mp);

    const BlowupEstimate est = estimate_blowup(phys);
    const FinalProfileReport fp = final_profile(phys, phys.s.back() - 15.0);
    const GradientBlowupSeries gb = gradient_blowup_diagnostic(phys, op.alpha,
                                                               cfg.shrink.gamma);
    const SinglePointReport sp = single_point_check(phys, op.x0, op.K0);

    CsvWriter fpcsv(dir + "/final_profile.csv", {"x", "ustar", "model", "ratio_mu0"});
    for (std::size_t i = 0; i < fp.x.size(); ++i)
        fpcsv.row({fp.x[i], fp.ustar[i], fp.model[i], fp.ratio_mu0[i]});

    CsvWriter gbcsv(dir + "/gradient_blowup.csv", {"s", "grad_w", "scaled"});
    for (std::size_t i = 0; i < gb.s.size(); ++i)
        gbcsv.row({gb.s[i], gb.grad_w[i], gb.scaled[i]});

    CsvWriter pe(dir + "/profile_error.csv", {"s", "sup_error", "sup_error_wrong_beta"});
    for (const GridField& w : phys.w_snaps) {
        pe.row({w.s, profile_convergence_error(w, mp, mp.beta).sup,
                profile_convergence_error(w, mp, 0.5).sup});
    }

    nlohmann::json j;
    j["T_est"] = fmt17(est.T_est);
    j["T_true"] = fmt17(phys.T);
    j["a_est"] = fmt17(est.a_est);
    j["rate_exponent"] = fmt17(est.rate_exponent);
    j["rate_target"] = fmt17(-1.0 / (mp.p - 1.0));
    j["fit_residual"] = fmt17(est.fit_residual);
    j["final_profile_slope"] = fmt17(fp.slope);
    j["final_profile_decades"] = fmt17(fp.decades);
    j["gradient_exponent"] = fmt17(gb.exponent);
    j["gradient_exponent_target"] = fmt17(op.alpha - 2.0 * mp.beta);
    j["single_point"] = {{"x0", fmt17(op.x0)},
                         {"t0", fmt17(sp.t0)},
                         {"capped", sp.capped},
                         {"threshold_sup", fmt17(sp.threshold_sup)},
                         {"local_sup_u", fmt17(sp.local_sup_u)},
                         {"local_sup_grad", fmt17(sp.local_sup_grad)},
                         {"global_sup_u", fmt17(sp.global_sup_u)},
                         {"bounded_at_x0", sp.bounded_at_x0}};
    write_text_file(dir + "/summary.json", j.dump(2) + "\n");
    write_manifest(dir, "analyze", cfg,
                   {"summary.json", "final_profile.csv", "gradient_blowup.csv",
                    "profile_error.csv"},
                   wall_since(t0));
    std::cout << "rate " << fmt17(est.rate_exponent) << " profile slope " << fmt17(fp.slope)
              << "\n";
    return 0;
}

int run_stability(const Cli& cli) {
    const auto t0 = std::chrono::steady_clock::now();
    const FullConfig cfg = load(cli);
    const std::string dir = ensure_out(cli, "stability");
    const CommandOptions& op = cfg.opts;

    const std::vector<StabilityRow> rows = stability_experiment(
        op.d0, op.d1, op.s0, op.window, cfg.shrink.A, cfg.params, cfg.run, op.eps_list);
    CsvWriter csv(dir + "/stability.csv", {"eps", "kind", "T_drift", "a_drift"});
    for (const StabilityRow& r : rows)
        csv.row_mixed({fmt17(r.eps), r.kind, fmt17(r.T_drift), fmt17(r.a_drift)});
    write_manifest(dir, "stability", cfg, {"stability.csv"}, wall_since(t0));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for critical-gradient blow-up profiles"};
    app.require_subcommand(1);

    Cli cli;
    app.add_option("--config", cli.config_path, "key=value configuration file");
    app.add_option("--out", cli.out_dir, "output directory");
    app.add_option("--threads", cli.threads, "worker threads for concurrent shots");
    app.add_option("--trajectory", cli.trajectory_dir, "trajectory directory (monitor)");
    app.add_flag("--resume", cli.resume, "continue a simulate run from its final state");

    const std::vector<std::pair<std::string, int (*)(const Cli&)>> commands = {
        {"constants", run_constants},       {"spectral-check", run_spectral_check},
        {"semigroup-check", run_semigroup_check}, {"residual-study", run_residual_study},
        {"simulate", run_simulate},         {"shoot", run_shoot},
        {"monitor", run_monitor},           {"analyze", run_analyze},
        {"stability", run_stability}};
    for (const auto& [name, fn] : commands) app.add_subcommand(name)->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        for (const auto& [name, fn] : commands)
            if (app.get_subcommand(name)->parsed()) return fn(cli);
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "config error" << (e.line ? " (line " + std::to_string(e.line) + ")" : "")
                  << ": " << e.what() << "\n";
        return 3;
    } catch (const InvalidParams& e) {
        std::cerr << "invalid parameters: " << e.what() << "\n";
        return 4;
    } catch (const DomainError& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return 4;
    } catch (const DivergenceError& e) {
        std::cerr << "divergence at s = " << e.s_fail << ": " << e.what() << "\n";
        return 5;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
