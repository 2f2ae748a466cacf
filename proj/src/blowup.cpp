#include "blowlab/blowup.hpp"

#include <algorithm>
#include <cmath>

#include "blowlab/cutoff.hpp"
#include "blowlab/errors.hpp"
#include "blowlab/fit.hpp"
#include "blowlab/shooting.hpp"

namespace blowlab {

double PhysicalTrajectory::u_at(const GridField& w, double x) const {
    const double amp = std::exp(w.s / (mp.p - 1.0));
    const double y = x * std::exp(0.5 * w.s);
    if (std::abs(y) <= w.half_width()) return amp * w.value_at(y);
    return amp * profile_phi(y, w.s, mp);  // Dirichlet tail: w = phi outside
}

double PhysicalTrajectory::grad_u_at(const GridField& w, double x) const {
    const double h = w.dy * std::exp(-0.5 * w.s);
    return (u_at(w, x + h) - u_at(w, x - h)) / (2.0 * h);
}

PhysicalTrajectory physical_trajectory(const Trajectory& traj, const ModelParams& mp) {
    PhysicalTrajectory pt;
    pt.mp = mp;
    if (traj.series.empty()) throw InvalidParams("empty trajectory");
    pt.T = std::exp(-traj.series.front().s);
    for (const TrajectoryPoint& p : traj.series) {
        pt.s.push_back(p.s);
        pt.sup_u.push_back(std::exp(p.s / (mp.p - 1.0)) * p.sup_w);
    }
    for (const GridField& v : traj.snapshots) {
        GridField w = v;
        for (int j = 0; j < w.size(); ++j) w.values[j] += profile_phi(w.y(j), w.s, mp);
        pt.w_snaps.push_back(std::move(w));
    }
    return pt;
}

BlowupEstimate estimate_blowup(const PhysicalTrajectory& traj, double tail_fraction,
                               double fit_tol) {
    const std::size_t n = traj.s.size();
    if (n < 8) throw InvalidParams("trajectory too short for blow-up estimation");
    const std::size_t start = static_cast<std::size_t>(n * (1.0 - tail_fraction));
    // Work in tau = e^{-s} = T - t: near T the physical time t collapses onto T
    // in double precision, while tau stays exact. The envelope is
    // sup_u^{-(p-1)} = alpha (T - t) = alpha (T - T_ref) + alpha tau.
    std::vector<double> tau, y;
    for (std::size_t i = start; i < n; ++i) {
        tau.push_back(std::exp(-traj.s[i]));
        y.push_back(std::pow(traj.sup_u[i], -(traj.mp.p - 1.0)));
    }
    const LineFit lin = fit_line(tau, y);

    BlowupEstimate est;
    const double T_minus_ref = lin.intercept / lin.slope;  // T_est - T_ref
    est.T_est = traj.T + T_minus_ref;
    double ymax = 0.0;
    for (double v : y) ymax = std::max(ymax, std::abs(v));
    est.fit_residual = lin.max_residual / ymax;
    est.accepted = est.fit_residual <= fit_tol;

    std::vector<double> lt, lu;
    for (std::size_t i = start; i < n; ++i) {
        const double gap = T_minus_ref + std::exp(-traj.s[i]);  // T_est - t_i
        if (gap > 0.0) {
            lt.push_back(std::log(gap));
            lu.push_back(std::log(traj.sup_u[i]));
        }
    }
    est.rate_exponent = lt.size() >= 2 ? fit_line(lt, lu).slope : 0.0;

    if (!traj.w_snaps.empty()) {
        const GridField& w = traj.w_snaps.back();
        int jm = 0;
        double best = -1.0;
        for (int j = 0; j < w.size(); ++j)
            if (std::abs(w.values[j]) > best) {
                best = std::abs(w.values[j]);
                jm = j;
            }
        double ypk = w.y(jm);
        if (jm > 0 && jm + 1 < w.size()) {
            const double fl = std::abs(w.values[jm - 1]), fc = std::abs(w.values[jm]),
                         fr = std::abs(w.values[jm + 1]);
            const double den = fl - 2.0 * fc + fr;
            if (den != 0.0) ypk += 0.5 * w.dy * (fl - fr) / den;
        }
        est.a_est = ypk * std::exp(-0.5 * w.s);
    }
    return est;
}

ProfileError profile_convergence_error(const GridField& w, const ModelParams& mp,
                                       double scaling_exponent) {
    const double se = std::pow(w.s, scaling_exponent);
    ProfileError err;
    for (int j = 0; j < w.size(); ++j) {
        const double z = w.y(j) / se;
        err.sup = std::max(err.sup, std::abs(w.values[j] - profile_phi0(z, mp)));
        if (j > 0 && j + 1 < w.size()) {
            const double gw = (w.values[j + 1] - w.values[j - 1]) / (2.0 * w.dy);
            const double gphi = -2.0 * mp.b * z / ((mp.p - 1.0) * se) *
                                std::pow(profile_phi0(z, mp), mp.p);
            err.sup_grad = std::max(err.sup_grad, std::abs(gw - gphi));
        }
    }
    return err;
}

GradientBlowupSeries gradient_blowup_diagnostic(const PhysicalTrajectory& traj, double alpha,
                                                double gamma) {
    const ModelParams& mp = traj.mp;
    const double amax = std::min(2.0 * mp.beta - 1.0, 0.5 * (gamma - 2.0 * mp.beta));
    if (!(alpha > 0.0) || !(alpha < amax))
        throw InvalidParams("alpha outside (0, " + std::to_string(amax) + ")");
    GradientBlowupSeries out;
    for (const GridField& w : traj.w_snaps) {
        const double ys = std::pow(w.s, alpha);
        if (ys + w.dy > w.half_width()) continue;
        const double g = (w.value_at(ys + w.dy) - w.value_at(ys - w.dy)) / (2.0 * w.dy);
        out.s.push_back(w.s);
        out.grad_w.push_back(std::abs(g));
        out.scaled.push_back(std::abs(g) * std::pow(w.s, 2.0 * mp.beta - alpha));
    }
    // fit past the initial transient, where the perturbation gradient still
    // rivals the profile's s^{alpha-2 beta}; keep at least four points
    const std::size_t n = out.s.size();
    const std::size_t skip = n >= 4 ? std::min(n / 3, n - 4) : 0;
    std::vector<double> ls(out.s.begin() + skip, out.s.end());
    std::vector<double> lg(out.grad_w.begin() + skip, out.grad_w.end());
    if (ls.size() >= 3) out.exponent = fit_loglog(ls, lg).slope;
    return out;
}

namespace {

double matching_radius(double T, double t0, double K0, double beta) {
    const double gap = T - t0;
    return K0 * std::sqrt(gap) * std::pow(std::abs(std::log(gap)), beta);
}

}  // namespace

SinglePointReport single_point_check(const PhysicalTrajectory& traj, double x0, double K0) {
    if (x0 == 0.0) throw InvalidParams("single_point_check requires x0 != 0");
    const ModelParams& mp = traj.mp;
    const double T = traj.T;
    SinglePointReport rep;

    // The radius K0 sqrt(T-t)|log(T-t)|^beta decreases in t once T-t < e^{-2 beta};
    // bisect there, clamping to the branch start when |x0| exceeds its range.
    const double t_lo = std::max(0.0, T - std::exp(-2.0 * mp.beta));
    if (std::abs(x0) >= matching_radius(T, t_lo, K0, mp.beta)) {
        rep.capped = true;
        rep.t0 = t_lo;
        rep.t0_residual = std::abs(matching_radius(T, t_lo, K0, mp.beta) - std::abs(x0));
    } else {
        double lo = t_lo, hi = T * (1.0 - 1e-15);
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (matching_radius(T, mid, K0, mp.beta) > std::abs(x0))
                lo = mid;
            else
                hi = mid;
        }
        rep.t0 = 0.5 * (lo + hi);
        if (!(rep.t0 >= 0.0) || !(rep.t0 < T)) throw DomainError("t0 bisection left [0,T)");
        rep.t0_residual = std::abs(matching_radius(T, rep.t0, K0, mp.beta) - std::abs(x0));
    }

    // window in the locally rescaled variables
    const double root = std::sqrt(T - rep.t0);
    const double amp_loc = std::pow(T - rep.t0, 1.0 / (mp.p - 1.0));
    for (const GridField& w : traj.w_snaps) {
        const double t = traj.t_of(w.s);
        if (t < rep.t0) continue;
        const double tau = (t - rep.t0) / (T - rep.t0);
        if (tau >= 1.0) continue;
        double local_u = 0.0, local_g = 0.0;
        for (int k = -8; k <= 8; ++k) {
            const double x = x0 + 0.125 * k * root;  // |xi| <= 1
            local_u = std::max(local_u, std::abs(traj.u_at(w, x)));
            local_g = std::max(local_g, std::abs(traj.grad_u_at(w, x)));
        }
        rep.local_sup_u = std::max(rep.local_sup_u, local_u);
        rep.local_sup_grad = std::max(rep.local_sup_grad, local_g);
        const double U = amp_loc * local_u;
        const double GU = amp_loc * root * local_g;
        rep.threshold_sup = std::max(
            rep.threshold_sup, std::pow(1.0 - tau, 1.0 / (mp.p - 1.0)) *
                                   (U + std::sqrt(1.0 - tau) * GU));
    }
    for (double su : traj.sup_u) rep.global_sup_u = std::max(rep.global_sup_u, su);
    rep.bounded_at_x0 = std::isfinite(rep.local_sup_u) && std::isfinite(rep.local_sup_grad) &&
                        rep.local_sup_u < 0.01 * rep.global_sup_u;
    return rep;
}

FinalProfileReport final_profile(const PhysicalTrajectory& traj, double s_tail_start) {
    const ModelParams& mp = traj.mp;
    FinalProfileReport rep;
    std::vector<std::pair<double, double>> pts;  // (x, u*)
    for (const GridField& w : traj.w_snaps) {
        if (w.s < s_tail_start) continue;
        // outer band: past supp chi, inside the grid with margin
        const double ylo = 2.05 * mp.K * std::pow(w.s, mp.beta);
        const double yhi = std::min(2.8 * mp.K * std::pow(w.s, mp.beta),
                                    w.half_width() - 4.0 * w.dy);
        if (yhi <= ylo) continue;
        const double amp = std::exp(w.s / (mp.p - 1.0));
        const double shrink = std::exp(-0.5 * w.s);
        for (int k = 0; k < 12; ++k) {
            const double y = ylo * std::pow(yhi / ylo, k / 11.0);
            pts.push_back({y * shrink, amp * w.value_at(y)});
        }
    }
    std::sort(pts.begin(), pts.end());
    std::vector<double> lx, lu;
    for (auto& [x, us] : pts) {
        const double arg = mp.b * x * x / std::pow(2.0 * std::abs(std::log(x)), 2.0 * mp.beta);
        rep.x.push_back(x);
        rep.ustar.push_back(us);
        rep.model.push_back(std::pow(arg, -1.0 / (mp.p - 1.0)));
        rep.ratio_mu0.push_back(
            us / std::pow(x * x / std::abs(std::log(x)), -1.0 / (mp.p - 1.0)));
        lx.push_back(std::log(arg));
        lu.push_back(std::log(std::abs(us)));
    }
    if (pts.size() >= 4) {
        rep.slope = fit_line(lx, lu).slope;
        rep.decades = std::log10(pts.back().first / pts.front().first);
    }
    rep.sufficient_range = rep.decades >= 1.0;
    if (!rep.sufficient_range)
        throw DomainError("insufficient-range: fewer than a decade of usable x");
    return rep;
}

std::vector<StabilityRow> stability_experiment(double d0, double d1, double s0, double window,
                                               double A, const ModelParams& mp,
                                               const RunConfig& cfg,
                                               const std::vector<double>& eps_list) {
    const double amp = A * std::pow(s0, -(2.0 * mp.beta + 1.0));
    auto psi = [&](double y) {
        return amp * (d0 + d1 * y) * truncation_chi(y, s0, mp, /*doubled=*/true);
    };
    const double sb = std::pow(s0, mp.beta);

    // The unstable mode generically drives w to finite-time blow-up inside the
    // window; the guard trip is the expected terminus, and the series up to it
    // is exactly the data the estimator needs.
    auto run_case = [&](const std::function<double(double)>& v_init) {
        const double half_width = cfg.domain_pad * mp.K * sb;
        GridField v0 = GridField::sample(s0, half_width, cfg.dy, v_init);
        PhysicalTrajectory phys;
        phys.mp = mp;
        phys.T = std::exp(-s0);
        GridField last;
        Observer collect = [&](const TrajectoryPoint& pt, const GridField& f) {
            phys.s.push_back(pt.s);
            phys.sup_u.push_back(std::exp(pt.s / (mp.p - 1.0)) * pt.sup_w);
            last = f;
            return true;
        };
        try {
            run_solver(v0, s0 + window, mp, cfg, collect);
        } catch (const DivergenceError&) {
        }
        GridField w = last;
        for (int j = 0; j < w.size(); ++j) w.values[j] += profile_phi(w.y(j), w.s, mp);
        phys.w_snaps.push_back(std::move(w));
        return estimate_blowup(phys, 0.4, 1.0);
    };

    const BlowupEstimate base = run_case(psi);

    std::vector<StabilityRow> rows;
    for (double eps : eps_list) {
        {  // fixed analytic even bump, width of the inner region
            StabilityRow row;
            row.eps = eps;
            row.kind = "bump";
            const BlowupEstimate est = run_case([&](double y) {
                const double z = y / sb;
                return psi(y) + eps * std::exp(-z * z);
            });
            row.T_drift = std::abs(est.T_est - base.T_est);
            row.a_drift = std::abs(est.a_est - base.a_est);
            rows.push_back(row);
        }
        {  // exact translation u0(x - eps): w0(y - eps e^{s0/2})
            StabilityRow row;
            row.eps = eps;
            row.kind = "translation";
            const double delta = eps * std::exp(0.5 * s0);
            const BlowupEstimate est = run_case([&](double y) {
                return profile_phi(y - delta, s0, mp) + psi(y - delta) -
                       profile_phi(y, s0, mp);
            });
            row.T_drift = std::abs(est.T_est - base.T_est);
            row.a_drift = std::abs(est.a_est - base.a_est);
            rows.push_back(row);
        }
    }
    return rows;
}

}  // namespace blowlab
