#pragma once

#include <string>
#include <vector>

#include "blowlab/params.hpp"
#include "blowlab/solver.hpp"

namespace blowlab {

/// A solved run viewed through the physical variables: t = T - e^{-s},
/// x = y e^{-s/2}, u = (T-t)^{-1/(p-1)} w. Outside the stored grid the
/// w-field continues as phi (the solver's boundary model).
struct PhysicalTrajectory {
    ModelParams mp;
    double T = 0.0;
    std::vector<double> s;      // observer times
    std::vector<double> sup_u;  // e^{s/(p-1)} sup|w|
    std::vector<GridField> w_snaps;

    double t_of(double s_val) const { return T - std::exp(-s_val); }
    /// u(x, .) on the snapshot's time slice, with the phi-tail extension.
    double u_at(const GridField& w, double x) const;
    double grad_u_at(const GridField& w, double x) const;
};

/// Wraps a v-trajectory started at s0 (so T = e^{-s0}).
PhysicalTrajectory physical_trajectory(const Trajectory& traj, const ModelParams& mp);

struct BlowupEstimate {
    double T_est = 0.0;
    double a_est = 0.0;
    double rate_exponent = 0.0;  // slope of log sup|u| vs log(T_est - t)
    double fit_residual = 0.0;
    bool accepted = false;
};

/// T_est from the linear fit of sup|u|^{-(p-1)} against t over the late part
/// of the series (exact for the ODE envelope); a_est = argmax |u| on the last
/// snapshot with parabolic sub-grid refinement.
BlowupEstimate estimate_blowup(const PhysicalTrajectory& traj, double tail_fraction = 0.3,
                               double fit_tol = 1e-3);

/// sup_y |w - phi0(y/s^e)| and the gradient version; e = beta by default,
/// e = 1/2 probes the wrong classical scaling.
struct ProfileError {
    double sup = 0.0;
    double sup_grad = 0.0;
};
ProfileError profile_convergence_error(const GridField& w, const ModelParams& mp,
                                       double scaling_exponent);

/// |grad w(s^alpha, s)| s^{2 beta - alpha} along the snapshots, with the
/// log-log fitted exponent of |grad w| in s. Rejects alpha outside
/// (0, min(2 beta - 1, (gamma - 2 beta)/2)).
struct GradientBlowupSeries {
    std::vector<double> s;
    std::vector<double> grad_w;  // |d_y w(s^alpha, s)|
    std::vector<double> scaled;  // grad_w * s^{2 beta - alpha}
    double exponent = 0.0;       // fitted slope, target alpha - 2 beta
};
GradientBlowupSeries gradient_blowup_diagnostic(const PhysicalTrajectory& traj, double alpha,
                                                double gamma);

struct SinglePointReport {
    double t0 = 0.0;
    double t0_residual = 0.0;
    bool capped = false;         // |x0| beyond the solvable branch; t0 clamped
    double threshold_sup = 0.0;  // sup (1-tau)^{1/(p-1)} [|U| + sqrt(1-tau)|grad U|]
    double local_sup_u = 0.0;
    double local_sup_grad = 0.0;
    double global_sup_u = 0.0;
    bool bounded_at_x0 = false;
};

/// Threshold diagnostics near x0 != 0: solves the matching time t0(x0) from
/// |x0| = K0 sqrt(T-t0) |log(T-t0)|^beta by bisection on the decreasing
/// branch, forms the locally rescaled solution, and reports whether u and
/// grad u stay bounded near x0 while the global sup diverges.
SinglePointReport single_point_check(const PhysicalTrajectory& traj, double x0, double K0);

struct FinalProfileReport {
    std::vector<double> x;
    std::vector<double> ustar;
    std::vector<double> model;      // (b x^2 / (2|log x|)^{2 beta})^{-1/(p-1)}
    std::vector<double> ratio_mu0;  // ustar / (x^2/|log x|)^{-1/(p-1)}
    double slope = 0.0;             // log ustar vs log(b x^2/(2|log x|)^{2 beta})
    double decades = 0.0;
    bool sufficient_range = false;
};

/// Assembles u* from the outer bands of the late snapshots (where the
/// solution has stopped evolving) and fits the profile law; signals
/// insufficient-range below one decade of x.
FinalProfileReport final_profile(const PhysicalTrajectory& traj, double s_tail_start);

struct StabilityRow {
    double eps = 0.0;
    std::string kind;  // "bump" | "translation"
    double T_drift = 0.0;
    double a_drift = 0.0;
};

/// Perturbs the initial data of a base shot by eps * (smooth bump) and by the
/// exact translation u0(x - eps), reruns over a fixed window, re-estimates,
/// and tabulates the drifts. Deterministic: the bump is a fixed analytic shape.
std::vector<StabilityRow> stability_experiment(double d0, double d1, double s0, double window,
                                               double A, const ModelParams& mp,
                                               const RunConfig& cfg,
                                               const std::vector<double>& eps_list);

}  // namespace blowlab
