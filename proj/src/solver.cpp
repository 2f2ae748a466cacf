#include "blowlab/solver.hpp"

#include <cmath>

#include "blowlab/cutoff.hpp"
#include "blowlab/errors.hpp"

namespace blowlab {

namespace {

inline bool is_odd_integer(double p) {
    return p == std::floor(p) && std::fmod(p, 2.0) == 1.0;
}

// |x|^q with optional fast path for q = 5/3 (the p = 5 workhorse case).
struct QPow {
    double q;
    bool q53;
    explicit QPow(double q_) : q(q_), q53(q_ == 5.0 / 3.0) {}
    double operator()(double ax) const {  // ax >= 0
        if (q53) {
            const double a2 = ax * ax;
            return std::cbrt(a2 * a2 * ax);
        }
        return std::pow(ax, q);
    }
};

// sign-preserving |w|^{p-1} w with odd-integer fast path
struct PPow {
    double p;
    bool podd;
    explicit PPow(double p_) : p(p_), podd(is_odd_integer(p_)) {}
    double operator()(double w) const {
        if (podd) {
            double r = w;
            for (int k = 1; k < static_cast<int>(p); ++k) r *= w;
            return r;
        }
        return std::copysign(std::pow(std::abs(w), p), w);
    }
};

// x^{p-1} with an even-integer fast path (p odd integer)
struct Pm1Pow {
    double pm1;
    int half;  // (p-1)/2 when integral, else 0
    explicit Pm1Pow(double p) : pm1(p - 1.0), half(0) {
        if (is_odd_integer(p)) half = static_cast<int>(p - 1.0) / 2;
    }
    double operator()(double x) const {
        if (half) {
            double r = 1.0, b = x * x;
            for (int k = 0; k < half; ++k) r *= b;
            return r;
        }
        return std::pow(x, pm1);
    }
};

struct Workspace {
    Eigen::ArrayXd y;
    Eigen::ArrayXd phi;       // phi(., s_mid)
    Eigen::ArrayXd phip;      // phi^p
    Eigen::ArrayXd phipm1;    // p phi^{p-1}
    Eigen::ArrayXd dphi;      // d_y phi
    Eigen::ArrayXd gphi_q;    // |d_y phi|_eps^q, the stage-invariant half of G
    Eigen::ArrayXd vpot;      // V(., s_mid)
    Eigen::ArrayXd rest;      // R(., s_mid)
    double pe_limit = 0.0;    // |y| above which the drift is upwinded

    void build(const GridField& v, double s_mid, const ModelParams& mp, const RunConfig& cfg) {
        const int n = v.size();
        const double p = mp.p, b = mp.b, beta = mp.beta;
        y = v.ygrid();
        phi.resize(n);
        phip.resize(n);
        phipm1.resize(n);
        dphi.resize(n);
        gphi_q.resize(n);
        vpot.resize(n);
        rest.resize(n);

        const QPow qpow(mp.q);
        const Pm1Pow pm1pow(p);
        const bool quartic = (p == 5.0);  // t^{-1/4} via two square roots
        const double eps = cfg.eps_grad;
        const double sb = std::pow(s_mid, beta);
        const double a_off = mp.a / (sb * sb);
        const double pcoef = p / (p - 1.0);
        const double c_dy = 2.0 * b / ((p - 1.0) * sb);
        const double c_dyy = 2.0 * b / ((p - 1.0) * sb * sb);
        const double c_dyy2 = 2.0 * b * p / (p - 1.0);
        const double c_ds = 2.0 * beta * b / ((p - 1.0) * s_mid);
        const double c_ds2 = 2.0 * beta * mp.a / (sb * sb * s_mid);

        const double inv_sb = 1.0 / sb;
        for (int j = 0; j < n; ++j) {
            const double z = y[j] * inv_sb;
            const double t = p - 1.0 + b * z * z;
            const double inv_t = 1.0 / t;
            const double f = quartic ? 1.0 / std::sqrt(std::sqrt(t))
                                     : std::pow(t, -1.0 / (p - 1.0));  // f^{p-1} = 1/t
            const double fp = f * inv_t;                     // f^p
            const double f2pm1 = fp * inv_t;                 // f^{2p-1}

            const double ph = f + a_off;
            const double phm1 = pm1pow(ph);
            phi[j] = ph;
            phipm1[j] = p * phm1;
            phip[j] = phm1 * ph;
            vpot[j] = cfg.enable_V ? p * phm1 - pcoef : 0.0;

            const double d_y = -c_dy * z * fp;
            dphi[j] = d_y;
            gphi_q[j] = qpow(std::sqrt(d_y * d_y + eps * eps));
            if (cfg.enable_R) {
                const double d_yy = c_dyy * (-fp + c_dyy2 * z * z * f2pm1);
                const double d_s = c_ds * z * z * fp - c_ds2;
                rest[j] = d_yy - 0.5 * y[j] * d_y - ph / (p - 1.0) + phip[j] - d_s +
                          mp.mu * qpow(std::abs(d_y));
            } else {
                rest[j] = 0.0;
            }
        }
        // centered drift is kept while the mesh Peclet number |y| dy / 4 stays <= 1
        pe_limit = 4.0 / v.dy;
    }
};

// RHS of the v-equation with coefficient fields frozen at the midpoint time.
void rhs_v(const Eigen::ArrayXd& v, double s_stage, const Workspace& ws, const ModelParams& mp,
           const RunConfig& cfg, const QPow& qpow, const PPow& ppow, Eigen::ArrayXd& out) {
    const int n = static_cast<int>(v.size());
    const double inv_dy = 1.0 / cfg.dy;
    const double inv_dy2 = inv_dy * inv_dy;
    const double eps = cfg.eps_grad;
    const double epsq = qpow(eps);
    const bool neumann = cfg.bc == "neumann";

    out.resize(n);
    for (int j = 0; j < n; ++j) {
        const double vj = v[j];
        const double vl = (j > 0) ? v[j - 1] : (neumann ? v[1] : 0.0);
        const double vr = (j + 1 < n) ? v[j + 1] : (neumann ? v[n - 2] : 0.0);
        const double yj = ws.y[j];

        const double lap = (vl - 2.0 * vj + vr) * inv_dy2;
        double dv_drift;
        if (std::abs(yj) <= ws.pe_limit)
            dv_drift = 0.5 * (vr - vl) * inv_dy;
        else if (yj > 0.0)
            dv_drift = (vj - vl) * inv_dy;
        else
            dv_drift = (vr - vj) * inv_dy;

        double acc = lap - 0.5 * yj * dv_drift + vj;
        if (cfg.enable_V) acc += ws.vpot[j] * vj;
        if (cfg.enable_B) {
            const double w = ws.phi[j] + vj;
            acc += ppow(w) - ws.phip[j] - ws.phipm1[j] * vj;
        }
        if (cfg.enable_G) {
            const double gv = 0.5 * (vr - vl) * inv_dy;
            const double gw = ws.dphi[j] + gv;
            acc += mp.mu * (qpow(std::sqrt(gw * gw + eps * eps)) - ws.gphi_q[j]);
            (void)epsq;  // the -eps^q offsets cancel between the two terms
        }
        acc += ws.rest[j];
        if (cfg.source) acc += cfg.source(yj, s_stage);
        out[j] = acc;
    }
    if (!neumann) out[0] = out[n - 1] = 0.0;
}

// Explicit RK2 stability: the worst real symbol combines the diffusive 4/dy^2
// with the upwinded drift L/dy at the domain edge; ds (4/dy^2 + L/dy) <= 4 dt_safety
// keeps it at z >= -2 with margin. The diffusive branch alone reproduces
// ds = dt_safety dy^2.
double base_step(const GridField& v, const RunConfig& cfg, int* reductions) {
    const double diffusive = cfg.dt_safety * cfg.dy * cfg.dy;
    const double combined =
        4.0 * cfg.dt_safety / (4.0 / (cfg.dy * cfg.dy) + v.half_width() / cfg.dy);
    if (combined < diffusive) {
        if (reductions) ++(*reductions);
        return combined;
    }
    return diffusive;
}

void rk2_advance(GridField& v, double ds, const ModelParams& mp, const RunConfig& cfg,
                 const QPow& qpow, const PPow& ppow, const Workspace& ws, Eigen::ArrayXd& k1,
                 Eigen::ArrayXd& k2, Eigen::ArrayXd& stage) {
    rhs_v(v.values, v.s, ws, mp, cfg, qpow, ppow, k1);
    stage = v.values + ds * k1;
    rhs_v(stage, v.s + ds, ws, mp, cfg, qpow, ppow, k2);
    v.values += 0.5 * ds * (k1 + k2);
    v.s += ds;
}

}  // namespace

GridField solver_step(const GridField& v, const ModelParams& mp, const RunConfig& cfg) {
    GridField out = v;
    const QPow qpow(mp.q);
    const PPow ppow(mp.p);
    Workspace ws;
    Eigen::ArrayXd k1, k2, stage;
    const double ds = base_step(v, cfg, nullptr);
    ws.build(out, out.s + 0.5 * ds, mp, cfg);
    rk2_advance(out, ds, mp, cfg, qpow, ppow, ws, k1, k2, stage);
    return out;
}

Trajectory run_solver(const GridField& v0, double s_end, const ModelParams& mp,
                      const RunConfig& cfg, const Observer& obs) {
    if (!(s_end > v0.s)) throw InvalidParams("run_solver requires s_end > v0.s");
    const QPow qpow(mp.q);
    const PPow ppow(mp.p);
    Workspace ws;
    Eigen::ArrayXd k1, k2, stage;

    GridField v = v0;
    Trajectory traj;
    const long n_out = std::lround((s_end - v0.s) / cfg.out_cadence);
    const long snap_every = std::max(1L, std::lround(cfg.snapshot_cadence / cfg.out_cadence));

    auto record = [&](long k) -> bool {
        TrajectoryPoint pt;
        pt.s = v.s;
        double pin0 = 0.0, pin1 = 0.0;
        if (cfg.track_modes) {
            const ModeDecomposition dec = project_modes(v, mp);
            pt.v0 = dec.v0;
            pt.v1 = dec.v1;
            pt.v2 = dec.v2;
            pt.norm_minus_weighted = dec.norm_minus_weighted;
            pt.norm_e = dec.norm_e;
            pin0 = dec.v0;
            pin1 = dec.v1;
        }
        pt.sup_v = v.values.abs().maxCoeff();
        const GridField phi = profile_field(v, mp);
        pt.w_center = phi.values[v.center()] + v.values[v.center()];
        pt.sup_w = (phi.values + v.values).abs().maxCoeff();
        traj.series.push_back(pt);
        if (k % snap_every == 0) traj.snapshots.push_back(v);

        bool keep_going = obs ? obs(pt, v) : true;
        if (cfg.pin_modes && cfg.track_modes) {
            for (int j = 0; j < v.size(); ++j) {
                const double chi = truncation_chi(v.y(j), v.s, mp);
                v.values[j] -= (pin0 + pin1 * v.y(j)) * chi;
            }
        }
        return keep_going;
    };

    if (!record(0)) {
        traj.final_v = v;
        return traj;
    }

    for (long k = 1; k <= n_out; ++k) {
        const double s_target = v0.s + k * cfg.out_cadence;
        // domain growth policy
        const double need = cfg.domain_growth * mp.K * std::pow(s_target, mp.beta);
        if (v.half_width() < need)
            v = v.regrid(cfg.domain_pad * mp.K * std::pow(s_target, mp.beta));

        // coefficient fields drift on O(1/s) scales; one build per output
        // interval (at its midpoint) retains second order
        ws.build(v, 0.5 * (v.s + s_target), mp, cfg);
        while (v.s < s_target - 1e-12) {
            const double ds = std::min(base_step(v, cfg, &traj.ds_reductions), s_target - v.s);
            rk2_advance(v, ds, mp, cfg, qpow, ppow, ws, k1, k2, stage);
        }
        v.s = s_target;  // quench cumulative rounding

        if (!v.all_finite() || v.values.abs().maxCoeff() > cfg.guard_v)
            throw DivergenceError("field crossed the blow-up guard", v.s);
        if (!record(k)) break;
    }
    traj.final_v = v;
    return traj;
}

namespace {

// RHS for the w-form of the flow
void rhs_w(const Eigen::ArrayXd& w, const Eigen::ArrayXd& y, const ModelParams& mp,
           const RunConfig& cfg, const QPow& qpow, const PPow& ppow, double pe_limit,
           Eigen::ArrayXd& out) {
    const int n = static_cast<int>(w.size());
    const double inv_dy = 1.0 / cfg.dy;
    const double inv_dy2 = inv_dy * inv_dy;
    out.resize(n);
    for (int j = 0; j < n; ++j) {
        const double wj = w[j];
        const double wl = (j > 0) ? w[j - 1] : w[1];
        const double wr = (j + 1 < n) ? w[j + 1] : w[n - 2];
        const double yj = y[j];
        const double lap = (wl - 2.0 * wj + wr) * inv_dy2;
        double dw;
        if (std::abs(yj) <= pe_limit)
            dw = 0.5 * (wr - wl) * inv_dy;
        else if (yj > 0.0)
            dw = (wj - wl) * inv_dy;
        else
            dw = (wr - wj) * inv_dy;
        double acc = lap - 0.5 * yj * dw - wj / (mp.p - 1.0) + ppow(wj);
        if (cfg.enable_G) {
            const double g = 0.5 * (wr - wl) * inv_dy;
            acc += mp.mu * qpow(std::sqrt(g * g + cfg.eps_grad * cfg.eps_grad));
        }
        out[j] = acc;
    }
}

}  // namespace

GridField solver_step_w(const GridField& w, const ModelParams& mp, const RunConfig& cfg) {
    const QPow qpow(mp.q);
    const PPow ppow(mp.p);
    GridField out = w;
    const Eigen::ArrayXd y = w.ygrid();
    const double ds = base_step(w, cfg, nullptr);
    Eigen::ArrayXd k1, k2;
    rhs_w(out.values, y, mp, cfg, qpow, ppow, 4.0 / cfg.dy, k1);
    Eigen::ArrayXd stage = out.values + ds * k1;
    rhs_w(stage, y, mp, cfg, qpow, ppow, 4.0 / cfg.dy, k2);
    out.values += 0.5 * ds * (k1 + k2);
    out.s += ds;
    return out;
}

GridField run_w(GridField w, double s_end, const ModelParams& mp, const RunConfig& cfg) {
    const QPow qpow(mp.q);
    const PPow ppow(mp.p);
    const Eigen::ArrayXd y = w.ygrid();
    Eigen::ArrayXd k1, k2, stage;
    int reductions = 0;
    while (w.s < s_end - 1e-12) {
        const double ds = std::min(base_step(w, cfg, &reductions), s_end - w.s);
        rhs_w(w.values, y, mp, cfg, qpow, ppow, 4.0 / cfg.dy, k1);
        stage = w.values + ds * k1;
        rhs_w(stage, y, mp, cfg, qpow, ppow, 4.0 / cfg.dy, k2);
        w.values += 0.5 * ds * (k1 + k2);
        w.s += ds;
        if (!w.all_finite() || w.values.abs().maxCoeff() > cfg.guard_v)
            throw DivergenceError("w-field crossed the blow-up guard", w.s);
    }
    return w;
}

GridField profile_field(const GridField& like, const ModelParams& mp) {
    GridField phi = like;
    for (int j = 0; j < phi.size(); ++j) phi.values[j] = profile_phi(phi.y(j), phi.s, mp);
    return phi;
}

PhysicalSlice to_physical(const GridField& w, double T, const ModelParams& mp) {
    PhysicalSlice slice;
    const double tmt = std::exp(-w.s);  // T - t
    slice.t = T - tmt;
    const double root = std::sqrt(tmt);
    const double amp = std::pow(tmt, -1.0 / (mp.p - 1.0));
    slice.x = w.ygrid() * root;
    slice.u = w.values * amp;
    return slice;
}

GridField from_physical(const PhysicalSlice& slice, double T, double dy, const ModelParams& mp) {
    const double tmt = T - slice.t;
    if (!(tmt > 0.0)) throw InvalidParams("from_physical requires t < T");
    const double s = -std::log(tmt);
    const double root = std::sqrt(tmt);
    const double amp = std::pow(tmt, 1.0 / (mp.p - 1.0));

    const double half_width = slice.x[slice.x.size() - 1] / root;
    GridField w = GridField::zeros(s, half_width, dy);
    // cubic interpolation in x of the u samples
    GridField ux;
    ux.s = s;
    ux.dy = slice.x[1] - slice.x[0];
    ux.values = slice.u;
    for (int j = 0; j < w.size(); ++j) w.values[j] = amp * ux.value_at(w.y(j) * root);
    return w;
}

}  // namespace blowlab
