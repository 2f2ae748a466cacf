#pragma once

#include <functional>
#include <string>
#include <vector>

#include "blowlab/decompose.hpp"
#include "blowlab/grid_field.hpp"
#include "blowlab/params.hpp"

namespace blowlab {

/// Discretization and run policy for the perturbation equation
///   d_s v = (L + V) v + B(v) + G(v) + R(y,s).
struct RunConfig {
    double dy = 0.05;
    double dt_safety = 0.45;    // ds = dt_safety dy^2, clamped by the drift CFL at the edge
    double eps_grad = 1e-10;    // |.|^q regularization inside G, discrete gradient only
    std::string bc = "dirichlet0";  // "dirichlet0" | "neumann"
    double domain_growth = 2.5;     // regrid when half_width < domain_growth K s^beta
    double domain_pad = 3.0;        // regrid target half_width = domain_pad K s^beta
    double out_cadence = 0.01;
    double snapshot_cadence = 1.0;  // must be a multiple of out_cadence
    double guard_v = 1e4;           // divergence guard on sup|v|
    double guard_u = 1e8;           // physical guard on sup|u| (observers may use it)

    bool enable_V = true;
    bool enable_B = true;
    bool enable_G = true;
    bool enable_R = true;

    // mode decomposition at every output step (off for raw scheme tests whose
    // grids need not cover supp chi)
    bool track_modes = true;

    // Projects the expanding modes v0, v1 out of the field at every output
    // step. This realizes the trapped trajectory beyond the horizon where
    // double-precision shooting can hold it (mode offsets grow like e^{s-s0},
    // so any finite-precision (d0,d1) escapes after ~log(1/eps) time units).
    bool pin_modes = false;

    // Optional manufactured source S(y,s); test instrumentation.
    std::function<double(double, double)> source;
};

struct TrajectoryPoint {
    double s = 0.0;
    double v0 = 0.0, v1 = 0.0, v2 = 0.0;
    double norm_minus_weighted = 0.0;
    double norm_e = 0.0;
    double sup_v = 0.0;
    double w_center = 0.0;  // w(0,s) = phi(0,s) + v(0,s)
    double sup_w = 0.0;
};

struct Trajectory {
    std::vector<TrajectoryPoint> series;
    std::vector<GridField> snapshots;  // v-fields at snapshot_cadence
    GridField final_v;
    int ds_reductions = 0;
};

/// Observer runs at every output step; returning false stops the run early.
using Observer = std::function<bool(const TrajectoryPoint&, const GridField&)>;

/// One RK2 step with the automatic step size; exposed for consistency tests.
GridField solver_step(const GridField& v, const ModelParams& mp, const RunConfig& cfg);

/// Integrates from v0.s to s_end. Throws DivergenceError (with the failing s)
/// when sup|v| crosses guard_v or turns non-finite.
Trajectory run_solver(const GridField& v0, double s_end, const ModelParams& mp,
                      const RunConfig& cfg, const Observer& obs = {});

/// Same flow for the unknown w itself:
///   d_s w = Lap w - y/2 d_y w - w/(p-1) + |w|^{p-1} w + mu |d_y w|^q,
/// with the gradient term switchable; used by scalar-ODE verification.
GridField solver_step_w(const GridField& w, const ModelParams& mp, const RunConfig& cfg);
GridField run_w(GridField w, double s_end, const ModelParams& mp, const RunConfig& cfg);

/// phi(.,s) sampled on the field's grid.
GridField profile_field(const GridField& like, const ModelParams& mp);

/// Physical variables: u(x,t) = (T-t)^{-1/(p-1)} w(y,s), x = y sqrt(T-t),
/// s = -log(T-t).
struct PhysicalSlice {
    double t = 0.0;
    Eigen::ArrayXd x;
    Eigen::ArrayXd u;
};

PhysicalSlice to_physical(const GridField& w, double T, const ModelParams& mp);

/// Rebuilds the w-field at time t < T from physical samples (cubic interpolation).
GridField from_physical(const PhysicalSlice& slice, double T, double dy,
                        const ModelParams& mp);

}  // namespace blowlab
