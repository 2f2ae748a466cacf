#pragma once

#include <array>
#include <vector>

#include "blowlab/monitor.hpp"
#include "blowlab/params.hpp"
#include "blowlab/solver.hpp"

namespace blowlab {

/// Outcome of one trajectory started from psi_{s0,d0,d1}.
struct ShotResult {
    double d0 = 0.0, d1 = 0.0;
    double s0 = 0.0;
    double s_exit = 0.0;                        // first violating s, or window end
    Component exit_component = Component::none; // none when confined
    double exit_v0_scaled = 0.0;                // v_m(s_exit) s_exit^{2 beta+1} / A
    double exit_v1_scaled = 0.0;
    int sign_v0 = 0, sign_v1 = 0;               // signs of (v0, v1) at exit
    bool confined = false;
    double confined_window = 0.0;               // s_exit - s0
    std::vector<TrajectoryPoint> series;
};

/// psi_{s0,d0,d1}(y) = (A/s0^{2 beta+1}) (d0 h0 + d1 h1) chi(2y, s0) on a grid
/// sized by the run policy. Throws DomainError when supp chi(2., s0) does not fit.
GridField initial_psi(double d0, double d1, double s0, double A, const ModelParams& mp,
                      const RunConfig& cfg);

/// Runs the shot and monitors V_A(s) membership at every output step. Solver
/// divergence is recorded as an exit through the blow-up guard.
ShotResult evaluate_shot(double d0, double d1, double s0, double window, double A,
                         const ModelParams& mp, const RunConfig& cfg, double gamma_epsilon);

/// Transverse-crossing data at a recorded exit through component 0 or 1:
/// omega v_m(s_exit) = bound and the one-sided derivative omega v_m'(s_exit).
struct CrossingCheck {
    bool applicable = false;  // exit was through component 0 or 1
    int m = -1;
    double omega = 0.0;
    double omega_vm_prime = 0.0;  // > 0 certifies the transverse crossing
};

CrossingCheck transverse_crossing(const ShotResult& shot, const ModelParams& mp);

struct ShotSummary {
    double d0, d1, s_exit, confined_window;
    Component exit_component;
    int sign_v0, sign_v1;
    double exit_v0_scaled, exit_v1_scaled;
    bool confined;
    bool crossing_ok;          // omega v_m'(s_exit) > 0 where applicable (else true)
    double crossing_derivative;
};

struct SearchLevel {
    int level = 0;
    double lo0 = 0, hi0 = 0, lo1 = 0, hi1 = 0;
    int chosen_quadrant = -1;  // SW=0, SE=1, NW=2, NE=3; -1 when degree is lost
    double best_confined = 0.0;
    std::array<ShotSummary, 9> stencil{};
};

struct SearchResult {
    double d0 = 0.0, d1 = 0.0;     // best shot seen (longest confinement)
    double center_d0 = 0.0, center_d1 = 0.0;  // center of the final rectangle
    double best_confined = 0.0;
    bool degree_lost = false;
    std::vector<SearchLevel> levels;
    std::vector<ShotSummary> shots;  // every evaluated shot, in evaluation order
};

/// Recursive quadrant subdivision of [-2,2]^2. At each level a 3x3 stencil of
/// shots is evaluated (cached across levels); among the four sub-rectangles
/// whose corner exit-sign patterns of (sign v0, sign v1) cover all four sign
/// quadrants, the one with the longest minimum corner confinement is kept.
/// The returned (d0,d1) is the evaluated point with the longest confinement.
SearchResult topological_search(double s0, double window, double A, const ModelParams& mp,
                                const RunConfig& cfg, int depth, double gamma_epsilon,
                                int threads = 1);

}  // namespace blowlab
