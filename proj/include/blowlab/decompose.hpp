#pragma once

#include "blowlab/grid_field.hpp"
#include "blowlab/params.hpp"

namespace blowlab {

/// The five components of v at time s:
///   v chi = v0 h0 + v1 h1 + v2 h2 + v_-,    v (1 - chi) = v_e,
/// with v_m the L^2_rho projections of the truncated field and the weighted
/// norms used by the shrinking-set bounds.
struct ModeDecomposition {
    double s = 0.0;
    double v0 = 0.0, v1 = 0.0, v2 = 0.0;
    GridField v_minus;
    GridField v_e;
    double norm_minus_weighted = 0.0;  // sup |v_-(y)| / (1 + |y|^3)
    double norm_e = 0.0;               // sup |v_e|
};

/// Projects a grid field onto the five components. The projections use the
/// rho-weighted trapezoid rule on the field's own grid (superalgebraically
/// accurate for smooth fields). Throws DomainError when the grid does not
/// contain supp chi = {|y| <= 2 K s^beta}.
ModeDecomposition project_modes(const GridField& v, const ModelParams& mp);

/// Mode projections only (v0, v1, v2); cheaper than the full decomposition.
void project_modes_light(const GridField& v, const ModelParams& mp, double out[3]);

}  // namespace blowlab
