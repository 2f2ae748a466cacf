#pragma once

#include "blowlab/params.hpp"

namespace blowlab {

/// V(y,s) = p phi(y,s)^{p-1} - p/(p-1); bounded, -> -p/(p-1) as |y|/s^beta grows.
double potential_V(double y, double s, const ModelParams& mp);

/// B(v) = |phi+v|^{p-1}(phi+v) - phi^p - p phi^{p-1} v at a given profile value.
double nonlinear_B(double v_value, double phi_value, const ModelParams& mp);
double nonlinear_B(double v_value, double y, double s, const ModelParams& mp);

/// G(v) = mu(|g_phi + g_v|^q - |g_phi|^q) on gradient values.
double gradient_G(double grad_phi, double grad_v, const ModelParams& mp);

/// Rest term R(y,s) = Lap phi - y/2 d_y phi - phi/(p-1) + phi^p - d_s phi + mu |d_y phi|^q,
/// evaluated from the closed-form profile derivatives.
double rest_R(double y, double s, const ModelParams& mp);

/// chi-truncated L^2_rho projections of R(.,s) onto h_0, h_1, h_2, taken with
/// the graded quadrature (R carries a |y|^q cusp at the origin).
struct ResidualModes {
    double R0, R1, R2;
};
ResidualModes residual_modes(double s, const ModelParams& mp);

}  // namespace blowlab
