#include "blowlab/terms.hpp"

#include <cmath>

#include "blowlab/cutoff.hpp"
#include "blowlab/hermite.hpp"
#include "blowlab/quadrature.hpp"

namespace blowlab {

namespace {
// sign-preserving power |w|^{p-1} w, continuous across w = 0
inline double odd_pow(double w, double p) {
    return std::copysign(std::pow(std::abs(w), p), w);
}
}  // namespace

double potential_V(double y, double s, const ModelParams& mp) {
    const double phi = profile_phi(y, s, mp);
    return mp.p * std::pow(phi, mp.p - 1.0) - mp.p / (mp.p - 1.0);
}

double nonlinear_B(double v_value, double phi_value, const ModelParams& mp) {
    const double p = mp.p;
    return odd_pow(phi_value + v_value, p) - std::pow(phi_value, p) -
           p * std::pow(phi_value, p - 1.0) * v_value;
}

double nonlinear_B(double v_value, double y, double s, const ModelParams& mp) {
    return nonlinear_B(v_value, profile_phi(y, s, mp), mp);
}

double gradient_G(double grad_phi, double grad_v, const ModelParams& mp) {
    return mp.mu * (std::pow(std::abs(grad_phi + grad_v), mp.q) -
                    std::pow(std::abs(grad_phi), mp.q));
}

double rest_R(double y, double s, const ModelParams& mp) {
    const double phi = profile_phi(y, s, mp);
    const ProfileDerivs d = profile_derivatives(y, s, mp);
    return d.d_yy - 0.5 * y * d.d_y - phi / (mp.p - 1.0) + std::pow(phi, mp.p) - d.d_s +
           mp.mu * std::pow(std::abs(d.d_y), mp.q);
}

ResidualModes residual_modes(double s, const ModelParams& mp) {
    ResidualModes modes{};
    for (int m = 0; m <= 2; ++m) {
        const double proj = integrate_rho_graded([&](double y) {
            return rest_R(y, s, mp) * truncation_chi(y, s, mp) * hermite_h(m, y);
        });
        (m == 0 ? modes.R0 : m == 1 ? modes.R1 : modes.R2) = proj / hermite_norm_sq(m);
    }
    return modes;
}

}  // namespace blowlab
