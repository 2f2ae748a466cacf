#include "blowlab/params.hpp"

#include <cmath>
#include <string>

#include "blowlab/errors.hpp"
#include "blowlab/quadrature.hpp"

namespace blowlab {

ModelParams ModelParams::derive(double p, double mu, double K) {
    if (!(p > 3.0))
        throw InvalidParams("p must exceed 3: the profile construction requires beta < 1 "
                            "(it breaks down when beta >= 1), got p=" + std::to_string(p));
    if (!(mu > 0.0)) throw InvalidParams("mu must be positive, got mu=" + std::to_string(mu));
    if (!(K >= 6.0)) throw InvalidParams("K must be >= 6, got K=" + std::to_string(K));

    ModelParams mp;
    mp.p = p;
    mp.mu = mu;
    mp.dim = 1;
    mp.K = K;
    mp.q = 2.0 * p / (p + 1.0);
    mp.beta = (p + 1.0) / (2.0 * (p - 1.0));
    mp.kappa = std::pow(1.0 / (p - 1.0), 1.0 / (p - 1.0));

    // |y|^q moment of e^{-y^2/4}: quadrature cross-checked against the Gamma
    // closed form, guarding quadrature misconfiguration.
    const double Jq = abs_moment_weight(mp.q);
    const double Jq_closed = abs_moment_weight_closed(mp.q);
    if (std::abs(Jq - Jq_closed) > 1e-8 * std::abs(Jq_closed))
        throw InvalidParams("quadrature |y|^q moment disagrees with the Gamma closed form");

    const double N = mp.dim;
    const double expo = (p + 1.0) / (p - 1.0);
    mp.b = 0.5 * std::pow(p - 1.0, (p - 2.0) / (p - 1.0)) *
           std::pow(std::sqrt(4.0 * M_PI) * (p + 1.0) * (p + 1.0) * N / (p * Jq), expo) *
           std::pow(mu, -expo);
    mp.a = 2.0 * N * mp.b * mp.kappa / ((p - 1.0) * (p - 1.0));
    return mp;
}

ModelParams ModelParams::with_scaled_b(double factor) const {
    ModelParams mp = *this;
    mp.b = b * factor;
    mp.a = 2.0 * mp.dim * mp.b * mp.kappa / ((p - 1.0) * (p - 1.0));
    return mp;
}

ModelParams ModelParams::with_scaled_a(double factor) const {
    ModelParams mp = *this;
    mp.a = a * factor;
    return mp;
}

double profile_phi0(double z, const ModelParams& mp) {
    return std::pow(mp.p - 1.0 + mp.b * z * z, -1.0 / (mp.p - 1.0));
}

double profile_phi(double y, double s, const ModelParams& mp) {
    if (!(s > 0.0)) throw InvalidParams("profile_phi requires s > 0");
    const double z = y / std::pow(s, mp.beta);
    return profile_phi0(z, mp) + mp.a * std::pow(s, -2.0 * mp.beta);
}

ProfileDerivs profile_derivatives(double y, double s, const ModelParams& mp) {
    if (!(s > 0.0)) throw InvalidParams("profile_derivatives requires s > 0");
    const double p = mp.p, b = mp.b, beta = mp.beta;
    const double sb = std::pow(s, beta);
    const double z = y / sb;
    const double f = profile_phi0(z, mp);
    const double fp = std::pow(f, p);  // phi0^p
    ProfileDerivs d;
    d.d_y = -2.0 * b / ((p - 1.0) * sb) * z * fp;
    d.d_yy = 2.0 * b / ((p - 1.0) * sb * sb) *
             (-fp + 2.0 * b * p / (p - 1.0) * z * z * std::pow(f, 2.0 * p - 1.0));
    d.d_s = 2.0 * beta * b / ((p - 1.0) * s) * z * z * fp -
            2.0 * beta * mp.a * std::pow(s, -2.0 * beta - 1.0);
    return d;
}

}  // namespace blowlab
