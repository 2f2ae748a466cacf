#include "blowlab/decompose.hpp"

#include <cmath>

#include "blowlab/cutoff.hpp"
#include "blowlab/errors.hpp"
#include "blowlab/hermite.hpp"
#include "blowlab/quadrature.hpp"

namespace blowlab {

namespace {

void check_domain(const GridField& v, const ModelParams& mp) {
    const double support = 2.0 * mp.K * std::pow(v.s, mp.beta);
    if (v.half_width() < support)
        throw DomainError("insufficient-domain: grid half-width " +
                          std::to_string(v.half_width()) + " below supp chi radius " +
                          std::to_string(support));
}

}  // namespace

ModeDecomposition project_modes(const GridField& v, const ModelParams& mp) {
    check_domain(v, mp);
    const int n = v.size();
    const Eigen::ArrayXd y = v.ygrid();
    Eigen::ArrayXd chi(n);
    for (int j = 0; j < n; ++j) chi[j] = truncation_chi(y[j], v.s, mp);

    GridField vb = v;
    vb.values = v.values * chi;

    ModeDecomposition d;
    d.s = v.s;
    const Eigen::ArrayXd w = rho_weight(y) * v.dy;
    const Eigen::ArrayXd h1 = y;
    const Eigen::ArrayXd h2 = y.square() - 2.0;
    // trapezoid end corrections are immaterial: rho underflows at the edges
    d.v0 = (vb.values * w).sum() / hermite_norm_sq(0);
    d.v1 = (vb.values * h1 * w).sum() / hermite_norm_sq(1);
    d.v2 = (vb.values * h2 * w).sum() / hermite_norm_sq(2);

    // v_- is the global difference v_b - sum v_m h_m, as in the decomposition
    // identity; outside supp chi it reduces to -(v0 + v1 h1 + v2 h2).
    d.v_minus = v;
    d.v_minus.values = vb.values - d.v0 - d.v1 * h1 - d.v2 * h2;

    d.v_e = v;
    d.v_e.values = v.values * (1.0 - chi);

    d.norm_minus_weighted = (d.v_minus.values.abs() / (1.0 + y.abs().cube())).maxCoeff();
    d.norm_e = d.v_e.values.abs().maxCoeff();
    return d;
}

void project_modes_light(const GridField& v, const ModelParams& mp, double out[3]) {
    check_domain(v, mp);
    const int n = v.size();
    double acc0 = 0.0, acc1 = 0.0, acc2 = 0.0;
    for (int j = 0; j < n; ++j) {
        const double y = v.y(j);
        const double vb = v.values[j] * truncation_chi(y, v.s, mp);
        const double w = rho_weight(y) * v.dy;
        acc0 += vb * w;
        acc1 += vb * y * w;
        acc2 += vb * (y * y - 2.0) * w;
    }
    out[0] = acc0;
    out[1] = acc1 / 2.0;
    out[2] = acc2 / 8.0;
}

}  // namespace blowlab
