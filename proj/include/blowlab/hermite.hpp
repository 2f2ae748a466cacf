#pragma once

#include <Eigen/Dense>

namespace blowlab {

/// Hermite polynomials orthogonal under rho(y) = e^{-y^2/4}/sqrt(4 pi):
/// h_0 = 1, h_1 = y, h_2 = y^2 - 2, and h_{m+1} = y h_m - 2m h_{m-1}.
/// int h_n h_m rho dy = 2^n n! delta_{nm}.
inline double hermite_h(int m, double y) {
    double hm1 = 0.0, h = 1.0;
    for (int k = 0; k < m; ++k) {
        const double next = y * h - 2.0 * k * hm1;
        hm1 = h;
        h = next;
    }
    return h;
}

inline Eigen::ArrayXd hermite_h(int m, const Eigen::ArrayXd& y) {
    Eigen::ArrayXd hm1 = Eigen::ArrayXd::Zero(y.size());
    Eigen::ArrayXd h = Eigen::ArrayXd::Ones(y.size());
    for (int k = 0; k < m; ++k) {
        Eigen::ArrayXd next = y * h - 2.0 * k * hm1;
        hm1.swap(h);
        h.swap(next);
    }
    return h;
}

/// ||h_m||^2 in L^2_rho, i.e. 2^m m!.
inline double hermite_norm_sq(int m) {
    double v = 1.0;
    for (int k = 1; k <= m; ++k) v *= 2.0 * k;
    return v;
}

}  // namespace blowlab
