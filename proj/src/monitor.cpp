#include "blowlab/monitor.hpp"

#include <cmath>

#include "blowlab/cutoff.hpp"
#include "blowlab/errors.hpp"
#include "blowlab/hermite.hpp"
#include "blowlab/quadrature.hpp"

namespace blowlab {

const char* component_name(Component c) {
    switch (c) {
        case Component::e: return "e";
        case Component::minus: return "minus";
        case Component::two: return "2";
        case Component::zero: return "0";
        case Component::one: return "1";
        case Component::guard: return "blowup-guard";
        default: return "none";
    }
}

double choose_gamma(const ModelParams& mp, double epsilon) {
    const double top = std::min(5.0 * mp.beta - 1.0, 2.0 * mp.beta + 1.0);
    const double window = top - 3.0 * mp.beta;
    if (!(epsilon > 0.0) || !(epsilon < window))
        throw InvalidParams("gamma epsilon must lie in (0, " + std::to_string(window) + ")");
    return top - epsilon;
}

ShrinkParams ShrinkParams::make(const ModelParams& mp, double A, double epsilon) {
    if (!(A >= 1.0)) throw InvalidParams("trap size A must be >= 1");
    ShrinkParams sp;
    sp.A = A;
    sp.epsilon_gamma = epsilon;
    sp.gamma = choose_gamma(mp, epsilon);
    sp.beta = mp.beta;
    return sp;
}

double MembershipReport::slack(Component c) const {
    switch (c) {
        case Component::e: return slack_e;
        case Component::minus: return slack_minus;
        case Component::two: return slack_2;
        case Component::zero: return slack_0;
        case Component::one: return slack_1;
        default: return 0.0;
    }
}

MembershipReport check_membership(const ModeDecomposition& dec, const ShrinkParams& sp, double s) {
    if (!(s >= 1.0)) throw InvalidParams("membership requires s >= 1");
    const double A = sp.A, g = sp.gamma, beta = sp.beta;
    MembershipReport rep;
    rep.slack_e = dec.norm_e / (A * A);
    rep.slack_minus = dec.norm_minus_weighted / A;
    rep.slack_0 = std::abs(dec.v0) / A;
    rep.slack_1 = std::abs(dec.v1) / A;
    rep.slack_2 = std::abs(dec.v2) / std::sqrt(A);
    // multiply in the time powers
    rep.slack_e *= std::pow(s, g - 3.0 * beta);
    rep.slack_minus *= std::pow(s, g);
    rep.slack_0 *= std::pow(s, 2.0 * beta + 1.0);
    rep.slack_1 *= std::pow(s, 2.0 * beta + 1.0);
    rep.slack_2 *= std::pow(s, 4.0 * beta - 1.0);

    rep.in_set = true;
    double worst_ratio = -1.0;
    for (Component c : {Component::e, Component::minus, Component::two, Component::zero,
                        Component::one}) {
        const double ratio = rep.slack(c);
        if (ratio > 1.0) rep.in_set = false;
        if (ratio > worst_ratio) {
            worst_ratio = ratio;
            rep.worst = c;
        }
    }
    return rep;
}

double min_confining_A(const std::vector<TrajectoryPoint>& series, const ModelParams& mp,
                       double gamma) {
    double A = 1.0;
    for (const TrajectoryPoint& pt : series) {
        const double s = pt.s;
        A = std::max(A, std::abs(pt.v0) * std::pow(s, 2.0 * mp.beta + 1.0));
        A = std::max(A, std::abs(pt.v1) * std::pow(s, 2.0 * mp.beta + 1.0));
        const double a2 = std::abs(pt.v2) * std::pow(s, 4.0 * mp.beta - 1.0);
        A = std::max(A, a2 * a2);
        A = std::max(A, pt.norm_minus_weighted * std::pow(s, gamma));
        A = std::max(A, std::sqrt(pt.norm_e * std::pow(s, gamma - 3.0 * mp.beta)));
    }
    return A;
}

namespace {

// 4th-order centered derivative at stride k in a uniform series
double deriv4(const std::vector<TrajectoryPoint>& v, std::size_t i, std::size_t k, double h,
              double (*get)(const TrajectoryPoint&)) {
    return (-get(v[i + 2 * k]) + 8.0 * get(v[i + k]) - 8.0 * get(v[i - k]) + get(v[i - 2 * k])) /
           (12.0 * h * k);
}

}  // namespace

ModeOdeResiduals mode_ode_residuals(const std::vector<TrajectoryPoint>& series,
                                    const ModelParams& mp) {
    if (series.size() < 9) throw CadenceError("trajectory too short for mode differencing");
    const double h = series[1].s - series[0].s;
    ModeOdeResiduals out;
    auto g0 = [](const TrajectoryPoint& p) { return p.v0; };
    auto g1 = [](const TrajectoryPoint& p) { return p.v1; };
    auto g2 = [](const TrajectoryPoint& p) { return p.v2; };

    double err_sup = 0.0;
    for (std::size_t i = 4; i + 4 < series.size(); ++i) {
        const double s = series[i].s;
        const double d0 = deriv4(series, i, 1, h, g0);
        const double d1 = deriv4(series, i, 1, h, g1);
        const double d2 = deriv4(series, i, 1, h, g2);
        const double w01 = std::pow(s, 2.0 * mp.beta + 1.0);
        const double w2 = std::pow(s, 4.0 * mp.beta);
        out.s.push_back(s);
        out.r0.push_back(w01 * std::abs(d0 - series[i].v0));
        out.r1.push_back(w01 * std::abs(d1 - 0.5 * series[i].v1));
        out.r2.push_back(w2 * std::abs(d2 + (2.0 * mp.beta + 1.0) / s * series[i].v2));
        out.sup0 = std::max(out.sup0, out.r0.back());
        out.sup1 = std::max(out.sup1, out.r1.back());
        out.sup2 = std::max(out.sup2, out.r2.back());
        // Richardson estimate of the differencing error from stride doubling
        const double e0 = std::abs(deriv4(series, i, 2, h, g0) - d0) / 15.0;
        const double e2 = std::abs(deriv4(series, i, 2, h, g2) - d2) / 15.0;
        err_sup = std::max(err_sup, std::max(w01 * e0, w2 * e2));
    }
    const double res_sup = std::max(out.sup0, std::max(out.sup1, out.sup2));
    if (res_sup > 1e-8 && err_sup > 0.5 * res_sup)
        throw CadenceError("cadence-too-coarse: differencing error dominates the residuals");
    return out;
}

InnerLawSeries inner_expansion_law(const std::vector<TrajectoryPoint>& series,
                                   const ModelParams& mp) {
    InnerLawSeries out;
    const double Iq = abs_moment_rho(mp.q);
    const double c2 = mp.mu * std::pow(2.0, mp.q - 2.0) * mp.q * Iq;
    out.B = std::pow((mp.q - 1.0) * c2, -1.0 / (mp.q - 1.0));
    for (const TrajectoryPoint& pt : series) {
        const double s = pt.s;
        const double phi_part = integrate_rho_graded([&](double y) {
            return (profile_phi(y, s, mp) - mp.kappa) * truncation_chi(y, s, mp) *
                   hermite_h(2, y);
        }) / hermite_norm_sq(2);
        const double wbar2 = pt.v2 + phi_part;
        out.s.push_back(s);
        out.wbar2.push_back(wbar2);
        out.scaled.push_back(std::abs(wbar2) * std::pow(s, 2.0 * mp.beta));
    }
    return out;
}

}  // namespace blowlab
