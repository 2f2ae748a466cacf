#include <doctest.h>

#include <cmath>

#include "blowlab/cutoff.hpp"
#include "blowlab/errors.hpp"
#include "blowlab/monitor.hpp"

using namespace blowlab;

namespace {
const ModelParams mp5 = ModelParams::derive(5.0, 1.0);

ModeDecomposition synthetic_decomposition(double s, double v0, double v1, double v2,
                                          double nminus, double ne) {
    ModeDecomposition d;
    d.s = s;
    d.v0 = v0;
    d.v1 = v1;
    d.v2 = v2;
    d.norm_minus_weighted = nminus;
    d.norm_e = ne;
    return d;
}
}  // namespace

TEST_CASE("gamma selection windows for p = 5, 7, 4") {
    // p=5: beta=3/4, window (9/4, 5/2); eps=0.05 -> gamma=2.45
    CHECK(choose_gamma(mp5, 0.05) == doctest::Approx(2.45).epsilon(1e-14));
    // p=7: beta=2/3, min(5b-1, 2b+1) = 7/3
    const ModelParams mp7 = ModelParams::derive(7.0, 1.0);
    CHECK(choose_gamma(mp7, 0.1) == doctest::Approx(7.0 / 3.0 - 0.1).epsilon(1e-14));
    // p=4: beta=5/6, min(19/6, 8/3) = 8/3, feasible window (0, 1/6)
    const ModelParams mp4 = ModelParams::derive(4.0, 1.0);
    CHECK(choose_gamma(mp4, 0.1) == doctest::Approx(8.0 / 3.0 - 0.1).epsilon(1e-14));
    // feasibility window rejections
    CHECK_THROWS_AS(choose_gamma(mp5, 0.0), InvalidParams);
    CHECK_THROWS_AS(choose_gamma(mp5, 0.3), InvalidParams);  // window is (0, 1/4)
    CHECK_THROWS_AS(choose_gamma(mp5, -0.1), InvalidParams);
    // gamma obeys 3 beta < gamma < min(5 beta - 1, 2 beta + 1)
    const double g = choose_gamma(mp5, 0.05);
    CHECK(g > 3.0 * mp5.beta);
    CHECK(g < std::min(5.0 * mp5.beta - 1.0, 2.0 * mp5.beta + 1.0));
}

TEST_CASE("membership: zero field, constructed violation, tie order") {
    const ShrinkParams sp = ShrinkParams::make(mp5, 20.0, 0.05);
    const double s = 20.0;
    const MembershipReport zero =
        check_membership(synthetic_decomposition(s, 0, 0, 0, 0, 0), sp, s);
    CHECK(zero.in_set);
    CHECK(zero.slack_0 == 0.0);
    CHECK(zero.slack_e == 0.0);

    // v2 at twice its bound
    const double v2 = 2.0 * std::sqrt(sp.A) / std::pow(s, 4.0 * mp5.beta - 1.0);
    const MembershipReport bad =
        check_membership(synthetic_decomposition(s, 0, 0, v2, 0, 0), sp, s);
    CHECK(!bad.in_set);
    CHECK(bad.worst == Component::two);
    CHECK(bad.slack_2 == doctest::Approx(2.0).epsilon(1e-12));

    // equal-ratio tie between e and 2 resolves to e (fixed order)
    const double ne = 2.0 * sp.A * sp.A / std::pow(s, sp.gamma - 3.0 * mp5.beta);
    const MembershipReport tie =
        check_membership(synthetic_decomposition(s, 0, 0, v2, 0, ne), sp, s);
    CHECK(tie.worst == Component::e);
}

TEST_CASE("monotone nesting in A") {
    const ShrinkParams small = ShrinkParams::make(mp5, 5.0, 0.05);
    const ShrinkParams big = ShrinkParams::make(mp5, 12.0, 0.05);
    const double s = 30.0;
    for (double scale : {0.3, 0.9, 1.2}) {
        const ModeDecomposition d = synthetic_decomposition(
            s, scale * 5.0 / std::pow(s, 2.5), 0.0,
            scale * std::sqrt(5.0) / std::pow(s, 2.0), scale * 5.0 / std::pow(s, 2.45),
            scale * 25.0 / std::pow(s, 0.2));
        if (check_membership(d, small, s).in_set) CHECK(check_membership(d, big, s).in_set);
    }
}

TEST_CASE("sup-norm consequence of membership") {
    // any decomposition passing membership has ||v||_inf <= C A^2/s^{gamma-3 beta};
    // reconstruct a worst-case field from its bounds and measure C
    const ShrinkParams sp = ShrinkParams::make(mp5, 4.0, 0.05);
    const double s = 25.0;
    const double sb = std::pow(s, mp5.beta);
    double sup = 0.0;
    for (double y = 0.0; y <= 2.0 * mp5.K * sb; y += 0.1) {
        double val = sp.A / std::pow(s, 2.0 * mp5.beta + 1.0) * (1.0 + std::abs(y)) +
                     std::sqrt(sp.A) / std::pow(s, 4.0 * mp5.beta - 1.0) *
                         std::abs(y * y - 2.0) +
                     sp.A / std::pow(s, sp.gamma) * (1.0 + std::pow(std::abs(y), 3));
        sup = std::max(sup, val);
    }
    const double c_emp = sup / (sp.A * sp.A / std::pow(s, sp.gamma - 3.0 * mp5.beta));
    // the worst case is the weighted negative part at the support edge: C ~ 8 K^3 / A
    CHECK(c_emp < 16.0 * std::pow(mp5.K, 3) / sp.A);
    CHECK(c_emp > 1.0);
}

TEST_CASE("mode-ODE residuals on synthetic exact solutions") {
    // v2(s) = c/s^{2 beta+1} solves v2' + (2 beta+1)/s v2 = 0 exactly
    std::vector<TrajectoryPoint> series;
    const double h = 0.01;
    for (int k = 0; k <= 600; ++k) {
        TrajectoryPoint pt;
        pt.s = 20.0 + k * h;
        pt.v0 = 0.3 * std::exp(pt.s - 20.0) * 1e-6;  // solves v0' = v0
        pt.v1 = 0.0;
        pt.v2 = 2.0 / std::pow(pt.s, 2.0 * mp5.beta + 1.0);
        series.push_back(pt);
    }
    const ModeOdeResiduals res = mode_ode_residuals(series, mp5);
    CHECK(res.sup2 <= 1e-7);
    CHECK(res.sup0 <= 1e-7);
    CHECK(res.s.front() > 20.0);
    // a forced v2 = c/s^{2 beta} leaves a residual ~ c(1-2 beta)... nonzero
    for (auto& pt : series) pt.v2 = 2.0 / std::pow(pt.s, 2.0 * mp5.beta);
    const ModeOdeResiduals forced = mode_ode_residuals(series, mp5);
    CHECK(forced.sup2 > 0.1);
}

TEST_CASE("cadence guard trips when differencing noise dominates") {
    // the exact null-mode solution sampled coarsely: the true residual vanishes,
    // so whatever the differencing produces is pure differencing error
    std::vector<TrajectoryPoint> series;
    for (int k = 0; k <= 40; ++k) {
        TrajectoryPoint pt;
        pt.s = 20.0 + k * 0.8;
        pt.v2 = 2.0 / std::pow(pt.s, 2.0 * mp5.beta + 1.0);
        pt.v0 = 1e-9 * std::sin(3.0 * pt.s);
        series.push_back(pt);
    }
    CHECK_THROWS_AS(mode_ode_residuals(series, mp5), CadenceError);
    std::vector<TrajectoryPoint> tiny(series.begin(), series.begin() + 5);
    CHECK_THROWS_AS(mode_ode_residuals(tiny, mp5), CadenceError);
}

TEST_CASE("minimal confining A matches a constructed trajectory") {
    std::vector<TrajectoryPoint> series;
    const double gamma = choose_gamma(mp5, 0.05);
    for (int k = 0; k <= 100; ++k) {
        TrajectoryPoint pt;
        pt.s = 18.0 + 0.01 * k;
        pt.v0 = 3.0 / std::pow(pt.s, 2.5);  // needs A >= 3
        pt.v1 = 0.0;
        pt.v2 = 2.0 / std::pow(pt.s, 2.0);  // needs A >= 4
        pt.norm_minus_weighted = 1.0 / std::pow(pt.s, gamma);
        pt.norm_e = 0.0;
        series.push_back(pt);
    }
    CHECK(min_confining_A(series, mp5, gamma) == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("inner-expansion law: profile part approaches -B/s^{2 beta}") {
    // near kappa the second mode of w - kappa is carried by the profile itself
    std::vector<TrajectoryPoint> series;
    for (double s : {200.0, 400.0, 800.0, 1600.0}) {
        TrajectoryPoint pt;
        pt.s = s;
        pt.v2 = 0.0;
        series.push_back(pt);
    }
    const InnerLawSeries law = inner_expansion_law(series, mp5);
    CHECK(law.B == doctest::Approx(0.5969032389).epsilon(1e-8));
    for (std::size_t i = 0; i < law.s.size(); ++i) {
        CHECK(law.wbar2[i] < 0.0);  // mu > 0 branch: second mode negative
        // |wbar2| s^{2 beta} -> B within 25% at these scales
        CHECK(std::abs(law.scaled[i] - law.B) <= 0.25 * law.B);
    }
    // increasing toward zero
    for (std::size_t i = 1; i < law.s.size(); ++i) CHECK(law.wbar2[i] > law.wbar2[i - 1]);
}
