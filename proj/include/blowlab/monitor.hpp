#pragma once

#include <vector>

#include "blowlab/decompose.hpp"
#include "blowlab/params.hpp"
#include "blowlab/solver.hpp"

namespace blowlab {

/// Component labels in the fixed tie-break order used everywhere:
/// outer, negative, null mode, then the two expanding modes.
enum class Component : int { none = -1, e = 0, minus = 1, two = 2, zero = 3, one = 4, guard = 5 };

const char* component_name(Component c);

/// Shrinking-set parameters. The set V_A(s) keeps
///   ||r_e||_inf        <= A^2 / s^{gamma - 3 beta}
///   sup |r_-|/(1+|y|^3) <= A  / s^gamma
///   |r_0|, |r_1|        <= A  / s^{2 beta + 1}
///   |r_2|               <= sqrt(A) / s^{4 beta - 1}.
struct ShrinkParams {
    double A = 1.0;
    double gamma = 0.0;
    double epsilon_gamma = 0.0;
    double beta = 0.0;  // copied from the model; the bounds mix gamma and beta

    static ShrinkParams make(const ModelParams& mp, double A, double epsilon);
};

/// gamma = min(5 beta - 1, 2 beta + 1) - epsilon; rejects epsilon outside
/// (0, min(5 beta - 1, 2 beta + 1) - 3 beta).
double choose_gamma(const ModelParams& mp, double epsilon);

struct MembershipReport {
    bool in_set = true;
    double slack_e = 0.0, slack_minus = 0.0, slack_0 = 0.0, slack_1 = 0.0, slack_2 = 0.0;
    Component worst = Component::none;  // largest ratio; ties by the fixed order

    double slack(Component c) const;
};

MembershipReport check_membership(const ModeDecomposition& dec, const ShrinkParams& sp, double s);

/// Smallest A for which every recorded point of the series is inside V_A(s).
double min_confining_A(const std::vector<TrajectoryPoint>& series, const ModelParams& mp,
                       double gamma);

/// Scaled residuals of the projected mode dynamics:
///   r_m(s) = s^{2 beta + 1} |v_m' - (1 - m/2) v_m|   (m = 0, 1)
///   r_2(s) = s^{4 beta}     |v_2' + (2 beta + 1) v_2 / s|,
/// with v_m'(s) by 4th-order centered differences on the stored cadence.
/// Throws CadenceError when step-halving shows the differencing error dominates.
struct ModeOdeResiduals {
    std::vector<double> s;
    std::vector<double> r0, r1, r2;
    double sup0 = 0.0, sup1 = 0.0, sup2 = 0.0;
};

ModeOdeResiduals mode_ode_residuals(const std::vector<TrajectoryPoint>& series,
                                    const ModelParams& mp);

/// Second-mode law of the inner expansion: along a trajectory near kappa the
/// quantity |wbar_2(s)| s^{2 beta} approaches B = [(q-1)|c2|]^{-1/(q-1)} from
/// below, where wbar = w - kappa. Returns the series and the limit constant.
struct InnerLawSeries {
    std::vector<double> s;
    std::vector<double> wbar2;          // signed second mode of w - kappa
    std::vector<double> scaled;         // |wbar2| s^{2 beta}
    double B = 0.0;
};

InnerLawSeries inner_expansion_law(const std::vector<TrajectoryPoint>& series,
                                   const ModelParams& mp);

}  // namespace blowlab
