#pragma once

namespace blowlab {

/// The constant tuple governing every formula of the model
///   u_t = Delta u + mu |grad u|^q + |u|^{p-1} u,   q = 2p/(p+1), p > 3.
///
/// Derived fields:
///   q     = 2p/(p+1)
///   beta  = (p+1)/(2(p-1))        (so 2 beta (q-1) = 1 and 2 beta q = 2 beta + 1)
///   kappa = (1/(p-1))^{1/(p-1)}   (the constant solution of the rescaled flow)
///   b     = curvature of the limit profile phi0(z) = (p-1+b z^2)^{-1/(p-1)}
///   a     = 2 dim b kappa/(p-1)^2 (offset of the intermediate profile)
///   K     = truncation constant of the cutoff chi (>= 6)
struct ModelParams {
    double p = 0.0;
    double mu = 0.0;
    int dim = 1;
    double q = 0.0;
    double beta = 0.0;
    double kappa = 0.0;
    double b = 0.0;
    double a = 0.0;
    double K = 6.0;

    /// Populates all derived constants from (p, mu, K).
    ///
    /// b is evaluated from the closed form with the |y|^q moment taken both by
    /// quadrature and by 2^{q+1} Gamma((q+1)/2); construction fails if the two
    /// disagree beyond 1e-8 relative. Rejects p <= 3 (the profile construction
    /// needs beta < 1) and mu <= 0.
    static ModelParams derive(double p, double mu, double K = 6.0);

    /// Probe variant: b scaled by `factor`, a recomputed from the scaled b.
    /// Breaks the null-mode cancellation while keeping the mean-mode one.
    ModelParams with_scaled_b(double factor) const;

    /// Probe variant: a scaled by `factor`, b untouched. Breaks the mean-mode
    /// cancellation.
    ModelParams with_scaled_a(double factor) const;
};

/// phi0(z) = (p-1+b z^2)^{-1/(p-1)}; even, positive, decreasing in |z|.
double profile_phi0(double z, const ModelParams& mp);

/// phi(y,s) = phi0(y/s^beta) + a/s^{2 beta}. Rejects s <= 0.
double profile_phi(double y, double s, const ModelParams& mp);

struct ProfileDerivs {
    double d_y;
    double d_yy;
    double d_s;
};

/// Closed-form first/second space and time derivatives of phi. Rejects s <= 0.
ProfileDerivs profile_derivatives(double y, double s, const ModelParams& mp);

}  // namespace blowlab
