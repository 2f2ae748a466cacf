#pragma once

#include <Eigen/Dense>
#include <functional>

namespace blowlab {

/// The Gaussian probability weight rho(y) = e^{-y^2/4} / sqrt(4 pi).
inline double rho_weight(double y) {
    return std::exp(-0.25 * y * y) * 0.28209479177387814347;  // 1/sqrt(4 pi)
}

inline Eigen::ArrayXd rho_weight(const Eigen::ArrayXd& y) {
    return (-0.25 * y.square()).exp() * 0.28209479177387814347;
}

/// Gauss rule against rho: sum_i w_i f(y_i) ~ int f rho dy.
/// Nodes and weights come from Golub-Welsch on the h_m Jacobi matrix, so the
/// rule is exact for polynomials of degree <= 2n-1 and the weights sum to 1.
struct Quadrature {
    Eigen::ArrayXd nodes;
    Eigen::ArrayXd weights;

    static Quadrature gauss_hermite_rho(int n);

    int size() const { return static_cast<int>(nodes.size()); }

    /// int f rho dy. Throws DomainError if f is non-finite at a node.
    double integrate(const std::function<double(double)>& f) const;

    /// int f g rho dy.
    double inner(const std::function<double(double)>& f,
                 const std::function<double(double)>& g) const;
};

/// int f(y) rho(y) dy over the real line for even-singular integrands.
///
/// Geometrically graded Gauss-Legendre panels on (0, ymax], refined toward the
/// origin, evaluated on both half-lines. Handles |y|^q cusps at y = 0 to
/// machine precision where the plain Gauss rule saturates around 1e-4.
double integrate_rho_graded(const std::function<double(double)>& f,
                            double ymax = 60.0, int panels = 48, int points = 24);

/// int_R |y|^q e^{-y^2/4} dy by the graded rule.
double abs_moment_weight(double q);
/// The same moment in closed form, 2^{q+1} Gamma((q+1)/2).
double abs_moment_weight_closed(double q);
/// int_R |y|^q rho dy.
double abs_moment_rho(double q);

}  // namespace blowlab
