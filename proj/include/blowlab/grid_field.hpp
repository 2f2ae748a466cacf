#pragma once

#include <Eigen/Dense>
#include <functional>

namespace blowlab {

/// Uniform samples of a function of y at self-similar time s.
///
/// The grid is symmetric with an odd node count, y_j = (j - (n-1)/2) dy, so
/// y = 0 is always a node and half_width = ((n-1)/2) dy.
struct GridField {
    double s = 0.0;
    double dy = 0.0;
    Eigen::ArrayXd values;

    int size() const { return static_cast<int>(values.size()); }
    int center() const { return (size() - 1) / 2; }
    double half_width() const { return center() * dy; }
    double y(int j) const { return (j - center()) * dy; }
    Eigen::ArrayXd ygrid() const;

    /// Cubic (4-point Lagrange) interpolation; 0 outside the grid.
    double value_at(double yq) const;

    bool all_finite() const { return values.allFinite(); }

    /// Zero-pads symmetrically to at least the requested half-width, keeping dy.
    GridField regrid(double new_half_width) const;

    static GridField zeros(double s, double half_width, double dy);
    static GridField sample(double s, double half_width, double dy,
                            const std::function<double(double)>& f);
};

/// Trapezoid approximation of int f(y) rho(y) dy on the field's grid.
double integrate_rho_trapezoid(const GridField& f);

/// Trapezoid approximation of int f g rho dy for a callable g.
double integrate_rho_trapezoid(const GridField& f, const std::function<double(double)>& g);

}  // namespace blowlab
