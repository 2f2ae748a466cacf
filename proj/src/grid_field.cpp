#include "blowlab/grid_field.hpp"

#include <cmath>

#include "blowlab/errors.hpp"
#include "blowlab/quadrature.hpp"

namespace blowlab {

Eigen::ArrayXd GridField::ygrid() const {
    Eigen::ArrayXd y(size());
    for (int j = 0; j < size(); ++j) y[j] = this->y(j);  // exactly symmetric nodes
    return y;
}

double GridField::value_at(double yq) const {
    const int n = size();
    const double t = yq / dy + center();
    if (t < 0.0 || t > n - 1) return 0.0;
    int j = static_cast<int>(std::floor(t));
    j = std::max(1, std::min(j, n - 3));
    const double u = t - j;
    const double f0 = values[j - 1], f1 = values[j], f2 = values[j + 1], f3 = values[j + 2];
    // 4-point Lagrange on u in [0,1] around nodes {-1,0,1,2}
    return f0 * (-u * (u - 1.0) * (u - 2.0) / 6.0) +
           f1 * ((u + 1.0) * (u - 1.0) * (u - 2.0) / 2.0) +
           f2 * (-(u + 1.0) * u * (u - 2.0) / 2.0) +
           f3 * ((u + 1.0) * u * (u - 1.0) / 6.0);
}

GridField GridField::regrid(double new_half_width) const {
    if (new_half_width <= half_width()) return *this;
    const int extra = static_cast<int>(std::ceil((new_half_width - half_width()) / dy));
    GridField out;
    out.s = s;
    out.dy = dy;
    out.values = Eigen::ArrayXd::Zero(size() + 2 * extra);
    out.values.segment(extra, size()) = values;
    return out;
}

GridField GridField::zeros(double s, double half_width, double dy) {
    if (!(dy > 0.0) || !(half_width > 0.0))
        throw InvalidParams("grid requires positive half_width and dy");
    const int half = static_cast<int>(std::ceil(half_width / dy - 1e-12));
    GridField f;
    f.s = s;
    f.dy = dy;
    f.values = Eigen::ArrayXd::Zero(2 * half + 1);
    return f;
}

GridField GridField::sample(double s, double half_width, double dy,
                            const std::function<double(double)>& f) {
    GridField g = zeros(s, half_width, dy);
    for (int j = 0; j < g.size(); ++j) g.values[j] = f(g.y(j));
    return g;
}

double integrate_rho_trapezoid(const GridField& f) {
    const Eigen::ArrayXd w = rho_weight(f.ygrid());
    double acc = (f.values * w).sum();
    acc -= 0.5 * (f.values[0] * w[0] + f.values[f.size() - 1] * w[f.size() - 1]);
    return acc * f.dy;
}

double integrate_rho_trapezoid(const GridField& f, const std::function<double(double)>& g) {
    double acc = 0.0;
    for (int j = 0; j < f.size(); ++j) {
        const double t = f.values[j] * g(f.y(j)) * rho_weight(f.y(j));
        acc += (j == 0 || j == f.size() - 1) ? 0.5 * t : t;
    }
    return acc * f.dy;
}

}  // namespace blowlab
