#include "blowlab/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "blowlab/errors.hpp"

namespace blowlab {

namespace {

// Golub-Welsch from a symmetric Jacobi matrix given by its diagonal and
// subdiagonal; mu0 is the total mass of the weight.
void golub_welsch(const Eigen::VectorXd& diag, const Eigen::VectorXd& sub, double mu0,
                  Eigen::ArrayXd& nodes, Eigen::ArrayXd& weights) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    nodes = es.eigenvalues().array();
    weights = mu0 * es.eigenvectors().row(0).array().square().transpose();
}

struct GaussLegendre {
    Eigen::ArrayXd x;  // on [-1, 1]
    Eigen::ArrayXd w;
    explicit GaussLegendre(int n) {
        Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
        Eigen::VectorXd sub(n - 1);
        for (int k = 1; k < n; ++k) sub[k - 1] = k / std::sqrt(4.0 * k * k - 1.0);
        golub_welsch(diag, sub, 2.0, x, w);
    }
};

}  // namespace

Quadrature Quadrature::gauss_hermite_rho(int n) {
    if (n < 1) throw InvalidParams("quadrature size must be >= 1");
    // Monic recurrence of the rho-orthogonal polynomials: h_{m+1} = y h_m - 2m h_{m-1}.
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd sub(n - 1);
    for (int k = 1; k < n; ++k) sub[k - 1] = std::sqrt(2.0 * k);
    Quadrature quad;
    golub_welsch(diag, sub, 1.0, quad.nodes, quad.weights);
    return quad;
}

double Quadrature::integrate(const std::function<double(double)>& f) const {
    long double acc = 0.0L;  // extended accumulation keeps the rule's exactness
    for (int i = 0; i < size(); ++i) {
        const double v = f(nodes[i]);
        if (!std::isfinite(v)) throw DomainError("integrand undefined at quadrature node");
        acc += static_cast<long double>(weights[i]) * v;
    }
    return static_cast<double>(acc);
}

double Quadrature::inner(const std::function<double(double)>& f,
                         const std::function<double(double)>& g) const {
    return integrate([&](double y) { return f(y) * g(y); });
}

double integrate_rho_graded(const std::function<double(double)>& f, double ymax,
                            int panels, int points) {
    static const GaussLegendre gl24(24);
    const GaussLegendre gl_local = (points == 24) ? gl24 : GaussLegendre(points);
    const GaussLegendre& gl = gl_local;

    long double acc = 0.0L;
    double hi = ymax;
    for (int k = 0; k < panels; ++k) {
        const double lo = (k + 1 == panels) ? 0.0 : hi * 0.5;
        const double mid = 0.5 * (hi + lo), half = 0.5 * (hi - lo);
        for (int i = 0; i < gl.x.size(); ++i) {
            const double y = mid + half * gl.x[i];
            acc += static_cast<long double>(half * gl.w[i]) * (f(y) + f(-y)) * rho_weight(y);
        }
        hi = lo;
    }
    return static_cast<double>(acc);
}

double abs_moment_weight(double q) {
    // strip the 1/sqrt(4 pi) normalization of rho
    return abs_moment_rho(q) * 3.5449077018110320546;  // sqrt(4 pi)
}

double abs_moment_weight_closed(double q) {
    return std::pow(2.0, q + 1.0) * std::tgamma(0.5 * (q + 1.0));
}

double abs_moment_rho(double q) {
    return integrate_rho_graded([q](double y) { return std::pow(std::abs(y), q); });
}

}  // namespace blowlab
