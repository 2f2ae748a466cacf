#include <doctest.h>

#include <cmath>

#include "blowlab/errors.hpp"
#include "blowlab/hermite.hpp"
#include "blowlab/semigroup.hpp"

using namespace blowlab;

namespace {
GridField make_field(double half_width, double dy, double (*f)(double)) {
    return GridField::sample(0.0, half_width, dy, f);
}
}  // namespace

TEST_CASE("kernel data consistency and rejection of theta <= 0") {
    const KernelEval k = KernelEval::make(1.0);
    CHECK(k.scale == doctest::Approx(4.0 * (1.0 - std::exp(-1.0))).epsilon(1e-14));
    CHECK(k.prefactor ==
          doctest::Approx(std::exp(1.0) / std::sqrt(4.0 * M_PI * (1.0 - std::exp(-1.0))))
              .epsilon(1e-14));
    CHECK_THROWS_AS(KernelEval::make(0.0), InvalidParams);
    CHECK_THROWS_AS(KernelEval::make(-0.5), InvalidParams);
}

TEST_CASE("kernel positivity, symmetry about the shrunk center, unit x-integral e^theta") {
    const double theta = 0.7, y = 2.0;
    const double c = y * std::exp(-0.5 * theta);
    CHECK(kernel_value(theta, y, c + 0.9) == doctest::Approx(kernel_value(theta, y, c - 0.9)));
    for (double x : {-5.0, 0.0, 3.0}) CHECK(kernel_value(theta, y, x) > 0.0);
    // Gaussian integral oracle: int kernel dx = e^theta for any y
    for (double yy : {-3.0, 0.0, 1.5}) {
        double acc = 0.0;
        const double dx = 0.01;
        for (double x = -40.0; x <= 40.0; x += dx) acc += kernel_value(theta, yy, x) * dx;
        CHECK(acc == doctest::Approx(std::exp(theta)).epsilon(1e-8));
    }
}

TEST_CASE("theta = 0 is the identity") {
    const GridField r = make_field(10.0, 0.05, [](double y) { return std::sin(y); });
    const GridField out = apply_semigroup(0.0, r);
    CHECK((out.values - r.values).abs().maxCoeff() == 0.0);
}

TEST_CASE("eigenaction on h_m with eigenvalue 1 - m/2") {
    // |y| <= 10 readout, grid wide enough for the kernel mass
    for (double theta : {0.1, 1.0, 3.0}) {
        for (int m = 0; m <= 4; ++m) {
            const GridField r = GridField::sample(0.0, 30.0, 0.01,
                                                  [m](double y) { return hermite_h(m, y); });
            const GridField out = apply_semigroup(theta, r);
            const double lam = std::exp((1.0 - 0.5 * m) * theta);
            double sup_err = 0.0, sup_ref = 0.0;
            for (int j = 0; j < out.size(); ++j) {
                if (std::abs(out.y(j)) > 10.0) continue;
                const double want = lam * hermite_h(m, out.y(j));
                sup_err = std::max(sup_err, std::abs(out.values[j] - want));
                sup_ref = std::max(sup_ref, std::abs(hermite_h(m, out.y(j))));
            }
            CHECK(sup_err <= 1e-6 * sup_ref);
        }
    }
}

TEST_CASE("constant field picks up e^theta") {
    const GridField one = make_field(25.0, 0.02, [](double) { return 1.0; });
    const GridField out = apply_semigroup(0.5, one);
    CHECK(out.values[out.center()] == doctest::Approx(std::exp(0.5)).epsilon(1e-10));
}

TEST_CASE("semigroup law on a smooth compact field") {
    const GridField r = make_field(30.0, 0.02, [](double y) {
        return std::exp(-y * y) * std::cos(2.0 * y);
    });
    const GridField two_step = apply_semigroup(0.8, apply_semigroup(0.7, r));
    const GridField one_step = apply_semigroup(1.5, r);
    double sup = 0.0;
    for (int j = 0; j < r.size(); ++j)
        if (std::abs(r.y(j)) <= 12.0)
            sup = std::max(sup, std::abs(two_step.values[j] - one_step.values[j]));
    CHECK(sup <= 1e-8);
}

TEST_CASE("monotonicity: ordered inputs give ordered outputs") {
    const GridField r1 = make_field(25.0, 0.02, [](double y) { return std::exp(-y * y / 9.0); });
    GridField r2 = r1;
    r2.values += 0.3;
    const GridField o1 = apply_semigroup(1.0, r1);
    const GridField o2 = apply_semigroup(1.0, r2);
    CHECK((o2.values - o1.values).minCoeff() >= 0.0);
}

TEST_CASE("tail truncation is signalled on a too-narrow grid") {
    const GridField r = make_field(2.0, 0.05, [](double) { return 1.0; });
    CHECK_THROWS_AS(apply_semigroup(3.0, r), DomainError);
}

TEST_CASE("regularization constants are finite and modest") {
    // r(x) = 1 + |x|^3, the weighted-norm shape of the negative part
    const GridField r = make_field(40.0, 0.02, [](double x) {
        return 1.0 + std::abs(x) * std::abs(x) * std::abs(x);
    });
    const RegularizationReport rep = check_regularization(1.0, r, 1.0, 3);
    CHECK(std::isfinite(rep.c_growth));
    CHECK(rep.c_growth > 0.0);
    CHECK(rep.c_growth < 10.0);
    CHECK(std::isfinite(rep.c_grad_growth));
    CHECK(rep.c_grad_growth < 10.0);
    CHECK(std::isfinite(rep.c_grad_sup));
    CHECK(std::isfinite(rep.c_grad_from_sup));
}

TEST_CASE("gradient smoothing bound (iii) with a bounded rough input") {
    const GridField r = make_field(30.0, 0.02, [](double x) {
        return (std::sin(25.0 * x) > 0.0) ? 1.0 : -1.0;  // bounded, wildly oscillating
    });
    for (double theta : {0.2, 1.0}) {
        const RegularizationReport rep = check_regularization(theta, r, 1.0, 0);
        // ||grad out|| sqrt(1-e^{-t}) / (e^{t/2} ||r||) stays O(1)
        CHECK(rep.c_grad_sup < 2.0);
    }
}
