#pragma once

#include "blowlab/grid_field.hpp"

namespace blowlab {

/// Kernel data of e^{theta L} for L = Laplacian - y/2 d_y + 1:
///   e^{theta L}(y,x) = prefactor * exp(-(y e^{-theta/2} - x)^2 / scale),
///   prefactor = e^theta / sqrt(4 pi (1 - e^{-theta})),  scale = 4 (1 - e^{-theta}).
struct KernelEval {
    double theta;
    double prefactor;
    double scale;
    static KernelEval make(double theta);  // rejects theta <= 0
};

/// Pointwise kernel value; positive, Gaussian in x centered at y e^{-theta/2}.
double kernel_value(double theta, double y, double x);

/// e^{theta L} r by the rho-free convolution integral, evaluated on r's grid.
///
/// Trapezoid on the input grid plus a constant-extrapolation tail correction
/// using the edge values; throws DomainError when the Gaussian mass beyond the
/// grid exceeds 1e-3 for some output node (the correction is then meaningless).
/// theta = 0 returns r unchanged.
GridField apply_semigroup(double theta, const GridField& r);

/// Empirical constants realized by the regularization estimates
///   (iii) ||grad e^{tL} r||_inf  <= C e^{t/2}/sqrt(1-e^{-t}) ||r||_inf
///   (iv)  |e^{tL} r|(y)          <= C eta e^t (1+|y|^m)
///   (v)   |grad e^{tL} r|(y)     <= C eta e^{t/2} (1+|y|^m)        (from |grad r| <= eta(1+|x|^m))
///   (vi)  |grad e^{tL} r|(y)     <= C eta e^{t/2}/sqrt(1-e^{-t}) (1+|y|^m)
struct RegularizationReport {
    double c_grad_sup;        // (iii)
    double c_growth;          // (iv)
    double c_grad_growth;     // (v)
    double c_grad_from_sup;   // (vi)
};

/// Measures the constants for a field with known bound profile eta (1+|x|^m).
/// Gradients of the output are taken by centered differences.
RegularizationReport check_regularization(double theta, const GridField& r, double eta, int m);

}  // namespace blowlab
