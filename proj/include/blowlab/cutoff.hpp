#pragma once

#include "blowlab/params.hpp"

namespace blowlab {

/// The concrete C^inf cutoff chi0: non-increasing, == 1 on [0,1], supported in
/// [0,2]. Built from the standard exp(-1/x) mollifier:
///   chi0(r) = g(2-r) / (g(2-r) + g(r-1)),  g(t) = exp(-1/t) for t > 0 else 0.
/// The paper only requires an admissible cutoff; this fixes one bit-exactly so
/// results are reproducible (the choice moves constants, never exponents).
double chi0(double r);

/// chi(y,s) = chi0(|y|/(K s^beta)); the doubled variant evaluates chi(2y,s),
/// halving both thresholds. Requires s > 0.
double truncation_chi(double y, double s, const ModelParams& mp, bool doubled = false);

}  // namespace blowlab
