#include "blowlab/cutoff.hpp"

#include <cmath>

#include "blowlab/errors.hpp"

namespace blowlab {

namespace {
double mollifier(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }
}  // namespace

double chi0(double r) {
    if (r <= 1.0) return 1.0;
    if (r >= 2.0) return 0.0;
    const double up = mollifier(2.0 - r);
    return up / (up + mollifier(r - 1.0));
}

double truncation_chi(double y, double s, const ModelParams& mp, bool doubled) {
    if (!(s > 0.0)) throw InvalidParams("truncation_chi requires s > 0");
    const double scale = mp.K * std::pow(s, mp.beta);
    const double r = std::abs(doubled ? 2.0 * y : y) / scale;
    return chi0(r);
}

}  // namespace blowlab
