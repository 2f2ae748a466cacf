#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace blowlab {

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double max_residual = 0.0;
};

/// Ordinary least squares y ~ slope x + intercept.
inline LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    LineFit f;
    const double det = n * sxx - sx * sx;
    f.slope = (n * sxy - sx * sy) / det;
    f.intercept = (sy - f.slope * sx) / n;
    for (std::size_t i = 0; i < n; ++i)
        f.max_residual = std::max(f.max_residual, std::abs(y[i] - f.slope * x[i] - f.intercept));
    return f;
}

/// log-log power fit |y| ~ C x^slope; entries with y = 0 are skipped.
inline LineFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] > 0.0 && std::abs(y[i]) > 0.0) {
            lx.push_back(std::log(x[i]));
            ly.push_back(std::log(std::abs(y[i])));
        }
    }
    return fit_line(lx, ly);
}

}  // namespace blowlab
