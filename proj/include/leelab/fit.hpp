#ifndef LEELAB_FIT_HPP
#define LEELAB_FIT_HPP

#include <cmath>
#include <cstddef>
#include <span>

namespace leelab {

struct fit_result {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

// Ordinary least squares y = slope * x + intercept.
inline fit_result linear_fit(std::span<const double> x, std::span<const double> y)
{
    const std::size_t n = x.size();
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
        syy += y[i] * y[i];
    }
    fit_result f;
    const double den = n * sxx - sx * sx;
    f.slope = (n * sxy - sx * sy) / den;
    f.intercept = (sy - f.slope * sx) / n;
    double ss_res = 0.0;
    const double mean = sy / n;
    double ss_tot = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double fit = f.slope * x[i] + f.intercept;
        ss_res += (y[i] - fit) * (y[i] - fit);
        ss_tot += (y[i] - mean) * (y[i] - mean);
    }
    f.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    return f;
}

} // namespace leelab

#endif
