#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace perc {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

// 95% Wilson score interval for a binomial proportion.
inline Interval wilson(std::int64_t hits, std::int64_t n, double z = 1.959963984540054) {
    if (n < 1) throw std::invalid_argument("wilson: need at least one sample");
    const double phat = static_cast<double>(hits) / static_cast<double>(n);
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (phat + z2 / (2.0 * n)) / denom;
    const double half =
        z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n)) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

// normal-theory interval for a mean given sum and sum of squares
inline Interval normal_mean(double sum, double sumsq, std::int64_t n,
                            double z = 1.959963984540054) {
    if (n < 1) throw std::invalid_argument("normal_mean: need at least one sample");
    const double mean = sum / n;
    double var = sumsq / n - mean * mean;
    if (var < 0) var = 0;
    const double half = n > 1 ? z * std::sqrt(var / n) : 0.0;
    return {mean - half, mean + half};
}

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double stderr_slope = 0.0;
    double r2 = 0.0;
    int npoints = 0;
};

inline LineFit least_squares(const std::vector<std::pair<double, double>>& xy) {
    const int n = static_cast<int>(xy.size());
    if (n < 2) throw std::invalid_argument("least_squares: need at least two points");
    double sx = 0, sy = 0;
    for (auto [x, y] : xy) sx += x, sy += y;
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (auto [x, y] : xy) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    if (sxx == 0) throw std::invalid_argument("least_squares: degenerate x values");
    LineFit f;
    f.npoints = n;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double ssr = 0;
    for (auto [x, y] : xy) {
        double r = y - (f.intercept + f.slope * x);
        ssr += r * r;
    }
    f.r2 = syy > 0 ? 1.0 - ssr / syy : 1.0;
    f.stderr_slope = n > 2 ? std::sqrt(ssr / (n - 2) / sxx) : 0.0;
    return f;
}

}  // namespace perc
