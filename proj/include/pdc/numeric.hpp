#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace pdc {

inline constexpr double kSpeedOfLightNmPerFs = 299.792458;
inline constexpr double kPi = 3.141592653589793238462643383279502884;

inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

inline double sinc(double x)
{
    if (std::abs(x) < 1e-8) {
        return 1.0 - x * x / 6.0;
    }
    return std::sin(x) / x;
}

// Bisection on a bracketed monotone residual. Caller guarantees f(lo) and
// f(hi) have opposite signs.
double bisect(const std::function<double(double)>& f, double lo, double hi,
              double x_tolerance, int max_iterations = 200);

// Width of y(x) between the outermost half-maximum crossings, linearly
// interpolated. x must be strictly increasing.
double full_width_half_max(const std::vector<double>& x, const std::vector<double>& y);

// Width between the outermost crossings of rel_threshold * max(y).
double width_above_threshold(const std::vector<double>& x, const std::vector<double>& y,
                             double rel_threshold);

inline std::vector<double> linspace(double lo, double hi, int n)
{
    if (n < 1) {
        throw std::invalid_argument("linspace: need at least one sample");
    }
    std::vector<double> out(static_cast<std::size_t>(n));
    if (n == 1) {
        out[0] = lo;
        return out;
    }
    const double step = (hi - lo) / (n - 1);
    for (int i = 0; i < n; ++i) {
        out[static_cast<std::size_t>(i)] = lo + step * i;
    }
    return out;
}

} // namespace pdc
