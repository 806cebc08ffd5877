#include "pdc/numeric.hpp"

#include <algorithm>
#include <cstddef>

namespace pdc {

double bisect(const std::function<double(double)>& f, double lo, double hi,
              double x_tolerance, int max_iterations)
{
    double f_lo = f(lo);
    double f_hi = f(hi);
    if (f_lo == 0.0) return lo;
    if (f_hi == 0.0) return hi;
    if ((f_lo > 0.0) == (f_hi > 0.0)) {
        throw std::invalid_argument("bisect: root not bracketed");
    }
    for (int i = 0; i < max_iterations && (hi - lo) > x_tolerance; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double f_mid = f(mid);
        if (f_mid == 0.0) return mid;
        if ((f_mid > 0.0) == (f_lo > 0.0)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

namespace {

double crossing(const std::vector<double>& x, const std::vector<double>& y,
                std::size_t i, std::size_t j, double level)
{
    // linear interpolation of the level crossing between samples i and j
    const double dy = y[j] - y[i];
    if (dy == 0.0) return x[i];
    return x[i] + (level - y[i]) * (x[j] - x[i]) / dy;
}

double width_at_level(const std::vector<double>& x, const std::vector<double>& y, double level)
{
    std::size_t first = y.size();
    std::size_t last = 0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (y[i] >= level) {
            first = std::min(first, i);
            last = std::max(last, i);
        }
    }
    if (first >= y.size()) return 0.0;
    const double left = (first == 0) ? x.front() : crossing(x, y, first - 1, first, level);
    const double right = (last + 1 == y.size()) ? x.back() : crossing(x, y, last + 1, last, level);
    return right - left;
}

} // namespace

double full_width_half_max(const std::vector<double>& x, const std::vector<double>& y)
{
    if (x.size() != y.size() || x.size() < 3) {
        throw std::invalid_argument("full_width_half_max: need matching arrays of >= 3 samples");
    }
    const double peak = *std::max_element(y.begin(), y.end());
    if (peak <= 0.0) {
        throw std::invalid_argument("full_width_half_max: non-positive data");
    }
    return width_at_level(x, y, 0.5 * peak);
}

double width_above_threshold(const std::vector<double>& x, const std::vector<double>& y,
                             double rel_threshold)
{
    if (x.size() != y.size() || x.size() < 3) {
        throw std::invalid_argument("width_above_threshold: need matching arrays of >= 3 samples");
    }
    const double peak = *std::max_element(y.begin(), y.end());
    if (peak <= 0.0) {
        throw std::invalid_argument("width_above_threshold: non-positive data");
    }
    return width_at_level(x, y, rel_threshold * peak);
}

} // namespace pdc
