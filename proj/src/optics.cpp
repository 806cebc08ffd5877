#include "pdc/optics.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

#include "pdc/numeric.hpp"

namespace pdc {

double tilt_tuned_center(const FilterSpec& filter)
{
    const double s = std::sin(deg_to_rad(filter.tilt_deg));
    const double arg = 1.0 - s * s / (filter.effective_index * filter.effective_index);
    return filter.center_nm * std::sqrt(arg);
}

double filter_transmission(const FilterSpec& filter, double wavelength_nm)
{
    if (wavelength_nm <= 0.0) {
        throw std::invalid_argument("filter_transmission: wavelength must be positive");
    }
    const double center = tilt_tuned_center(filter);
    const double d = wavelength_nm - center;
    switch (filter.shape) {
    case FilterShape::TopHat:
        return (std::abs(d) <= 0.5 * filter.fwhm_nm) ? filter.peak_transmission : 0.0;
    case FilterShape::Gaussian: {
        const double log2x4 = 4.0 * std::log(2.0);
        return filter.peak_transmission
               * std::exp(-log2x4 * d * d / (filter.fwhm_nm * filter.fwhm_nm));
    }
    }
    return 0.0;
}

Passband filter_passband(const FilterSpec& filter)
{
    const double center = tilt_tuned_center(filter);
    return {center - 0.5 * filter.fwhm_nm, center + 0.5 * filter.fwhm_nm};
}

namespace {

struct GeometrySi {
    double f;      // focal length, m
    double length; // crystal to lens, m
    double w_fiber;
    double w_pump;
    double lambda;
};

GeometrySi to_si(const CollectionGeometry& geom)
{
    GeometrySi g;
    g.f = geom.lens_focal_length_mm * 1e-3;
    g.length = geom.crystal_to_lens_distance_cm * 1e-2;
    g.w_fiber = 0.5 * geom.fiber_mode_field_diameter_um * 1e-6;
    g.w_pump = 0.5 * geom.pump_spot_diameter_mm * 1e-3;
    g.lambda = geom.wavelength_nm * 1e-9;
    if (g.f <= 0 || g.length <= 0 || g.w_fiber <= 0 || g.w_pump <= 0 || g.lambda <= 0) {
        throw std::invalid_argument("collection geometry: all lengths must be positive");
    }
    return g;
}

// Real part of the q parameter at the crystal after fiber -> lens -> crystal;
// zero means the back-propagated waist sits on the crystal plane.
double waist_offset_at_crystal(const GeometrySi& g, double fiber_distance)
{
    const double z_r = kPi * g.w_fiber * g.w_fiber / g.lambda;
    const std::complex<double> q1(fiber_distance, z_r);
    const std::complex<double> inv_q2 = 1.0 / q1 - 1.0 / g.f;
    const std::complex<double> q2 = 1.0 / inv_q2;
    return q2.real() + g.length;
}

} // namespace

BackPropagatedMode back_propagate_fiber_mode(const CollectionGeometry& geom)
{
    const GeometrySi g = to_si(geom);
    if (g.length <= g.f) {
        throw std::domain_error("back_propagate_fiber_mode: crystal inside focal region, no real waist");
    }
    // The image distance peaks at fiber distance f + z_R and falls back to f
    // beyond it; the imaging solution lives on the falling branch. Bracket it
    // between the peak and safely past the geometric image point.
    const double z_r = kPi * g.w_fiber * g.w_fiber / g.lambda;
    const double lo = g.f + z_r;
    const double hi = g.f + 2.0 * g.f * g.f / (g.length - g.f) + 10.0 * z_r;
    if (waist_offset_at_crystal(g, lo) >= 0.0 || waist_offset_at_crystal(g, hi) <= 0.0) {
        throw std::domain_error("back_propagate_fiber_mode: no real back-propagated waist");
    }
    const double d = bisect([&](double x) { return waist_offset_at_crystal(g, x); }, lo, hi, 1e-15);

    const double z_r_fiber = kPi * g.w_fiber * g.w_fiber / g.lambda;
    const std::complex<double> q1(d, z_r_fiber);
    const std::complex<double> q3 = 1.0 / (1.0 / q1 - 1.0 / g.f) + g.length;
    const double z_r_out = q3.imag();
    if (z_r_out <= 0.0) {
        throw std::domain_error("back_propagate_fiber_mode: no real back-propagated waist");
    }
    const double waist = std::sqrt(g.lambda * z_r_out / kPi);

    BackPropagatedMode mode;
    mode.waist_radius_um = waist * 1e6;
    mode.fiber_to_lens_distance_mm = d * 1e3;
    return mode;
}

// Overlap of exp(-r^2/w_p^2) * exp(i k theta x) with the flat-phase mode
// exp(-r^2/w_c^2) at the crystal plane:
//   eta(theta)/eta(0) = exp(-k^2 theta^2 / (2 a)),  a = 1/w_p^2 + 1/w_c^2.
double coupling_overlap(const CollectionGeometry& geom, double angle_offset_deg)
{
    const GeometrySi g = to_si(geom);
    const double w_c = back_propagate_fiber_mode(geom).waist_radius_um * 1e-6;
    const double a = 1.0 / (g.w_pump * g.w_pump) + 1.0 / (w_c * w_c);
    const double k = 2.0 * kPi / g.lambda;
    const double theta = deg_to_rad(angle_offset_deg);
    return std::exp(-k * k * theta * theta / (2.0 * a));
}

double acceptance_e2_half_width(const CollectionGeometry& geom)
{
    const GeometrySi g = to_si(geom);
    const double w_c = back_propagate_fiber_mode(geom).waist_radius_um * 1e-6;
    const double a = 1.0 / (g.w_pump * g.w_pump) + 1.0 / (w_c * w_c);
    const double k = 2.0 * kPi / g.lambda;
    return rad_to_deg(2.0 * std::sqrt(a) / k);
}

double acceptance_angle(const CollectionGeometry& geom)
{
    return 2.0 * acceptance_e2_half_width(geom);
}

} // namespace pdc
