#pragma once

#include <string>

namespace pdc {

// Fiber-coupling geometry: an aspheric lens images the pumped region of the
// crystal into a single-mode fiber.
struct CollectionGeometry {
    double lens_focal_length_mm = 18.4;
    double crystal_to_lens_distance_cm = 69.4;
    double fiber_mode_field_diameter_um = 5.0;
    double pump_spot_diameter_mm = 0.6; // 1/e^2 intensity diameter at the crystal
    double wavelength_nm = 780.0;
};

enum class FilterShape { TopHat, Gaussian };

// Interference-filter passband. Tilting away from normal incidence shifts
// the passband to shorter wavelengths (effective-index model).
struct FilterSpec {
    double center_nm = 780.0;
    double fwhm_nm = 10.0;
    double peak_transmission = 1.0;
    FilterShape shape = FilterShape::TopHat;
    double tilt_deg = 0.0;
    double effective_index = 2.0;
};

// center' = center * sqrt(1 - sin^2(tilt)/n_eff^2); identity at tilt 0.
double tilt_tuned_center(const FilterSpec& filter);

// Transmitted fraction at a wavelength, in [0, peak_transmission].
double filter_transmission(const FilterSpec& filter, double wavelength_nm);

struct Passband {
    double lo_nm = 0.0;
    double hi_nm = 0.0;
};

// FWHM interval of the (tilt-shifted) passband.
Passband filter_passband(const FilterSpec& filter);

struct BackPropagatedMode {
    double waist_radius_um = 0.0;         // fiber mode waist imaged to the crystal plane
    double fiber_to_lens_distance_mm = 0.0;
};

// Propagate the fiber's fundamental Gaussian mode backwards through the
// collection lens, placing the fiber so the back-propagated waist falls on
// the crystal plane. Throws std::domain_error if no real waist exists.
BackPropagatedMode back_propagate_fiber_mode(const CollectionGeometry& geom);

// Power coupling of a plane-wave emitter in the pump spot into the
// back-propagated fiber mode, relative to the on-axis value. Gaussian
// overlap integral, evaluated in closed form.
double coupling_overlap(const CollectionGeometry& geom, double angle_offset_deg);

// Half width (deg) at which coupling_overlap falls to 1/e^2.
double acceptance_e2_half_width(const CollectionGeometry& geom);

// Full angular width (deg) over which emitters couple with overlap >= 1/e^2
// of the peak.
double acceptance_angle(const CollectionGeometry& geom);

} // namespace pdc
