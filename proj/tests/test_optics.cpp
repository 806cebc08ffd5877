#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "pdc/numeric.hpp"
#include "pdc/optics.hpp"

using namespace pdc;

namespace {

// Brute-force 2D quadrature of the coupling integrand, independent of the
// closed form used by the implementation.
double quadrature_overlap(const CollectionGeometry& geom, double angle_offset_deg)
{
    const double w_p = 0.5 * geom.pump_spot_diameter_mm * 1e-3;
    const double w_c = back_propagate_fiber_mode(geom).waist_radius_um * 1e-6;
    const double k = 2.0 * kPi / (geom.wavelength_nm * 1e-9);
    const double theta = deg_to_rad(angle_offset_deg);

    const double half = 4.0 * std::max(w_p, w_c);
    const int n = 1200;
    const double h = 2.0 * half / n;
    double numerator = 0.0; // real part; the imaginary part cancels by symmetry
    for (int ix = 0; ix <= n; ++ix) {
        const double x = -half + ix * h;
        const double wx = (ix == 0 || ix == n) ? 0.5 : 1.0;
        double row = 0.0;
        for (int iy = 0; iy <= n; ++iy) {
            const double y = -half + iy * h;
            const double wy = (iy == 0 || iy == n) ? 0.5 : 1.0;
            const double r2 = x * x + y * y;
            row += wy * std::exp(-r2 / (w_p * w_p)) * std::exp(-r2 / (w_c * w_c))
                   * std::cos(k * theta * x);
        }
        numerator += wx * row;
    }
    numerator *= h * h;
    const double norm_pump = kPi * w_p * w_p / 2.0;
    const double norm_mode = kPi * w_c * w_c / 2.0;
    return numerator * numerator / (norm_pump * norm_mode);
}

} // namespace

TEST_CASE("acceptance angle for the default geometry is about 0.3 degrees")
{
    const CollectionGeometry geom;
    const double full = acceptance_angle(geom);
    CHECK(std::abs(full - 0.3) < 0.15);
    CHECK(full == doctest::Approx(0.3237549404298217).epsilon(1e-6)); // frozen oracle value
    CHECK(back_propagate_fiber_mode(geom).waist_radius_um
          == doctest::Approx(91.90980656519757).epsilon(1e-6));
}

TEST_CASE("doubling the crystal-to-lens distance shrinks the acceptance")
{
    CollectionGeometry geom;
    const double base = acceptance_angle(geom);
    geom.crystal_to_lens_distance_cm *= 2.0;
    CHECK(acceptance_angle(geom) < base);
}

TEST_CASE("geometry without a real back-propagated waist is rejected")
{
    CollectionGeometry inside_focus;
    inside_focus.crystal_to_lens_distance_cm = 1.0; // closer than the focal length
    CHECK_THROWS_AS(back_propagate_fiber_mode(inside_focus), std::domain_error);

    CollectionGeometry negative;
    negative.pump_spot_diameter_mm = -0.6;
    CHECK_THROWS_AS(acceptance_angle(negative), std::invalid_argument);
}

TEST_CASE("closed-form overlap matches dense quadrature")
{
    const CollectionGeometry geom;
    const double quad_peak = quadrature_overlap(geom, 0.0);
    for (const double offset : {0.05, 0.1, 0.162, 0.25}) {
        const double closed = coupling_overlap(geom, offset);
        const double quad = quadrature_overlap(geom, offset) / quad_peak;
        CHECK(closed == doctest::Approx(quad).epsilon(1e-4));
    }

    CollectionGeometry fat_fiber = geom;
    fat_fiber.fiber_mode_field_diameter_um *= 2.0;
    CHECK(coupling_overlap(fat_fiber, 0.12)
          == doctest::Approx(quadrature_overlap(fat_fiber, 0.12)
                             / quadrature_overlap(fat_fiber, 0.0))
                 .epsilon(1e-4));
}

TEST_CASE("overlap is unity on axis and 1/e^2 at the half width")
{
    const CollectionGeometry geom;
    CHECK(coupling_overlap(geom, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
    const double half = acceptance_e2_half_width(geom);
    CHECK(coupling_overlap(geom, half) == doctest::Approx(std::exp(-2.0)).epsilon(1e-9));
}

TEST_CASE("top-hat filter transmission")
{
    FilterSpec f;
    f.center_nm = 780.0;
    f.fwhm_nm = 10.0;
    f.peak_transmission = 0.63;
    CHECK(filter_transmission(f, 780.0) == doctest::Approx(0.63));
    CHECK(filter_transmission(f, 786.0) == 0.0);
    CHECK(filter_transmission(f, 775.0) == doctest::Approx(0.63)); // edge inclusive
    CHECK_THROWS_AS(filter_transmission(f, -1.0), std::invalid_argument);
}

TEST_CASE("gaussian filter is at half maximum one half-width from center")
{
    FilterSpec f;
    f.center_nm = 780.0;
    f.fwhm_nm = 1.0;
    f.peak_transmission = 0.8;
    f.shape = FilterShape::Gaussian;
    CHECK(filter_transmission(f, 780.5) == doctest::Approx(0.4).epsilon(1e-9));
    CHECK(filter_transmission(f, 780.0) == doctest::Approx(0.8).epsilon(1e-12));
}

TEST_CASE("filter areas: top-hat exact, gaussian analytic within 1e-6")
{
    FilterSpec top;
    top.center_nm = 780.0;
    top.fwhm_nm = 10.0;
    top.peak_transmission = 0.63;
    const Passband band = filter_passband(top);
    CHECK((band.hi_nm - band.lo_nm) * top.peak_transmission
          == doctest::Approx(top.peak_transmission * top.fwhm_nm).epsilon(1e-12));

    FilterSpec gauss = top;
    gauss.shape = FilterShape::Gaussian;
    double area = 0.0;
    const double dl = 1e-3;
    for (double lam = 700.0; lam <= 860.0; lam += dl) {
        area += filter_transmission(gauss, lam) * dl;
    }
    const double analytic =
        gauss.peak_transmission * gauss.fwhm_nm * 0.5 * std::sqrt(kPi / std::log(2.0));
    CHECK(area == doctest::Approx(analytic).epsilon(1e-6));
}

TEST_CASE("tilt tuning shifts the passband to shorter wavelengths")
{
    FilterSpec f;
    f.center_nm = 780.0;
    f.effective_index = 2.0;

    SUBCASE("normal incidence is the identity")
    {
        f.tilt_deg = 0.0;
        CHECK(tilt_tuned_center(f) == doctest::Approx(780.0).epsilon(1e-15));
    }
    SUBCASE("20 degrees with n_eff 2 lands near 768.5")
    {
        f.tilt_deg = 20.0;
        // direct evaluation of 780 sqrt(1 - sin^2(20 deg)/4)
        CHECK(tilt_tuned_center(f) == doctest::Approx(768.5100389059328).epsilon(1e-12));
        CHECK(std::abs(tilt_tuned_center(f) - 768.51) < 0.1);
    }
    SUBCASE("strictly decreasing over 0..30 degrees")
    {
        double previous = 781.0;
        for (double tilt = 0.0; tilt <= 30.0; tilt += 1.0) {
            f.tilt_deg = tilt;
            const double center = tilt_tuned_center(f);
            CHECK(center < previous);
            previous = center;
        }
    }
}
