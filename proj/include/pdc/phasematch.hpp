#pragma once

#include <cstddef>
#include <vector>

#include "pdc/dispersion.hpp"
#include "pdc/optics.hpp"

namespace pdc {

// Type-I (e -> oo) interaction: extraordinary pump, both PDC photons ordinary.
struct CrystalCut {
    double cut_angle_deg = 30.0; // optic axis vs pump propagation axis
    double thickness_mm = 0.7;
};

// Angular collection window in air around the nominal emission cone.
struct AcceptanceWindow {
    double center_deg = 4.5;
    double half_width_deg = 0.15; // full spread 0.3 deg
};

// 1/lambda_h = 1/lambda_p - 1/lambda_t. Throws std::invalid_argument for
// lambda_t <= lambda_p (unphysical).
double conjugate_wavelength(double pump_nm, double trigger_nm);

// k magnitudes (rad/nm) for one (pump, trigger, heralded) triple at a fixed
// crystal cut; the pump uses the extraordinary index at the cut angle, both
// PDC photons the ordinary index. Internal angles measured from the pump axis.
struct PairKinematics {
    double k_pump = 0.0;
    double k_trigger = 0.0;
    double k_heralded = 0.0;
    double n_o_trigger = 0.0;
    double n_o_heralded = 0.0;

    // Internal heralded angle paired to theta_t by transverse matching
    // k_t sin(theta_t) = k_h sin(theta_h). Throws std::domain_error when the
    // transverse component exceeds k_h.
    double heralded_internal(double theta_t_rad) const;

    // Longitudinal mismatch k_p - k_t cos(theta_t) - k_h cos(theta_h(theta_t)),
    // strictly increasing in theta_t.
    double longitudinal_mismatch(double theta_t_rad) const;

    // Largest trigger angle with a defined transverse partner.
    double max_trigger_internal() const;
};

PairKinematics pair_kinematics(double pump_nm, double trigger_nm,
                               const CrystalCut& cut, const SellmeierSet& set);

struct EmissionAngles {
    double trigger_external_deg = 0.0;
    double heralded_external_deg = 0.0;
    double trigger_internal_deg = 0.0;
    double heralded_internal_deg = 0.0;
};

// Solve the vector phase-matching condition k_p = k_t + k_h for the emission
// angles. Throws NotPhaseMatchableError when no real solution exists (this
// includes conjugate wavelengths outside the dispersion validity range).
EmissionAngles solve_emission_angles(double pump_nm, double trigger_nm,
                                     const CrystalCut& cut, const SellmeierSet& set);

// Invert the degenerate condition: find the cut angle at which the
// degenerate pair (2*pump_nm) emerges at the target external angle.
// Bracketed root finding over cut angles [20, 40] deg.
double solve_degenerate_cut_angle(double pump_nm, double target_external_deg,
                                  const SellmeierSet& set);

struct TuningCurvePoint {
    double signal_nm = 0.0;
    double external_deg = 0.0;
    double internal_deg = 0.0;
};

struct TuningCurve {
    double pump_nm = 0.0;
    std::vector<TuningCurvePoint> points;
    int skipped = 0; // samples with no phase-matched solution
};

// Emission angle vs signal wavelength at fixed pump wavelength and cut.
// Non-matchable samples are omitted and counted in `skipped`; throws
// std::domain_error if no sample is matchable.
TuningCurve tuning_curve(double pump_nm, const CrystalCut& cut, double lo_nm,
                         double hi_nm, int n_samples, const SellmeierSet& set);

struct AcceptedSet {
    double heralded_lo_nm = 0.0;
    double heralded_hi_nm = 0.0;
    double heralded_angle_lo_deg = 0.0;
    double heralded_angle_hi_deg = 0.0;
    std::size_t accepted = 0;
    std::size_t scanned = 0;
};

// Scan (pump, trigger) pairs over the pump interval and the trigger-filter
// passband; where the trigger's external angle falls inside the window,
// collect the conjugate wavelength and its external angle, and return the
// bounding intervals. Throws std::domain_error when nothing is accepted.
AcceptedSet accepted_photon_set(double pump_lo_nm, double pump_hi_nm,
                                const FilterSpec& trigger_filter,
                                const AcceptanceWindow& window, const CrystalCut& cut,
                                const SellmeierSet& set, int pump_samples = 201,
                                int trigger_samples = 201);

} // namespace pdc
