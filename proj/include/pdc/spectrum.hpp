#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "pdc/dispersion.hpp"
#include "pdc/optics.hpp"
#include "pdc/phasematch.hpp"

namespace pdc {

// Transform-limited pulse from the frequency-doubled mode-locked laser.
struct PumpPulse {
    double center_nm = 390.0;
    double duration_fwhm_fs = 150.0;
    double repetition_rate_mhz = 76.0;
    double average_power_mw = 79.0;
};

// Spectral intensity FWHM of the transform-limited pulse,
// (2 ln2 / pi) * lambda^2 / (c * dt) ~ 1.49 nm at the default parameters.
double pump_spectral_fwhm_nm(const PumpPulse& pulse);

// Unit-peak Gaussian spectral amplitude (real: no chirp).
std::complex<double> pump_spectral_amplitude(const PumpPulse& pulse, double wavelength_nm);

// Pump weight entering the joint spectrum: either the physical
// transform-limited Gaussian, or a flat interval (the illustration style used
// for bandwidth-tailoring plots, nominally [389, 391] nm).
enum class PumpEnvelopeModel { TransformLimited, Interval };

// Angular collection weight: the smooth fiber-overlap profile, or a flat
// weight inside the acceptance window (interval illustration style).
enum class AngularWeightModel { OverlapProfile, HardWindow };

struct GridSpec {
    double lo_nm = 762.0;
    double hi_nm = 798.0;
    int samples = 361; // 0.1 nm spacing over the default range
    PumpEnvelopeModel pump_model = PumpEnvelopeModel::TransformLimited;
    double pump_interval_lo_nm = 389.0;
    double pump_interval_hi_nm = 391.0;
    AngularWeightModel angular_model = AngularWeightModel::OverlapProfile;
};

// Discretized two-photon joint spectral amplitude over (trigger, heralded)
// wavelengths. Normalized so sum |f|^2 * dlt * dlh = 1.
struct SpectralGrid {
    std::vector<double> trigger_axis_nm;
    std::vector<double> heralded_axis_nm;
    Eigen::MatrixXcd amplitude; // row: trigger index, col: heralded index
    double norm = 0.0;          // integral of |f|^2 after normalization (1)

    double spacing_nm() const { return trigger_axis_nm[1] - trigger_axis_nm[0]; }
    double cell_area() const { return spacing_nm() * spacing_nm(); }
};

// f(lt, lh) = alpha(lp) * sinc(dk_z L / 2) * A(theta_t) * A(theta_h), with
// lp fixed by energy conservation, dk_z evaluated at the transverse-matched
// angle pair of least mismatch inside the acceptance window, and A the
// configured angular weight.
SpectralGrid build_joint_spectrum(const PumpPulse& pulse, const CrystalCut& cut,
                                  const AcceptanceWindow& window,
                                  const CollectionGeometry& geom,
                                  const SellmeierSet& set, const GridSpec& spec);

// Multiply the amplitude by sqrt(T(lambda_h)) and renormalize; used to put an
// analysis filter in the heralded arm.
SpectralGrid apply_heralded_filter(const SpectralGrid& grid, const FilterSpec& filter);

struct Spectrum {
    std::vector<double> axis_nm;
    std::vector<double> density; // unit integral
};

// Heralded spectrum conditioned on the trigger passing its filter:
// S(lh) = sum_t T(lt) |f|^2 dlt, normalized.
Spectrum heralded_marginal(const SpectralGrid& grid, const FilterSpec& trigger_filter);

struct ScanPoint {
    double center_nm = 0.0;
    double rate = 0.0;
};

// Tilt-tuned spectrometer: transmitted rate through the scan filter at each
// tilt step, reported against the shifted filter center.
std::vector<ScanPoint> spectrometer_scan(const Spectrum& marginal, const FilterSpec& scan_filter,
                                         double tilt_lo_deg, double tilt_hi_deg, int n_steps);

// Spectral density operator of the heralded photon conditioned on the
// trigger filter; trace-normalized with the cell measure folded in.
struct SpectralDensityOp {
    std::vector<double> axis_nm;
    Eigen::MatrixXcd matrix; // Hermitian, unit trace
    double purity = 0.0;     // Tr rho^2
};

SpectralDensityOp heralded_density_op(const SpectralGrid& grid, const FilterSpec& trigger_filter);

// Width measures on a marginal: half-max width and the full band above a
// small relative threshold (the "bandwidth" of the tailored band).
double fwhm(const Spectrum& s);
double bandwidth(const Spectrum& s, double rel_threshold = 1e-3);

} // namespace pdc
