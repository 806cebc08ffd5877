#pragma once

#include <complex>
#include <vector>

#include "pdc/spectrum.hpp"

namespace pdc {

enum class DipKind { HomTwofold, RtThreefold };
enum class DelayUnit { Femtoseconds, MicrometersPath };

struct DipTrace {
    std::vector<double> delays;   // strictly increasing
    std::vector<double> counts;   // expected counts per bin
    double bin_duration_s = 10.0;
    DipKind kind = DipKind::HomTwofold;
    DelayUnit unit = DelayUnit::Femtoseconds;
};

// Hong-Ou-Mandel coincidence dip of the two PDC photons behind a lossless
// 50/50 splitter, with analysis filters F2/F3 in the two arms:
//   P(tau) = 1/2 (1 - Re J(tau) / N),
//   J(tau) = sum g(lt,lh) g*(lh,lt) exp(i (w_t - w_h) tau),
//   g = f sqrt(T2(lt) T3(lh)), N = sum |g|^2.
// Counts are pairs_per_bin * P(tau).
DipTrace hom_dip(const SpectralGrid& grid, const FilterSpec& f2, const FilterSpec& f3,
                 const std::vector<double>& delays_fs, double pairs_per_bin,
                 double bin_duration_s = 10.0);

// Unit-normalized spectral mode of the weak coherent pulse after its filter.
struct CoherentMode {
    std::vector<double> axis_nm;
    std::vector<std::complex<double>> amplitude; // sum |a|^2 dl = 1
};

CoherentMode coherent_pulse_mode(double center_nm, double duration_fwhm_fs,
                                 const FilterSpec& filter, const std::vector<double>& axis_nm);

// Rarity-Tapster gated-HOM dip between the heralded photon (state rho) and a
// weak coherent pulse: threefold rate proportional to 1 - V(tau) with
// V(tau) = overlap_factor * <phi_tau| rho |phi_tau>. Valid only in the
// weak-field limit (mean photon number <= 0.1).
DipTrace rt_dip(const SpectralDensityOp& rho, const CoherentMode& mode,
                double mean_photon_number, double mode_overlap_factor,
                const std::vector<double>& delays_fs, double triples_per_bin,
                double bin_duration_s = 600.0);

// Visibility at zero delay (the quantity calibrated against the experiment).
double rt_visibility(const SpectralDensityOp& rho, const CoherentMode& mode,
                     double mode_overlap_factor, double delay_fs = 0.0);

struct DipFit {
    double visibility = 0.0; // (baseline - fitted minimum) / baseline
    double center = 0.0;
    double width_sigma = 0.0; // Gaussian sigma in trace delay units
    double baseline = 0.0;
    double residual_norm = 0.0;
    bool converged = false;
    bool width_identifiable = true;
};

// Least-squares fit of N(tau) = B (1 - V exp(-(tau - tau0)^2 / (2 sigma^2))).
// Deterministic data-driven initialization; converged when the relative
// parameter step drops below 1e-8.
DipFit fit_gaussian_dip(const DipTrace& trace);

} // namespace pdc
