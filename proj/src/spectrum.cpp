#include "pdc/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "pdc/errors.hpp"
#include "pdc/numeric.hpp"

namespace pdc {

double pump_spectral_fwhm_nm(const PumpPulse& pulse)
{
    // Gaussian time-bandwidth product dnu * dt = 2 ln2 / pi.
    const double tbp = 2.0 * std::log(2.0) / kPi;
    return tbp * pulse.center_nm * pulse.center_nm
           / (kSpeedOfLightNmPerFs * pulse.duration_fwhm_fs);
}

std::complex<double> pump_spectral_amplitude(const PumpPulse& pulse, double wavelength_nm)
{
    const double fwhm = pump_spectral_fwhm_nm(pulse);
    const double d = wavelength_nm - pulse.center_nm;
    // |alpha|^2 has intensity FWHM `fwhm`; transform-limited, so real phase.
    return std::exp(-2.0 * std::log(2.0) * d * d / (fwhm * fwhm));
}

namespace {

struct AngularWeight {
    AngularWeightModel model;
    double center_deg;
    double e2_half_width_deg; // 1/e^2 half width of the power overlap

    double amplitude(double ext_angle_deg) const
    {
        if (model == AngularWeightModel::HardWindow) {
            return 1.0; // window feasibility is enforced by the pair selection
        }
        const double d = (ext_angle_deg - center_deg) / e2_half_width_deg;
        return std::exp(-d * d);
    }
};

double pump_weight_amplitude(const PumpPulse& pulse, const GridSpec& spec, double pump_nm)
{
    if (spec.pump_model == PumpEnvelopeModel::Interval) {
        return (pump_nm >= spec.pump_interval_lo_nm && pump_nm <= spec.pump_interval_hi_nm)
                   ? 1.0
                   : 0.0;
    }
    return pump_spectral_amplitude(pulse, pump_nm).real();
}

// theta_t (internal) at which the heralded photon sits at the given internal
// angle, via transverse matching.
double trigger_angle_for_heralded(const PairKinematics& kin, double theta_h_rad)
{
    const double s = kin.k_heralded * std::sin(theta_h_rad) / kin.k_trigger;
    return std::asin(std::clamp(s, 0.0, 1.0));
}

} // namespace

SpectralGrid build_joint_spectrum(const PumpPulse& pulse, const CrystalCut& cut,
                                  const AcceptanceWindow& window,
                                  const CollectionGeometry& geom,
                                  const SellmeierSet& set, const GridSpec& spec)
{
    if (spec.samples < 2 || spec.lo_nm >= spec.hi_nm) {
        throw std::invalid_argument("build_joint_spectrum: degenerate grid");
    }
    if (spec.lo_nm > 765.0 || spec.hi_nm < 795.0) {
        throw std::invalid_argument("build_joint_spectrum: grid must cover [765, 795] nm");
    }
    const double spacing = (spec.hi_nm - spec.lo_nm) / (spec.samples - 1);
    if (spacing > 0.1 + 1e-12) {
        throw std::invalid_argument("build_joint_spectrum: grid spacing must be <= 0.1 nm");
    }

    AngularWeight weight{spec.angular_model, window.center_deg,
                         acceptance_e2_half_width(geom)};

    SpectralGrid grid;
    grid.trigger_axis_nm = linspace(spec.lo_nm, spec.hi_nm, spec.samples);
    grid.heralded_axis_nm = grid.trigger_axis_nm;
    const int n = spec.samples;
    grid.amplitude = Eigen::MatrixXcd::Zero(n, n);

    const double length_nm = cut.thickness_mm * 1e6;
    const double win_lo_ext = deg_to_rad(window.center_deg - window.half_width_deg);
    const double win_hi_ext = deg_to_rad(window.center_deg + window.half_width_deg);

    for (int i = 0; i < n; ++i) {
        const double lt = grid.trigger_axis_nm[static_cast<std::size_t>(i)];
        for (int j = 0; j < n; ++j) {
            const double lh = grid.heralded_axis_nm[static_cast<std::size_t>(j)];
            const double lp = 1.0 / (1.0 / lt + 1.0 / lh);
            const double alpha = pump_weight_amplitude(pulse, spec, lp);
            if (alpha == 0.0 || !set.in_range(lp)) {
                continue;
            }
            const PairKinematics kin = pair_kinematics(lp, lt, cut, set);

            // Acceptance window mapped to internal trigger angles, both from
            // the trigger side and (via transverse matching) the heralded side.
            const double t_lo = std::asin(std::sin(win_lo_ext) / kin.n_o_trigger);
            const double t_hi = std::asin(std::sin(win_hi_ext) / kin.n_o_trigger);
            const double h_lo = std::asin(std::sin(win_lo_ext) / kin.n_o_heralded);
            const double h_hi = std::asin(std::sin(win_hi_ext) / kin.n_o_heralded);
            const double cap = kin.max_trigger_internal();
            const double lo = std::max(t_lo, trigger_angle_for_heralded(kin, h_lo));
            const double hi =
                std::min({t_hi, trigger_angle_for_heralded(kin, h_hi), cap});
            if (lo > hi) {
                continue; // windows incompatible with transverse matching
            }

            // Least-mismatch representative pair inside the window: the
            // mismatch is strictly increasing in theta_t, so it is either the
            // interior root or the closer interval endpoint.
            const double r_lo = kin.longitudinal_mismatch(lo);
            const double r_hi = kin.longitudinal_mismatch(hi);
            double theta_t;
            if (r_lo < 0.0 && r_hi > 0.0) {
                theta_t = bisect(
                    [&](double th) { return kin.longitudinal_mismatch(th); }, lo, hi, 1e-12);
            } else {
                theta_t = (std::abs(r_lo) <= std::abs(r_hi)) ? lo : hi;
            }
            const double theta_h = kin.heralded_internal(theta_t);
            const double mismatch = kin.longitudinal_mismatch(theta_t);
            const double ext_t = rad_to_deg(std::asin(kin.n_o_trigger * std::sin(theta_t)));
            const double ext_h = rad_to_deg(std::asin(kin.n_o_heralded * std::sin(theta_h)));

            const double value = alpha * sinc(0.5 * mismatch * length_nm)
                                 * weight.amplitude(ext_t) * weight.amplitude(ext_h);
            grid.amplitude(i, j) = value;
        }
    }

    const double raw = grid.amplitude.squaredNorm() * grid.cell_area();
    if (raw <= 0.0) {
        throw std::domain_error("build_joint_spectrum: all-zero amplitude");
    }
    grid.amplitude /= std::sqrt(raw);
    grid.norm = grid.amplitude.squaredNorm() * grid.cell_area();
    return grid;
}

SpectralGrid apply_heralded_filter(const SpectralGrid& grid, const FilterSpec& filter)
{
    SpectralGrid out = grid;
    for (int j = 0; j < out.amplitude.cols(); ++j) {
        const double t = filter_transmission(filter, out.heralded_axis_nm[static_cast<std::size_t>(j)]);
        out.amplitude.col(j) *= std::sqrt(t);
    }
    const double raw = out.amplitude.squaredNorm() * out.cell_area();
    if (raw <= 0.0) {
        throw std::domain_error("apply_heralded_filter: filter does not overlap the grid");
    }
    out.amplitude /= std::sqrt(raw);
    out.norm = out.amplitude.squaredNorm() * out.cell_area();
    return out;
}

Spectrum heralded_marginal(const SpectralGrid& grid, const FilterSpec& trigger_filter)
{
    const int n = static_cast<int>(grid.heralded_axis_nm.size());
    Spectrum s;
    s.axis_nm = grid.heralded_axis_nm;
    s.density.assign(static_cast<std::size_t>(n), 0.0);

    const double dlt = grid.spacing_nm();
    for (int j = 0; j < n; ++j) {
        double acc = 0.0;
        for (int i = 0; i < n; ++i) {
            const double t = filter_transmission(trigger_filter,
                                                 grid.trigger_axis_nm[static_cast<std::size_t>(i)]);
            if (t == 0.0) continue;
            acc += t * std::norm(grid.amplitude(i, j));
        }
        s.density[static_cast<std::size_t>(j)] = acc * dlt;
    }
    const double total = std::accumulate(s.density.begin(), s.density.end(), 0.0) * dlt;
    if (total <= 0.0) {
        throw std::domain_error("heralded_marginal: trigger filter does not overlap the grid");
    }
    for (double& v : s.density) v /= total;
    return s;
}

std::vector<ScanPoint> spectrometer_scan(const Spectrum& marginal, const FilterSpec& scan_filter,
                                         double tilt_lo_deg, double tilt_hi_deg, int n_steps)
{
    if (n_steps < 1) {
        throw std::invalid_argument("spectrometer_scan: empty scan");
    }
    const double dl = marginal.axis_nm[1] - marginal.axis_nm[0];
    std::vector<ScanPoint> trace;
    trace.reserve(static_cast<std::size_t>(n_steps));
    for (const double tilt : linspace(tilt_lo_deg, tilt_hi_deg, n_steps)) {
        FilterSpec tilted = scan_filter;
        tilted.tilt_deg = tilt;
        double rate = 0.0;
        for (std::size_t i = 0; i < marginal.axis_nm.size(); ++i) {
            rate += marginal.density[i] * filter_transmission(tilted, marginal.axis_nm[i]);
        }
        trace.push_back({tilt_tuned_center(tilted), rate * dl});
    }
    return trace;
}

SpectralDensityOp heralded_density_op(const SpectralGrid& grid, const FilterSpec& trigger_filter)
{
    const int n = static_cast<int>(grid.heralded_axis_nm.size());
    const double dl = grid.spacing_nm();

    // g_ij = sqrt(T(lt_i)) f_ij; rho(lh, lh') = sum_t T f f^* dlt, then the
    // heralded cell measure is folded in so trace(matrix) = 1.
    Eigen::MatrixXcd g = grid.amplitude;
    for (int i = 0; i < n; ++i) {
        const double t = filter_transmission(trigger_filter,
                                             grid.trigger_axis_nm[static_cast<std::size_t>(i)]);
        g.row(i) *= std::sqrt(t);
    }
    Eigen::MatrixXcd rho = (g.transpose() * g.conjugate()) * (dl * dl);
    const double trace = rho.trace().real();
    if (trace <= 0.0) {
        throw std::domain_error("heralded_density_op: zero trace");
    }
    rho /= trace;

    SpectralDensityOp op;
    op.axis_nm = grid.heralded_axis_nm;
    op.matrix = std::move(rho);
    op.purity = (op.matrix * op.matrix).trace().real();
    return op;
}

double fwhm(const Spectrum& s)
{
    return full_width_half_max(s.axis_nm, s.density);
}

double bandwidth(const Spectrum& s, double rel_threshold)
{
    return width_above_threshold(s.axis_nm, s.density, rel_threshold);
}

} // namespace pdc
