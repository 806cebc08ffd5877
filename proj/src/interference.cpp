#include "pdc/interference.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "pdc/numeric.hpp"

namespace pdc {

namespace {

void check_delays(const std::vector<double>& delays)
{
    if (delays.empty()) {
        throw std::invalid_argument("dip trace needs at least one delay sample");
    }
    for (std::size_t i = 1; i < delays.size(); ++i) {
        if (delays[i] <= delays[i - 1]) {
            throw std::invalid_argument("delays must be strictly increasing");
        }
    }
}

std::vector<double> angular_frequencies(const std::vector<double>& axis_nm)
{
    std::vector<double> w(axis_nm.size());
    for (std::size_t i = 0; i < axis_nm.size(); ++i) {
        w[i] = 2.0 * kPi * kSpeedOfLightNmPerFs / axis_nm[i]; // rad/fs
    }
    return w;
}

} // namespace

DipTrace hom_dip(const SpectralGrid& grid, const FilterSpec& f2, const FilterSpec& f3,
                 const std::vector<double>& delays_fs, double pairs_per_bin,
                 double bin_duration_s)
{
    check_delays(delays_fs);
    if (grid.trigger_axis_nm != grid.heralded_axis_nm) {
        throw std::invalid_argument("hom_dip: grid axes must coincide");
    }
    const int n = static_cast<int>(grid.trigger_axis_nm.size());

    Eigen::MatrixXcd g = grid.amplitude;
    for (int i = 0; i < n; ++i) {
        const double t2 = filter_transmission(f2, grid.trigger_axis_nm[static_cast<std::size_t>(i)]);
        g.row(i) *= std::sqrt(t2);
    }
    for (int j = 0; j < n; ++j) {
        const double t3 = filter_transmission(f3, grid.heralded_axis_nm[static_cast<std::size_t>(j)]);
        g.col(j) *= std::sqrt(t3);
    }
    const double norm = g.squaredNorm();
    if (norm <= 0.0) {
        throw std::domain_error("hom_dip: filters leave zero amplitude");
    }

    const std::vector<double> w = angular_frequencies(grid.trigger_axis_nm);
    // Exchange product g(lt,lh) g*(lh,lt), reused for every delay.
    Eigen::MatrixXcd exchange = g.cwiseProduct(g.transpose().conjugate());

    DipTrace trace;
    trace.delays = delays_fs;
    trace.bin_duration_s = bin_duration_s;
    trace.kind = DipKind::HomTwofold;
    trace.counts.reserve(delays_fs.size());
    for (const double tau : delays_fs) {
        std::complex<double> overlap = 0.0;
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                const std::complex<double> e = exchange(i, j);
                if (e == std::complex<double>(0.0, 0.0)) continue;
                overlap += e * std::polar(1.0, (w[static_cast<std::size_t>(i)]
                                                - w[static_cast<std::size_t>(j)]) * tau);
            }
        }
        const double p = 0.5 * (1.0 - overlap.real() / norm);
        trace.counts.push_back(pairs_per_bin * p);
    }
    return trace;
}

CoherentMode coherent_pulse_mode(double center_nm, double duration_fwhm_fs,
                                 const FilterSpec& filter, const std::vector<double>& axis_nm)
{
    PumpPulse pulse;
    pulse.center_nm = center_nm;
    pulse.duration_fwhm_fs = duration_fwhm_fs;

    CoherentMode mode;
    mode.axis_nm = axis_nm;
    mode.amplitude.resize(axis_nm.size());
    double norm = 0.0;
    for (std::size_t i = 0; i < axis_nm.size(); ++i) {
        const std::complex<double> a = pump_spectral_amplitude(pulse, axis_nm[i])
                                       * std::sqrt(filter_transmission(filter, axis_nm[i]));
        mode.amplitude[i] = a;
        norm += std::norm(a);
    }
    const double dl = axis_nm[1] - axis_nm[0];
    norm *= dl;
    if (norm <= 0.0) {
        throw std::domain_error("coherent_pulse_mode: filter leaves zero amplitude");
    }
    const double scale = 1.0 / std::sqrt(norm);
    for (auto& a : mode.amplitude) a *= scale;
    return mode;
}

namespace {

double projected_overlap(const SpectralDensityOp& rho, const CoherentMode& mode, double tau_fs)
{
    const std::size_t n = rho.axis_nm.size();
    const double dl = rho.axis_nm[1] - rho.axis_nm[0];
    const std::vector<double> w = angular_frequencies(rho.axis_nm);
    Eigen::VectorXcd phi(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        phi[static_cast<Eigen::Index>(i)] =
            mode.amplitude[i] * std::polar(1.0, -w[i] * tau_fs);
    }
    const std::complex<double> v = phi.adjoint() * rho.matrix * phi;
    return v.real() * dl;
}

} // namespace

double rt_visibility(const SpectralDensityOp& rho, const CoherentMode& mode,
                     double mode_overlap_factor, double delay_fs)
{
    if (rho.axis_nm != mode.axis_nm) {
        throw std::invalid_argument("rt_visibility: mode and density operator axes must coincide");
    }
    return mode_overlap_factor * projected_overlap(rho, mode, delay_fs);
}

DipTrace rt_dip(const SpectralDensityOp& rho, const CoherentMode& mode,
                double mean_photon_number, double mode_overlap_factor,
                const std::vector<double>& delays_fs, double triples_per_bin,
                double bin_duration_s)
{
    check_delays(delays_fs);
    if (mean_photon_number <= 0.0 || mean_photon_number > 0.1) {
        throw std::invalid_argument(
            "rt_dip: mean photon number must lie in (0, 0.1] (weak-field validity bound)");
    }
    if (rho.axis_nm != mode.axis_nm) {
        throw std::invalid_argument("rt_dip: mode and density operator axes must coincide");
    }

    DipTrace trace;
    trace.delays = delays_fs;
    trace.bin_duration_s = bin_duration_s;
    trace.kind = DipKind::RtThreefold;
    trace.counts.reserve(delays_fs.size());
    for (const double tau : delays_fs) {
        const double v = mode_overlap_factor * projected_overlap(rho, mode, tau);
        trace.counts.push_back(triples_per_bin * (1.0 - v));
    }
    return trace;
}

namespace {

struct FitData {
    std::vector<double> x;
    std::vector<double> y;
};

double decile_mean(const std::vector<double>& y, bool front)
{
    const std::size_t k = std::max<std::size_t>(1, y.size() / 10);
    double acc = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        acc += front ? y[i] : y[y.size() - 1 - i];
    }
    return acc / static_cast<double>(k);
}

} // namespace

DipFit fit_gaussian_dip(const DipTrace& trace)
{
    const std::vector<double>& x = trace.delays;
    const std::vector<double>& y = trace.counts;
    if (x.size() < 7) {
        throw std::invalid_argument("fit_gaussian_dip: need at least 7 delay samples");
    }

    const double wing_front = decile_mean(y, true);
    const double wing_back = decile_mean(y, false);
    const double wing_ref = std::max(std::abs(wing_front), std::abs(wing_back));
    if (wing_ref <= 0.0 || std::abs(wing_front - wing_back) > 0.10 * wing_ref) {
        throw std::invalid_argument("fit_gaussian_dip: wings absent or unbalanced");
    }

    // Data-driven start: baseline from the wings, dip position from the
    // minimum, sigma from the half-depth width.
    double baseline = 0.5 * (wing_front + wing_back);
    const std::size_t i_min =
        static_cast<std::size_t>(std::min_element(y.begin(), y.end()) - y.begin());
    double visibility = std::clamp((baseline - y[i_min]) / baseline, 0.0, 1.0);
    double center = x[i_min];
    const double half_depth = baseline - 0.5 * (baseline - y[i_min]);
    double left = x.front(), right = x.back();
    for (std::size_t i = i_min; i-- > 0;) {
        if (y[i] >= half_depth) {
            left = x[i];
            break;
        }
    }
    for (std::size_t i = i_min + 1; i < y.size(); ++i) {
        if (y[i] >= half_depth) {
            right = x[i];
            break;
        }
    }
    // A dip narrower than the delay sampling cannot be resolved; bound sigma
    // below by the sample spacing.
    const double sigma_floor = x[1] - x[0];
    double sigma = std::max(0.5 * (right - left) / std::sqrt(2.0 * std::log(2.0)), sigma_floor);

    // Levenberg-Marquardt on (B, V, tau0, sigma).
    Eigen::Vector4d p(baseline, visibility, center, sigma);
    double lambda = 1e-3;
    const int max_iterations = 2000;
    bool converged = false;

    const auto residuals = [&](const Eigen::Vector4d& q, Eigen::VectorXd& r,
                               Eigen::MatrixXd* jac) {
        const double B = q[0], V = q[1], t0 = q[2], s = q[3];
        r.resize(static_cast<Eigen::Index>(x.size()));
        if (jac) jac->resize(static_cast<Eigen::Index>(x.size()), 4);
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double u = (x[i] - t0) / s;
            const double e = std::exp(-0.5 * u * u);
            const double model = B * (1.0 - V * e);
            r[static_cast<Eigen::Index>(i)] = model - y[i];
            if (jac) {
                (*jac)(static_cast<Eigen::Index>(i), 0) = 1.0 - V * e;
                (*jac)(static_cast<Eigen::Index>(i), 1) = -B * e;
                (*jac)(static_cast<Eigen::Index>(i), 2) = -B * V * e * u / s;
                (*jac)(static_cast<Eigen::Index>(i), 3) = -B * V * e * u * u / s;
            }
        }
    };

    Eigen::VectorXd r;
    Eigen::MatrixXd jac;
    residuals(p, r, &jac);
    double cost = r.squaredNorm();
    for (int it = 0; it < max_iterations; ++it) {
        const Eigen::Matrix4d jtj = jac.transpose() * jac;
        const Eigen::Vector4d jtr = jac.transpose() * r;
        const Eigen::Vector4d step =
            -(jtj + lambda * Eigen::Matrix4d(jtj.diagonal().asDiagonal())).ldlt().solve(jtr);
        Eigen::Vector4d candidate = p + step;
        candidate[3] = std::max(std::abs(candidate[3]), sigma_floor); // sigma sign immaterial
        // measure the move actually available after the sigma bound
        const double rel_step = (candidate - p).norm() / std::max(p.norm(), 1e-300);
        if (rel_step < 1e-8) {
            converged = true;
            break;
        }

        Eigen::VectorXd r_new;
        residuals(candidate, r_new, nullptr);
        const double cost_new = r_new.squaredNorm();
        if (cost_new <= cost) {
            p = candidate;
            residuals(p, r, &jac);
            cost = cost_new;
            lambda = std::max(lambda * 0.3, 1e-12);
        } else {
            lambda *= 10.0;
            if (lambda > 1e14) {
                break;
            }
        }
    }
    if (!converged) {
        throw std::domain_error("fit_gaussian_dip: no convergence within the iteration budget");
    }

    DipFit fit;
    fit.baseline = p[0];
    fit.visibility = p[1];
    fit.center = p[2];
    fit.width_sigma = std::abs(p[3]);
    fit.converged = true;
    fit.residual_norm = std::sqrt(cost) / std::max(std::abs(p[0]), 1e-300)
                        / std::sqrt(static_cast<double>(x.size()));

    // A dip shallower than the wing noise leaves the width meaningless.
    double wing_var = 0.0;
    const std::size_t k = std::max<std::size_t>(1, y.size() / 10);
    for (std::size_t i = 0; i < k; ++i) {
        wing_var += (y[i] - wing_front) * (y[i] - wing_front);
        wing_var += (y[y.size() - 1 - i] - wing_back) * (y[y.size() - 1 - i] - wing_back);
    }
    const double wing_std = std::sqrt(wing_var / static_cast<double>(2 * k));
    if (std::abs(fit.visibility) * fit.baseline <= 2.0 * wing_std
        || fit.width_sigma <= sigma_floor * 1.000001
        || fit.width_sigma > (x.back() - x.front())) {
        fit.width_identifiable = false;
    }
    return fit;
}

} // namespace pdc
