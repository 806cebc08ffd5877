#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>

#include "pdc/interference.hpp"
#include "pdc/numeric.hpp"
#include "test_grids.hpp"

using namespace pdc;
using namespace pdc_test;

namespace {

std::vector<double> delays(double lo, double hi, int n)
{
    return linspace(lo, hi, n);
}

// Naive re-evaluation of the dip probability straight from the definition,
// independent of the library's vectorized path.
double brute_force_hom_p(const SpectralGrid& grid, const FilterSpec& f2, const FilterSpec& f3,
                         double tau_fs)
{
    const std::size_t n = grid.trigger_axis_nm.size();
    std::complex<double> overlap = 0.0;
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double ti = filter_transmission(f2, grid.trigger_axis_nm[i]);
            const double tj = filter_transmission(f3, grid.heralded_axis_nm[j]);
            const std::complex<double> g =
                grid.amplitude(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))
                * std::sqrt(ti * tj);
            const std::complex<double> g_swap =
                grid.amplitude(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i))
                * std::sqrt(filter_transmission(f2, grid.trigger_axis_nm[j])
                            * filter_transmission(f3, grid.heralded_axis_nm[i]));
            const double wi = 2.0 * kPi * kSpeedOfLightNmPerFs / grid.trigger_axis_nm[i];
            const double wj = 2.0 * kPi * kSpeedOfLightNmPerFs / grid.heralded_axis_nm[j];
            overlap += g * std::conj(g_swap) * std::polar(1.0, (wi - wj) * tau_fs);
            norm += std::norm(g);
        }
    }
    return 0.5 * (1.0 - overlap.real() / norm);
}

double gauss_mode(double lam, double center, double fwhm)
{
    const double d = lam - center;
    return std::exp(-2.0 * std::log(2.0) * d * d / (fwhm * fwhm));
}

} // namespace

TEST_CASE("symmetric amplitudes coalesce: the dip reaches zero at zero delay")
{
    const FilterSpec f = gaussian(780.0, 10.0, 0.63);
    const DipTrace trace = hom_dip(physical_grid(), f, f, delays(-600.0, 600.0, 61), 1.0);
    const std::size_t center = trace.counts.size() / 2;
    CHECK(trace.delays[center] == doctest::Approx(0.0));
    CHECK(trace.counts[center] <= 1e-6); // P(0) ~ 0 for an exchange-symmetric grid
}

TEST_CASE("wings are flat at half the pair rate beyond five coherence times")
{
    const FilterSpec f = gaussian(780.0, 10.0, 0.63);
    // coherence time of the 10 nm filtered photons ~ 200 fs
    const DipTrace trace =
        hom_dip(physical_grid(), f, f, delays(-2000.0, 2000.0, 41), 1.0);
    for (std::size_t i = 0; i < trace.delays.size(); ++i) {
        if (std::abs(trace.delays[i]) >= 1015.0) {
            CHECK(trace.counts[i] == doctest::Approx(0.5).epsilon(0.01));
        }
    }
    // oracle cross-check of the integral at a few delays
    for (const double tau : {0.0, 150.0, 400.0, 1200.0}) {
        const DipTrace one = hom_dip(physical_grid(), f, f, {tau}, 1.0);
        CHECK(one.counts[0]
              == doctest::Approx(brute_force_hom_p(physical_grid(), f, f, tau)).epsilon(1e-10));
    }
}

TEST_CASE("trace scaled to 19,500-count wings keeps the center dark")
{
    const FilterSpec f = gaussian(780.0, 10.0, 0.63);
    const DipTrace trace = hom_dip(physical_grid(), f, f, delays(-600.0, 600.0, 61), 39000.0);
    double wings = 0.0;
    int n_wings = 0;
    double center = 1e300;
    for (std::size_t i = 0; i < trace.delays.size(); ++i) {
        if (std::abs(trace.delays[i]) >= 500.0) {
            wings += trace.counts[i];
            ++n_wings;
        }
        center = std::min(center, trace.counts[i]);
    }
    wings /= n_wings;
    CHECK(wings == doctest::Approx(19500.0).epsilon(0.01));
    CHECK(center <= 400.0);
    CHECK((wings - center) / wings >= 0.98);
}

TEST_CASE("dip trace is delay-symmetric and bounded")
{
    const FilterSpec f = gaussian(780.0, 10.0, 0.63);
    const DipTrace trace = hom_dip(physical_grid(), f, f, delays(-900.0, 900.0, 37), 1.0);
    const std::size_t n = trace.counts.size();
    for (std::size_t i = 0; i < n; ++i) {
        CHECK(trace.counts[i] == doctest::Approx(trace.counts[n - 1 - i]).epsilon(1e-9));
        CHECK(trace.counts[i] >= -1e-12);
        CHECK(trace.counts[i] <= 0.5 * 1.01); // small coherent ripple above 1/2 can occur
    }
}

TEST_CASE("exchange-antisymmetric amplitude produces a peak, balanced mix no dip")
{
    // two exactly orthonormal modes on the grid (Gram-Schmidt)
    const std::vector<double> axis = linspace(770.0, 790.0, 101);
    const double dl = axis[1] - axis[0];
    std::vector<double> psi(axis.size()), phi(axis.size());
    for (std::size_t i = 0; i < axis.size(); ++i) {
        psi[i] = gauss_mode(axis[i], 778.0, 4.0);
        phi[i] = gauss_mode(axis[i], 782.0, 4.0);
    }
    const auto dot = [&](const std::vector<double>& a, const std::vector<double>& b) {
        double acc = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
        return acc * dl;
    };
    const double n_psi = std::sqrt(dot(psi, psi));
    for (double& v : psi) v /= n_psi;
    const double c = dot(phi, psi);
    for (std::size_t i = 0; i < phi.size(); ++i) phi[i] -= c * psi[i];
    const double n_phi = std::sqrt(dot(phi, phi));
    for (double& v : phi) v /= n_phi;

    const auto grid_from = [&](const std::function<double(std::size_t, std::size_t)>& f) {
        SpectralGrid grid;
        grid.trigger_axis_nm = axis;
        grid.heralded_axis_nm = axis;
        grid.amplitude = Eigen::MatrixXcd::Zero(101, 101);
        for (int i = 0; i < 101; ++i) {
            for (int j = 0; j < 101; ++j) {
                grid.amplitude(i, j) =
                    f(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
            }
        }
        const double raw = grid.amplitude.squaredNorm() * grid.cell_area();
        grid.amplitude /= std::sqrt(raw);
        grid.norm = 1.0;
        return grid;
    };

    const FilterSpec open = tophat(780.0, 1e6);
    const SpectralGrid antisym =
        grid_from([&](std::size_t i, std::size_t j) { return psi[i] * phi[j] - phi[i] * psi[j]; });
    const DipTrace peak = hom_dip(antisym, open, open, {0.0, 1.0, 2.0}, 1.0);
    CHECK(peak.counts[0] == doctest::Approx(1.0).epsilon(1e-9)); // twice the wing level

    // symmetric and antisymmetric parts of equal norm cancel: no dip at all
    // both parts have unit norm: (psi psi + phi phi)/sqrt(2) and
    // (psi phi - phi psi)/sqrt(2) for orthonormal modes
    const SpectralGrid balanced = grid_from([&](std::size_t i, std::size_t j) {
        const double s = (psi[i] * psi[j] + phi[i] * phi[j]) / std::sqrt(2.0);
        const double a = (psi[i] * phi[j] - phi[i] * psi[j]) / std::sqrt(2.0);
        return s + a;
    });
    const DipTrace flat = hom_dip(balanced, open, open, {0.0, 1.0, 2.0}, 1.0);
    CHECK(flat.counts[0] == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("hom rejects zero filtered amplitude")
{
    CHECK_THROWS_AS(hom_dip(physical_grid(), tophat(500.0, 1.0), tophat(500.0, 1.0),
                            {0.0, 1.0}, 1.0),
                    std::domain_error);
}

TEST_CASE("rank-one state identical to the coherent mode gives unit visibility")
{
    const std::vector<double> axis = linspace(770.0, 790.0, 201);
    const double dl = axis[1] - axis[0];
    CoherentMode mode;
    mode.axis_nm = axis;
    double norm = 0.0;
    for (const double lam : axis) {
        norm += gauss_mode(lam, 780.0, 5.0) * gauss_mode(lam, 780.0, 5.0);
    }
    norm *= dl;
    for (const double lam : axis) {
        mode.amplitude.push_back(gauss_mode(lam, 780.0, 5.0) / std::sqrt(norm));
    }

    SpectralDensityOp rho;
    rho.axis_nm = axis;
    Eigen::VectorXcd v(static_cast<Eigen::Index>(axis.size()));
    for (std::size_t i = 0; i < axis.size(); ++i) {
        v[static_cast<Eigen::Index>(i)] = mode.amplitude[i];
    }
    rho.matrix = v * v.adjoint() * dl;
    rho.purity = 1.0;

    CHECK(rt_visibility(rho, mode, 1.0) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("reference configuration: calibrated overlap factor lands on 78 percent")
{
    const SpectralGrid filtered =
        apply_heralded_filter(physical_grid(), gaussian(780.0, 10.0, 0.63));
    const SpectralDensityOp rho = heralded_density_op(filtered, gaussian(780.0, 1.0));
    const CoherentMode mode =
        coherent_pulse_mode(780.0, 150.0, gaussian(780.0, 10.0, 0.63), rho.axis_nm);

    const double spectral = rt_visibility(rho, mode, 1.0);
    CHECK(spectral == doctest::Approx(0.824).epsilon(0.03)); // frozen oracle value

    // Rayleigh bound: the projected overlap cannot exceed the top eigenvalue.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(rho.matrix);
    CHECK(spectral <= eig.eigenvalues().maxCoeff() + 1e-9);

    // mode_overlap_factor calibrated so that V(0) = 0.78
    const double factor = 0.78 / spectral;
    CHECK(rt_visibility(rho, mode, factor) == doctest::Approx(0.78).epsilon(1e-9));

    // visibility decays monotonically as the coherent center walks away
    double previous = 1e300;
    for (const double offset : {0.0, 1.0, 2.0, 3.0, 4.0}) {
        const CoherentMode detuned = coherent_pulse_mode(780.0 + offset, 150.0,
                                                         gaussian(780.0, 10.0, 0.63),
                                                         rho.axis_nm);
        const double v = rt_visibility(rho, detuned, 1.0);
        CHECK(v < previous + 1e-12);
        previous = v;
    }
}

TEST_CASE("rt dip: weak-field bound enforced, trace dips to 1 - V")
{
    const SpectralGrid filtered =
        apply_heralded_filter(physical_grid(), gaussian(780.0, 10.0, 0.63));
    const SpectralDensityOp rho = heralded_density_op(filtered, gaussian(780.0, 1.0));
    const CoherentMode mode =
        coherent_pulse_mode(780.0, 150.0, gaussian(780.0, 10.0, 0.63), rho.axis_nm);

    CHECK_THROWS_AS(rt_dip(rho, mode, 0.5, 1.0, {0.0, 1.0}, 100.0), std::invalid_argument);

    const DipTrace trace = rt_dip(rho, mode, 0.05, 0.9, delays(-600.0, 600.0, 41), 600.0);
    const std::size_t center = trace.counts.size() / 2;
    const double v0 = rt_visibility(rho, mode, 0.9);
    CHECK(trace.counts[center] == doctest::Approx(600.0 * (1.0 - v0)).epsilon(1e-9));
    CHECK(trace.counts.front() > trace.counts[center]); // wings recover
}

TEST_CASE("gaussian dip fit: round trip with Poisson noise")
{
    std::mt19937_64 rng(7);
    const double baseline = 19500.0, visibility = 0.99, center = 17.0, sigma = 120.0;
    DipTrace trace;
    trace.delays = delays(-800.0, 800.0, 41);
    for (const double tau : trace.delays) {
        const double u = (tau - center) / sigma;
        const double mean = baseline * (1.0 - visibility * std::exp(-0.5 * u * u));
        std::poisson_distribution<long> poisson(std::max(mean, 0.0));
        trace.counts.push_back(static_cast<double>(poisson(rng)));
    }

    const DipFit fit = fit_gaussian_dip(trace);
    CHECK(fit.converged);
    CHECK(fit.width_identifiable);
    CHECK(std::abs(fit.visibility - visibility) < 0.02);
    CHECK(std::abs(fit.center - center) < 10.0);
    CHECK(std::abs(fit.width_sigma - sigma) / sigma < 0.05);
    CHECK(std::abs(fit.baseline - baseline) / baseline < 0.01);
}

TEST_CASE("gaussian dip fit: flat trace flags the width as unidentifiable")
{
    std::mt19937_64 rng(11);
    DipTrace trace;
    trace.delays = delays(-800.0, 800.0, 41);
    std::poisson_distribution<long> poisson(5000.0);
    for (std::size_t i = 0; i < trace.delays.size(); ++i) {
        trace.counts.push_back(static_cast<double>(poisson(rng)));
    }
    const DipFit fit = fit_gaussian_dip(trace);
    CHECK(std::abs(fit.visibility) < 0.05); // at the noise floor
    CHECK_FALSE(fit.width_identifiable);
}

TEST_CASE("gaussian dip fit: wing-scaled HOM trace fits at 99 percent")
{
    const FilterSpec f = gaussian(780.0, 10.0, 0.63);
    const DipTrace trace = hom_dip(physical_grid(), f, f, delays(-600.0, 600.0, 61), 39000.0);
    const DipFit fit = fit_gaussian_dip(trace);
    CHECK(fit.converged);
    CHECK(fit.visibility >= 0.98);
    CHECK(fit.visibility <= 1.005);
    CHECK(std::abs(fit.center) < 10.0);
}

TEST_CASE("gaussian dip fit is invariant under count rescaling")
{
    const FilterSpec f = gaussian(780.0, 10.0, 0.63);
    DipTrace trace = hom_dip(physical_grid(), f, f, delays(-600.0, 600.0, 41), 39000.0);
    const DipFit base = fit_gaussian_dip(trace);
    for (double& c : trace.counts) c *= 3.7;
    const DipFit scaled = fit_gaussian_dip(trace);
    CHECK(scaled.visibility == doctest::Approx(base.visibility).epsilon(1e-9));
    CHECK(scaled.center == doctest::Approx(base.center).epsilon(1e-9));
    CHECK(scaled.width_sigma == doctest::Approx(base.width_sigma).epsilon(1e-9));
    CHECK(scaled.baseline == doctest::Approx(3.7 * base.baseline).epsilon(1e-9));
}

TEST_CASE("gaussian dip fit input contract")
{
    DipTrace short_trace;
    short_trace.delays = {0.0, 1.0, 2.0};
    short_trace.counts = {1.0, 0.5, 1.0};
    CHECK_THROWS_AS(fit_gaussian_dip(short_trace), std::invalid_argument);

    // one-sided trace: wings absent on the right
    DipTrace lopsided;
    lopsided.delays = delays(-400.0, 0.0, 21);
    for (const double tau : lopsided.delays) {
        lopsided.counts.push_back(1000.0 * (1.0 - 0.9 * std::exp(-tau * tau / 2e4)));
    }
    CHECK_THROWS_AS(fit_gaussian_dip(lopsided), std::invalid_argument);
}
