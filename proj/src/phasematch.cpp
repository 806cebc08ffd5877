#include "pdc/phasematch.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "pdc/errors.hpp"
#include "pdc/numeric.hpp"

namespace pdc {

double conjugate_wavelength(double pump_nm, double trigger_nm)
{
    if (pump_nm <= 0.0 || trigger_nm <= pump_nm) {
        std::ostringstream msg;
        msg << "conjugate_wavelength: trigger wavelength (" << trigger_nm
            << " nm) must exceed pump wavelength (" << pump_nm << " nm)";
        throw std::invalid_argument(msg.str());
    }
    return 1.0 / (1.0 / pump_nm - 1.0 / trigger_nm);
}

double PairKinematics::heralded_internal(double theta_t_rad) const
{
    const double s = k_trigger * std::sin(theta_t_rad) / k_heralded;
    if (s > 1.0) {
        throw std::domain_error("transverse matching has no real heralded angle");
    }
    return std::asin(s);
}

double PairKinematics::longitudinal_mismatch(double theta_t_rad) const
{
    const double theta_h = heralded_internal(theta_t_rad);
    return k_pump - k_trigger * std::cos(theta_t_rad) - k_heralded * std::cos(theta_h);
}

double PairKinematics::max_trigger_internal() const
{
    if (k_trigger <= k_heralded) {
        return kPi / 2.0 - 1e-9;
    }
    return std::asin(k_heralded / k_trigger) - 1e-12;
}

PairKinematics pair_kinematics(double pump_nm, double trigger_nm,
                               const CrystalCut& cut, const SellmeierSet& set)
{
    if (cut.cut_angle_deg <= 0.0 || cut.cut_angle_deg >= 90.0) {
        throw std::invalid_argument("crystal cut angle must lie in (0, 90) deg");
    }
    if (cut.thickness_mm <= 0.0) {
        throw std::invalid_argument("crystal thickness must be positive");
    }
    const double heralded_nm = conjugate_wavelength(pump_nm, trigger_nm);
    PairKinematics kin;
    // pump/trigger out of the dispersion range violate the precondition and
    // surface as range errors; an out-of-range conjugate means the pair
    // simply cannot be produced
    const double n_pump = index_extraordinary(set, pump_nm, deg_to_rad(cut.cut_angle_deg));
    kin.n_o_trigger = index_ordinary(set, trigger_nm);
    if (!set.in_range(heralded_nm)) {
        std::ostringstream msg;
        msg << "pair (" << pump_nm << ", " << trigger_nm << ") nm: conjugate "
            << heralded_nm << " nm lies outside the dispersion validity range";
        throw NotPhaseMatchableError(msg.str());
    }
    kin.n_o_heralded = index_ordinary(set, heralded_nm);
    kin.k_pump = 2.0 * kPi * n_pump / pump_nm;
    kin.k_trigger = 2.0 * kPi * kin.n_o_trigger / trigger_nm;
    kin.k_heralded = 2.0 * kPi * kin.n_o_heralded / heralded_nm;
    return kin;
}

namespace {

double external_from_internal(double n_o, double theta_int_rad)
{
    const double s = n_o * std::sin(theta_int_rad);
    if (s > 1.0) {
        throw NotPhaseMatchableError("internal angle beyond total internal reflection");
    }
    return rad_to_deg(std::asin(s));
}

} // namespace

EmissionAngles solve_emission_angles(double pump_nm, double trigger_nm,
                                     const CrystalCut& cut, const SellmeierSet& set)
{
    const PairKinematics kin = pair_kinematics(pump_nm, trigger_nm, cut, set);

    // The longitudinal mismatch is strictly increasing in theta_t, so a root
    // exists iff it changes sign on [0, theta_max].
    const double theta_max = kin.max_trigger_internal();
    const double at_zero = kin.longitudinal_mismatch(0.0);
    if (at_zero > 0.0) {
        std::ostringstream msg;
        msg << "pair (" << pump_nm << ", " << trigger_nm
            << ") nm not phase-matchable at cut " << cut.cut_angle_deg
            << " deg: pump momentum exceeds the collinear pair momentum";
        throw NotPhaseMatchableError(msg.str());
    }
    if (kin.longitudinal_mismatch(theta_max) < 0.0) {
        std::ostringstream msg;
        msg << "pair (" << pump_nm << ", " << trigger_nm
            << ") nm not phase-matchable at cut " << cut.cut_angle_deg
            << " deg: mismatch never closes within the physical angle range";
        throw NotPhaseMatchableError(msg.str());
    }
    const double theta_t = bisect(
        [&](double th) { return kin.longitudinal_mismatch(th); }, 0.0, theta_max, 1e-12);
    const double theta_h = kin.heralded_internal(theta_t);

    EmissionAngles out;
    out.trigger_internal_deg = rad_to_deg(theta_t);
    out.heralded_internal_deg = rad_to_deg(theta_h);
    out.trigger_external_deg = external_from_internal(kin.n_o_trigger, theta_t);
    out.heralded_external_deg = external_from_internal(kin.n_o_heralded, theta_h);
    return out;
}

double solve_degenerate_cut_angle(double pump_nm, double target_external_deg,
                                  const SellmeierSet& set)
{
    if (target_external_deg <= 0.0 || target_external_deg >= 20.0) {
        throw std::invalid_argument("target external angle must lie in (0, 20) deg");
    }
    constexpr double kBracketLo = 20.0;
    constexpr double kBracketHi = 40.0;

    // External degenerate angle grows with cut angle; below the collinear
    // cut nothing matches, which we treat as "below any positive target".
    const auto residual = [&](double cut_deg) {
        CrystalCut cut{cut_deg, 0.7};
        try {
            const EmissionAngles a = solve_emission_angles(pump_nm, 2.0 * pump_nm, cut, set);
            return a.trigger_external_deg - target_external_deg;
        } catch (const NotPhaseMatchableError&) {
            return -target_external_deg;
        }
    };

    if (residual(kBracketLo) >= 0.0 || residual(kBracketHi) <= 0.0) {
        std::ostringstream msg;
        msg << "solve_degenerate_cut_angle: no root in bracket [" << kBracketLo << ", "
            << kBracketHi << "] deg for target " << target_external_deg << " deg";
        throw std::domain_error(msg.str());
    }
    return bisect(residual, kBracketLo, kBracketHi, 1e-6);
}

TuningCurve tuning_curve(double pump_nm, const CrystalCut& cut, double lo_nm,
                         double hi_nm, int n_samples, const SellmeierSet& set)
{
    if (n_samples < 2) {
        throw std::invalid_argument("tuning_curve: need at least 2 samples");
    }
    if (lo_nm >= hi_nm) {
        throw std::invalid_argument("tuning_curve: empty wavelength interval");
    }

    TuningCurve curve;
    curve.pump_nm = pump_nm;
    for (const double lam : linspace(lo_nm, hi_nm, n_samples)) {
        try {
            const EmissionAngles a = solve_emission_angles(pump_nm, lam, cut, set);
            curve.points.push_back({lam, a.trigger_external_deg, a.trigger_internal_deg});
        } catch (const NotPhaseMatchableError&) {
            ++curve.skipped;
        }
    }
    if (curve.points.empty()) {
        throw std::domain_error("tuning_curve: no sample is phase-matchable");
    }
    return curve;
}

AcceptedSet accepted_photon_set(double pump_lo_nm, double pump_hi_nm,
                                const FilterSpec& trigger_filter,
                                const AcceptanceWindow& window, const CrystalCut& cut,
                                const SellmeierSet& set, int pump_samples,
                                int trigger_samples)
{
    if (pump_lo_nm > pump_hi_nm) {
        throw std::invalid_argument("accepted_photon_set: empty pump interval");
    }
    if (pump_samples < 1 || trigger_samples < 2) {
        throw std::invalid_argument("accepted_photon_set: too few samples");
    }
    const Passband band = filter_passband(trigger_filter);
    if (band.lo_nm >= band.hi_nm) {
        throw std::invalid_argument("accepted_photon_set: empty trigger passband");
    }

    AcceptedSet out;
    out.heralded_lo_nm = std::numeric_limits<double>::infinity();
    out.heralded_hi_nm = -std::numeric_limits<double>::infinity();
    out.heralded_angle_lo_deg = std::numeric_limits<double>::infinity();
    out.heralded_angle_hi_deg = -std::numeric_limits<double>::infinity();

    const std::vector<double> pumps = (pump_lo_nm == pump_hi_nm)
                                          ? std::vector<double>{pump_lo_nm}
                                          : linspace(pump_lo_nm, pump_hi_nm, pump_samples);
    const std::vector<double> triggers = linspace(band.lo_nm, band.hi_nm, trigger_samples);

    for (const double pump : pumps) {
        for (const double trig : triggers) {
            ++out.scanned;
            EmissionAngles a;
            try {
                a = solve_emission_angles(pump, trig, cut, set);
            } catch (const NotPhaseMatchableError&) {
                continue;
            }
            if (std::abs(a.trigger_external_deg - window.center_deg) > window.half_width_deg) {
                continue;
            }
            const double heralded = conjugate_wavelength(pump, trig);
            out.heralded_lo_nm = std::min(out.heralded_lo_nm, heralded);
            out.heralded_hi_nm = std::max(out.heralded_hi_nm, heralded);
            out.heralded_angle_lo_deg = std::min(out.heralded_angle_lo_deg, a.heralded_external_deg);
            out.heralded_angle_hi_deg = std::max(out.heralded_angle_hi_deg, a.heralded_external_deg);
            ++out.accepted;
        }
    }
    if (out.accepted == 0) {
        throw std::domain_error("accepted_photon_set: no (pump, trigger) pair accepted");
    }
    return out;
}

} // namespace pdc
