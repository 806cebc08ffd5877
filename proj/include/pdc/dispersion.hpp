#pragma once

#include <string>

namespace pdc {

// One term set of the dispersion relation n^2 = a + b/(l^2 - c) - d*l^2,
// with l the vacuum wavelength in micrometers.
struct SellmeierCoeffs {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double d = 0.0;

    double index_squared(double wavelength_um) const;
};

// Named coefficient set for a uniaxial crystal (ordinary + principal
// extraordinary index). BBO is negative uniaxial: n_o > n_e everywhere in
// the validity range. Wavelengths at the API boundary are vacuum nm; the
// micrometer conversion is internal.
struct SellmeierSet {
    std::string id;
    SellmeierCoeffs ordinary;
    SellmeierCoeffs extraordinary;
    double valid_min_nm = 200.0;
    double valid_max_nm = 1100.0;

    bool in_range(double wavelength_nm) const
    {
        return wavelength_nm >= valid_min_nm && wavelength_nm <= valid_max_nm;
    }
};

// BBO coefficients from K. Kato, IEEE J. Quantum Electron. 22, 1013 (1986).
SellmeierSet bbo_kato_1986();

// n_o(lambda). Throws std::out_of_range outside the set's validity range.
double index_ordinary(const SellmeierSet& set, double wavelength_nm);

// Index seen by an extraordinary wave propagating at angle theta from the
// optic axis: 1/n^2 = cos^2(theta)/n_o^2 + sin^2(theta)/n_e^2.
// theta in radians, [0, pi/2].
double index_extraordinary(const SellmeierSet& set, double wavelength_nm, double theta_rad);

} // namespace pdc
