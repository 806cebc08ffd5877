#include "pdc/dispersion.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "pdc/numeric.hpp"

namespace pdc {

double SellmeierCoeffs::index_squared(double wavelength_um) const
{
    const double l2 = wavelength_um * wavelength_um;
    return a + b / (l2 - c) - d * l2;
}

SellmeierSet bbo_kato_1986()
{
    SellmeierSet set;
    set.id = "bbo-kato-1986";
    set.ordinary = {2.7405, 0.0184, 0.0179, 0.0155};
    set.extraordinary = {2.3730, 0.0128, 0.0156, 0.0044};
    set.valid_min_nm = 200.0;
    set.valid_max_nm = 1100.0;
    return set;
}

namespace {

void check_range(const SellmeierSet& set, double wavelength_nm)
{
    if (!set.in_range(wavelength_nm)) {
        std::ostringstream msg;
        msg << "wavelength " << wavelength_nm << " nm outside validity range ["
            << set.valid_min_nm << ", " << set.valid_max_nm << "] nm of Sellmeier set '"
            << set.id << "'";
        throw std::out_of_range(msg.str());
    }
}

double principal_extraordinary(const SellmeierSet& set, double wavelength_nm)
{
    return std::sqrt(set.extraordinary.index_squared(wavelength_nm * 1e-3));
}

} // namespace

double index_ordinary(const SellmeierSet& set, double wavelength_nm)
{
    check_range(set, wavelength_nm);
    return std::sqrt(set.ordinary.index_squared(wavelength_nm * 1e-3));
}

double index_extraordinary(const SellmeierSet& set, double wavelength_nm, double theta_rad)
{
    check_range(set, wavelength_nm);
    if (theta_rad < 0.0 || theta_rad > kPi / 2.0 + 1e-12) {
        throw std::invalid_argument("index_extraordinary: theta must be in [0, pi/2]");
    }
    const double no = index_ordinary(set, wavelength_nm);
    const double ne = principal_extraordinary(set, wavelength_nm);
    const double c = std::cos(theta_rad);
    const double s = std::sin(theta_rad);
    return 1.0 / std::sqrt(c * c / (no * no) + s * s / (ne * ne));
}

} // namespace pdc
