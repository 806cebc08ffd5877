#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "pdc/dispersion.hpp"
#include "pdc/numeric.hpp"

using namespace pdc;

namespace {

// Independent hand evaluation of the Kato coefficients, written out literally
// so it cannot share code with the implementation.
double oracle_no(double lambda_nm)
{
    const double l2 = (lambda_nm / 1000.0) * (lambda_nm / 1000.0);
    return std::sqrt(2.7405 + 0.0184 / (l2 - 0.0179) - 0.0155 * l2);
}

double oracle_ne(double lambda_nm)
{
    const double l2 = (lambda_nm / 1000.0) * (lambda_nm / 1000.0);
    return std::sqrt(2.3730 + 0.0128 / (l2 - 0.0156) - 0.0044 * l2);
}

} // namespace

TEST_CASE("ordinary index matches the hand-evaluated Sellmeier expression")
{
    const SellmeierSet set = bbo_kato_1986();
    CHECK(index_ordinary(set, 780.0) == doctest::Approx(oracle_no(780.0)).epsilon(1e-12));
    CHECK(index_ordinary(set, 390.0) == doctest::Approx(oracle_no(390.0)).epsilon(1e-12));
    // frozen oracle values
    CHECK(index_ordinary(set, 780.0) == doctest::Approx(1.6619957382224546).epsilon(1e-6));
    CHECK(index_ordinary(set, 390.0) == doctest::Approx(1.6956565816362987).epsilon(1e-6));
}

TEST_CASE("out-of-range wavelengths are rejected, never extrapolated")
{
    const SellmeierSet set = bbo_kato_1986();
    CHECK_THROWS_AS(index_ordinary(set, 150.0), std::out_of_range);
    CHECK_THROWS_AS(index_ordinary(set, 1200.0), std::out_of_range);
    CHECK_THROWS_AS(index_extraordinary(set, 1200.0, 0.3), std::out_of_range);

    SellmeierSet narrow = set;
    narrow.valid_min_nm = 400.0;
    CHECK_THROWS_AS(index_ordinary(narrow, 390.0), std::out_of_range);
}

TEST_CASE("index ellipse limits: optic axis gives n_o, 90 degrees gives n_e")
{
    const SellmeierSet set = bbo_kato_1986();
    for (const double lam : {300.0, 390.0, 780.0, 1000.0}) {
        CHECK(index_extraordinary(set, lam, 0.0)
              == doctest::Approx(index_ordinary(set, lam)).epsilon(1e-12));
        CHECK(index_extraordinary(set, lam, kPi / 2.0)
              == doctest::Approx(oracle_ne(lam)).epsilon(1e-12));
    }
}

TEST_CASE("intermediate angle lies strictly between the principal indices")
{
    const SellmeierSet set = bbo_kato_1986();
    const double n = index_extraordinary(set, 390.0, 0.5);
    CHECK(n == doctest::Approx(1.6642218417061752).epsilon(1e-6)); // frozen oracle value
    CHECK(n < oracle_no(390.0));
    CHECK(n > oracle_ne(390.0));
}

TEST_CASE("sandwich and monotonicity across the validity range")
{
    const SellmeierSet set = bbo_kato_1986();
    for (double lam = 210.0; lam <= 1090.0; lam += 20.0) {
        const double no = index_ordinary(set, lam);
        const double ne = index_extraordinary(set, lam, kPi / 2.0);
        CHECK(no > ne);       // negative uniaxial
        CHECK(ne > 1.0);
        double previous = index_extraordinary(set, lam, 0.0);
        CHECK(previous == doctest::Approx(no).epsilon(1e-12));
        for (double theta = 0.05; theta <= kPi / 2.0 - 1e-9; theta += 0.05) {
            const double n = index_extraordinary(set, lam, theta);
            CHECK(n < previous); // strictly decreasing in theta
            CHECK(n <= no + 1e-12);
            CHECK(n >= ne - 1e-12);
            previous = n;
        }
    }
}

TEST_CASE("evaluation is deterministic")
{
    const SellmeierSet set = bbo_kato_1986();
    CHECK(index_ordinary(set, 713.37) == index_ordinary(set, 713.37));
    CHECK(index_extraordinary(set, 713.37, 0.41) == index_extraordinary(set, 713.37, 0.41));
}

TEST_CASE("theta outside [0, pi/2] is a contract violation")
{
    const SellmeierSet set = bbo_kato_1986();
    CHECK_THROWS_AS(index_extraordinary(set, 390.0, -0.1), std::invalid_argument);
    CHECK_THROWS_AS(index_extraordinary(set, 390.0, 2.0), std::invalid_argument);
}
