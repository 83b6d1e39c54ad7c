#include <doctest.h>

#include "oracles.hpp"

#include <cmath>

// The reference routes themselves are pinned against closed-form values
// before they are trusted to judge the library.

TEST_CASE("binomial oracle: mass, symmetry, frozen values") {
    CHECK(oracles::binomial_pmf(2, 0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(oracles::binomial_pmf(4, 0) == doctest::Approx(0.375).epsilon(1e-14));
    CHECK(oracles::binomial_pmf(4, 1) == 0.0);
    CHECK(oracles::binomial_pmf(4, 6) == 0.0);
    for (long n : {1L, 7L, 64L}) {
        double mass = 0.0;
        for (long k = -n; k <= n; ++k) mass += oracles::binomial_pmf(n, k);
        CHECK(mass == doctest::Approx(1.0).epsilon(1e-13));
        for (long k = 0; k <= n; ++k) {
            CHECK(oracles::binomial_pmf(n, k) ==
                  doctest::Approx(oracles::binomial_pmf(n, -k)).epsilon(1e-14));
        }
    }
}

TEST_CASE("trinomial oracle: frozen one-step values and binomial consistency") {
    auto one = oracles::trinomial_pmf(1, 0.25);
    REQUIRE(one.size() == 3);
    CHECK(one[0] == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(one[1] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(one[2] == doctest::Approx(0.25).epsilon(1e-15));

    const long n = 16;
    auto tri = oracles::trinomial_pmf(n, 0.5);
    for (long k = -n; k <= n; ++k) {
        CHECK(tri[static_cast<std::size_t>(k + n)] ==
              doctest::Approx(oracles::binomial_pmf(n, k)).epsilon(1e-12));
    }
}

TEST_CASE("bessel oracle: frozen literature values and unit mass") {
    CHECK(oracles::bessel_i(0, 1.0) == doctest::Approx(1.266065877752008).epsilon(1e-13));
    CHECK(oracles::bessel_i(1, 1.0) == doctest::Approx(0.565159103992485).epsilon(1e-13));
    CHECK(oracles::bessel_i(0, 0.0) == 1.0);
    CHECK(oracles::bessel_i(3, 0.0) == 0.0);
    // sum_k e^-t I_|k|(t) = 1: the continuous-time pmf has unit mass.
    const double t = 10.0;
    double mass = oracles::continuous_ssrw_pmf(0, t);
    for (long k = 1; k <= 120; ++k) mass += 2.0 * oracles::continuous_ssrw_pmf(k, t);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("poisson oracle: normalization and base value") {
    CHECK(oracles::poisson_pmf(0, 3.0) == doctest::Approx(std::exp(-3.0)).epsilon(1e-14));
    double mass = 0.0;
    for (long n = 0; n <= 200; ++n) mass += oracles::poisson_pmf(n, 20.0);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("riemann oracle: exact on breakpoint-aligned geometry") {
    auto omega_at = [](long site) { return (((site % 2) + 2) % 2 == 0) ? 0.25 : 0.5; };
    // 1/omega averages to (4+2)/2 = 3 over any whole number of periods.
    const double avg = oracles::riemann_average_inverse(omega_at, 0.0, 2.0, 1.0, 200000);
    CHECK(avg == doctest::Approx(3.0).epsilon(1e-12));
    const double avg_fine = oracles::riemann_average_inverse(omega_at, -3.0, 3.0, 16.0, 96 * 2048);
    CHECK(avg_fine == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("distance oracles: hand-checked values") {
    std::vector<std::pair<long, double>> exact{{0, 0.5}, {1, 0.5}};
    std::vector<std::pair<long, double>> emp{{0, 0.4}, {2, 0.6}};
    CHECK(oracles::tv_distance(exact, emp) == doctest::Approx(0.6).epsilon(1e-14));

    CHECK(oracles::normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(oracles::normal_cdf(1.0) == doctest::Approx(0.8413447460685429).epsilon(1e-12));
}
