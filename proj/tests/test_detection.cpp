#include <doctest.h>

#include <cmath>
#include <initializer_list>
#include <stdexcept>

#include "rydion/detection.hpp"

using namespace rydion;

TEST_CASE("dark probability") {
    SequenceParams params;  // F-state defaults: D5/2 branch only

    SUBCASE("no excitation, no errors: exactly zero") {
        CHECK(dark_probability(0.0, params) == 0.0);
    }
    SUBCASE("full excitation under the 7% branching-ratio reading") {
        params.p_ryd_to_s = 0.0;
        CHECK(dark_probability(1.0, params) == doctest::Approx(0.07 / 1.07).epsilon(1e-12));
    }
    SUBCASE("affine and monotone in p_exc") {
        params.p_ryd_to_s = 0.2;
        params.bright_error = 0.01;
        const double p0 = dark_probability(0.0, params);
        const double p1 = dark_probability(0.5, params);
        const double p2 = dark_probability(1.0, params);
        CHECK(p1 - p0 == doctest::Approx(p2 - p1).epsilon(1e-12));
        CHECK(p0 < p1);
        CHECK(p1 < p2);
    }
    SUBCASE("discrimination errors enter as the two-outcome model") {
        params.dark_error = 0.03;
        params.bright_error = 0.02;
        const double signal = 0.4 * params.p_ryd_to_d52;
        CHECK(dark_probability(0.4, params) ==
              doctest::Approx(signal * 0.97 + (1.0 - signal) * 0.02).epsilon(1e-12));
    }
    SUBCASE("P-state hypothesis collapses without pumping") {
        SequenceParams p_state;
        p_state.p_ryd_to_d52 = 0.01;
        p_state.p_ryd_to_s = 0.9;  // P states decay dominantly to the ground state
        p_state.include_pumping = true;
        const double with_pump = dark_probability(0.5, p_state);
        p_state.include_pumping = false;
        const double without_pump = dark_probability(0.5, p_state);
        CHECK(with_pump > 5.0 * without_pump);
        // F-state params barely notice the pumping step
        SequenceParams f_state;
        f_state.include_pumping = false;
        CHECK(dark_probability(0.5, f_state) ==
              doctest::Approx(0.5 * f_state.p_ryd_to_d52).epsilon(1e-12));
    }
    SUBCASE("pumping never lowers the signal") {
        SequenceParams p = SequenceParams{0.05, 0.3, 0.9, true, 0.0, 0.0, 0.0};
        const double on = dark_probability(0.7, p);
        p.include_pumping = false;
        CHECK(on >= dark_probability(0.7, p));
    }
    SUBCASE("invalid inputs rejected") {
        CHECK_THROWS_AS(dark_probability(1.5, params), std::invalid_argument);
        SequenceParams bad;
        bad.p_ryd_to_d52 = 0.8;
        bad.p_ryd_to_s = 0.5;
        CHECK_THROWS_AS(dark_probability(0.5, bad), std::invalid_argument);
    }
}

TEST_CASE("sequence simulation") {
    SequenceParams params;

    SUBCASE("p_exc = 0 gives zero dark counts for any seed") {
        for (std::uint64_t seed : {0ull, 7ull, 123456789ull}) {
            const ShotRecord r = simulate_sequence(0.0, params, 500, seed);
            CHECK(r.dark_counts == 0);
            CHECK(r.shots == 500);
        }
    }
    SUBCASE("identical seed reproduces the record") {
        params.p_ryd_to_s = 0.1;
        const ShotRecord a = simulate_sequence(0.37, params, 1000, 99);
        const ShotRecord b = simulate_sequence(0.37, params, 1000, 99);
        CHECK(a.dark_counts == b.dark_counts);
        CHECK(simulate_sequence(0.37, params, 1000, 100).dark_counts != a.dark_counts);
    }
    SUBCASE("empirical mean matches the analytic dark probability at 1e5 shots") {
        params.p_ryd_to_s = 0.25;
        params.bright_error = 0.01;
        const int shots = 100000;
        const double p = dark_probability(0.6, params);
        const double sigma = projection_noise(p, shots);
        const ShotRecord r = simulate_sequence(0.6, params, shots, 2024);
        CHECK(std::abs(r.dark_fraction() - p) < 3.0 * sigma);
    }
    SUBCASE("shots must be positive") {
        CHECK_THROWS_AS(simulate_sequence(0.5, params, 0, 1), std::invalid_argument);
    }
}

TEST_CASE("projection noise") {
    CHECK(projection_noise(0.0, 50) == 0.0);
    CHECK(projection_noise(1.0, 50) == 0.0);
    CHECK(projection_noise(0.5, 50) == doctest::Approx(0.070710678).epsilon(1e-8));
    SUBCASE("maximal at p = 1/2") {
        const double mid = projection_noise(0.5, 100);
        for (double p : {0.1, 0.3, 0.49, 0.51, 0.9}) CHECK(projection_noise(p, 100) < mid);
    }
    CHECK_THROWS_AS(projection_noise(-0.1, 50), std::invalid_argument);
    CHECK_THROWS_AS(projection_noise(0.5, 0), std::invalid_argument);
}
