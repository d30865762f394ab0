#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "rydion/detection.hpp"
#include "rydion/inference.hpp"
#include "rydion/numerics.hpp"

using namespace rydion;

namespace {

constexpr double kPi = 3.14159265358979323846;
const PhysicalConstants kConsts;

TrapLineModel paper_conditions(double e_ion) {
    TrapLineModel model;
    model.omega0_hz = 0.0;
    model.alpha_mhz_per_vcm2 = 1000.0;  // alpha/2 = 5e2, the fitted paper value
    model.drive = TrapDrive{1.0e7, e_ion, 0.0, 2.0 * kPi / 122.04e-9};
    return model;
}

/// Synthetic measured spectrum: binomial shots around the model prediction.
MeasuredSpectrum synthesize_measurement(const TrapLineModel& model, double amplitude,
                                        double baseline, int points, int shots,
                                        std::uint64_t seed, bool noise = true) {
    const ModulationIndices idx = modulation_indices(model.alpha_mhz_per_vcm2, model.drive);
    const double sigma = model.kernel().sigma_hz;
    const double lo = 2.0 * idx.static_shift_hz - 5.0 * sigma;
    const double hi = 5.0 * sigma;

    // reference curve through the same evaluator used by the fitter
    FitResult ref;
    ref.model = model;
    ref.amplitude = amplitude;
    ref.baseline = baseline;

    MeasuredSpectrum data;
    data.metadata.e_ion_v_per_m = model.drive.field_v_per_m;
    data.metadata.omega_drive_hz = model.drive.drive_frequency_hz;
    data.metadata.k_rad_per_m = model.drive.wavenumber_rad_per_m;
    data.metadata.x_mm_m = model.drive.micromotion_amplitude_m;
    data.metadata.temperature_k = model.broadening.temperature_k;
    data.metadata.b_t = model.broadening.b_field_t;
    data.metadata.seed = seed;

    Rng rng(seed);
    for (int i = 0; i < points; ++i) {
        const double x = lo + (hi - lo) * double(i) / double(points - 1);
        const double p = std::clamp(fit_model_value(ref, x), 0.0, 1.0);
        const int dark = noise ? rng.binomial(shots, p) : int(std::lround(p * shots));
        data.points.push_back({x, shots, dark});
    }
    return data;
}

}  // namespace

TEST_CASE("level energy from wavelength (Table 1)") {
    const double e51 = level_energy_from_wavelength(122.041913e-9, InitialLevel::D32);
    const double e52 = level_energy_from_wavelength(122.032384e-9, InitialLevel::D32);
    const double e64 = level_energy_from_wavelength(122.04050e-9, InitialLevel::D52);
    CHECK(std::abs(e51 - 95589.258) < 0.02);
    CHECK(std::abs(e52 - 95595.656) < 0.02);
    CHECK(std::abs(e64 - 95650.901) < 0.1);
    CHECK_THROWS_AS(level_energy_from_wavelength(0.0, InitialLevel::D32), std::invalid_argument);
}

TEST_CASE("series identification") {
    const double rz2 = kConsts.rydberg_reduced_cm() * 4.0;

    SUBCASE("hydrogenic round trip recovers delta and limit exactly") {
        const double limit = 95751.87;
        std::vector<double> lines;
        for (int n : {30, 31, 32}) lines.push_back(limit - rz2 / double(n) / double(n));
        const SeriesAssignment fit = identify_series(lines, 2, 20, 40);
        CHECK(fit.n == std::vector<int>{30, 31, 32});
        CHECK(std::abs(fit.delta) < 1e-6);
        CHECK(std::abs(fit.limit_cm - limit) < 1e-6);
        CHECK(fit.max_abs_residual_cm < 1e-6);
    }
    SUBCASE("Table 1 F lines give n = 51, 52 with a small defect") {
        const std::vector<double> lines = {
            level_energy_from_wavelength(122.041913e-9, InitialLevel::D32),
            level_energy_from_wavelength(122.032384e-9, InitialLevel::D32)};
        const SeriesAssignment fit = identify_series(lines, 2, 40, 70);
        CHECK(fit.n == std::vector<int>{51, 52});
        CHECK(fit.delta >= 0.0);
        CHECK(fit.delta <= 0.2);
        CHECK(fit.max_abs_residual_cm < 0.5);
        CHECK(fit.limit_cm == doctest::Approx(95758.0).epsilon(2e-5));

        SUBCASE("all three lines, including 64F from D5/2") {
            std::vector<double> three = lines;
            three.push_back(level_energy_from_wavelength(122.04050e-9, InitialLevel::D52));
            const SeriesAssignment fit3 = identify_series(three, 2, 40, 70);
            CHECK(fit3.n == std::vector<int>{51, 52, 64});
            CHECK(fit3.delta >= 0.0);
            CHECK(fit3.delta <= 0.2);
        }
        SUBCASE("P hypothesis at the fitted limit is rejected") {
            IdentifyOptions p_hyp;
            p_hyp.fixed_delta = 1.44;
            p_hyp.fixed_limit_cm = fit.limit_cm;
            CHECK_THROWS_AS(identify_series(lines, 2, 40, 70, p_hyp), UnidentifiedSeriesError);
            try {
                identify_series(lines, 2, 40, 70, p_hyp);
            } catch (const UnidentifiedSeriesError& err) {
                REQUIRE_FALSE(err.best.empty());
                CHECK(err.best.front().max_abs_residual_cm > 2.0);
            }
        }
    }
    SUBCASE("limit plausibility window resolves the two-line degeneracy") {
        // without a bound on the series limit, a (64, 66) pattern fits two
        // lines exactly with a limit 55 cm^-1 below the ionization energy
        const std::vector<double> lines = {
            level_energy_from_wavelength(122.041913e-9, InitialLevel::D32),
            level_energy_from_wavelength(122.032384e-9, InitialLevel::D32)};
        IdentifyOptions unbounded;
        unbounded.limit_window_lo_cm.reset();
        unbounded.limit_window_hi_cm.reset();
        const SeriesAssignment loose = identify_series(lines, 2, 40, 70, unbounded);
        CHECK(loose.n != std::vector<int>{51, 52});
        CHECK(loose.max_abs_residual_cm < 1e-6);
    }
    SUBCASE("assignment is invariant under input reordering") {
        const std::vector<double> fwd = {
            level_energy_from_wavelength(122.041913e-9, InitialLevel::D32),
            level_energy_from_wavelength(122.04050e-9, InitialLevel::D52),
            level_energy_from_wavelength(122.032384e-9, InitialLevel::D32)};
        const SeriesAssignment fit = identify_series(fwd, 2, 40, 70);
        CHECK(fit.n == std::vector<int>{51, 64, 52});
        std::vector<double> rev(fwd.rbegin(), fwd.rend());
        const SeriesAssignment fit_rev = identify_series(rev, 2, 40, 70);
        CHECK(fit_rev.n == std::vector<int>{52, 64, 51});
        CHECK(fit_rev.delta == doctest::Approx(fit.delta).epsilon(1e-9));
    }
    SUBCASE("needs two lines") {
        CHECK_THROWS_AS(identify_series({95589.0}, 2, 40, 70), std::invalid_argument);
    }
}

TEST_CASE("lineshape fit") {
    SUBCASE("noise-free round trip recovers the generating parameters") {
        const TrapLineModel truth = paper_conditions(24.0);
        MeasuredSpectrum data = synthesize_measurement(truth, 0.6, 0.02, 60, 1000000, 5, false);
        FitResult fit = fit_lineshape(data, paper_conditions(24.0));
        CHECK(fit.converged);
        CHECK(std::abs(fit.value(FitParam::alpha) - 1000.0) / 1000.0 < 1e-4);
        CHECK(std::abs(fit.value(FitParam::omega0)) < 1e3);
        CHECK(std::abs(fit.value(FitParam::amplitude) - 0.6) < 1e-4);
        CHECK(std::abs(fit.value(FitParam::baseline) - 0.02) < 1e-5);
        CHECK(fit.degrees_of_freedom == 56);

        SUBCASE("beta-space reparameterization gives the same alpha") {
            FitOptions opts;
            opts.free = {FitParam::omega0, FitParam::beta_alpha, FitParam::amplitude,
                         FitParam::baseline};
            const FitResult fit_beta = fit_lineshape(data, paper_conditions(24.0), opts);
            CHECK(fit_beta.converged);
            CHECK(std::abs(fit_beta.model.alpha_mhz_per_vcm2 - fit.model.alpha_mhz_per_vcm2) /
                      fit.model.alpha_mhz_per_vcm2 <
                  1e-6);
        }
    }
    SUBCASE("noisy fit at paper conditions stays within 25%") {
        const TrapLineModel truth = paper_conditions(24.0);
        MeasuredSpectrum data = synthesize_measurement(truth, 0.6, 0.02, 96, 50, 41, true);
        const FitResult fit = fit_lineshape(data, paper_conditions(24.0));
        CHECK(fit.converged);
        CHECK(std::abs(fit.value(FitParam::alpha) - 1000.0) / 1000.0 < 0.25);
        CHECK(fit.chi_square / fit.degrees_of_freedom < 2.0);
    }
    SUBCASE("doubling the shot count shrinks errors by sqrt(2)") {
        const TrapLineModel truth = paper_conditions(24.0);
        MeasuredSpectrum d1 = synthesize_measurement(truth, 0.6, 0.02, 60, 400, 5, false);
        MeasuredSpectrum d2 = d1;
        for (auto& p : d2.points) {
            p.shots *= 2;
            p.dark_counts *= 2;
        }
        const FitResult f1 = fit_lineshape(d1, paper_conditions(24.0));
        const FitResult f2 = fit_lineshape(d2, paper_conditions(24.0));
        CHECK(f2.error(FitParam::alpha) ==
              doctest::Approx(f1.error(FitParam::alpha) / std::sqrt(2.0)).epsilon(1e-3));
    }
    SUBCASE("alpha and E_ion are reported as a degenerate pair") {
        const TrapLineModel truth = paper_conditions(24.0);
        MeasuredSpectrum data = synthesize_measurement(truth, 0.6, 0.02, 40, 200, 6, false);
        FitOptions opts;
        opts.free = {FitParam::omega0, FitParam::alpha, FitParam::e_ion, FitParam::amplitude,
                     FitParam::baseline};
        CHECK_THROWS_AS(fit_lineshape(data, paper_conditions(24.0), opts),
                        DegenerateParametersError);
        try {
            fit_lineshape(data, paper_conditions(24.0), opts);
        } catch (const DegenerateParametersError& err) {
            const bool pair_named =
                (err.first == FitParam::alpha && err.second == FitParam::e_ion) ||
                (err.first == FitParam::e_ion && err.second == FitParam::alpha);
            CHECK(pair_named);
        }
    }
    SUBCASE("under-determined data rejected") {
        const TrapLineModel truth = paper_conditions(24.0);
        MeasuredSpectrum data = synthesize_measurement(truth, 0.6, 0.02, 30, 50, 7, true);
        data.points.resize(4);  // 4 points, 4 free parameters
        CHECK_THROWS_AS(fit_lineshape(data, paper_conditions(24.0)), std::invalid_argument);
    }
    SUBCASE("covariance is symmetric with positive diagonal") {
        const TrapLineModel truth = paper_conditions(24.0);
        MeasuredSpectrum data = synthesize_measurement(truth, 0.6, 0.02, 50, 50, 8, true);
        const FitResult fit = fit_lineshape(data, paper_conditions(24.0));
        const int k = int(fit.parameters.size());
        for (int a = 0; a < k; ++a) {
            CHECK(fit.covariance[std::size_t(a * k + a)] > 0.0);
            for (int b = 0; b < k; ++b)
                CHECK(fit.covariance[std::size_t(a * k + b)] ==
                      doctest::Approx(fit.covariance[std::size_t(b * k + a)]).epsilon(1e-9));
        }
        CHECK(fit.chi_square >= 0.0);
    }
}

TEST_CASE("measured spectrum invariants") {
    MeasuredSpectrum data;
    data.points = {{0.0, 50, 10}, {1.0, 50, 0}, {2.0, 50, 50}};
    data.validate();
    CHECK(data.point_sigma(0) == doctest::Approx(std::sqrt(0.2 * 0.8 / 50.0)).epsilon(1e-12));
    // endpoints use the adjusted proportion (k + 1/2)/(N + 1)
    const double p_adj = 0.5 / 51.0;
    CHECK(data.point_sigma(1) ==
          doctest::Approx(std::sqrt(p_adj * (1.0 - p_adj) / 50.0)).epsilon(1e-12));
    CHECK(data.point_sigma(2) == doctest::Approx(data.point_sigma(1)).epsilon(1e-12));

    data.points.push_back({3.0, 50, 51});
    CHECK_THROWS_AS(data.validate(), std::invalid_argument);
}
