// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Every tolerance is pinned here, in code.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdarg>
#include <cstdio>
#include <string>
#include <vector>

#include "comb_oracle.hpp"
#include "rydion/detection.hpp"
#include "rydion/inference.hpp"
#include "rydion/lineshape.hpp"
#include "rydion/numerics.hpp"
#include "rydion/structure.hpp"

using namespace rydion;

namespace {

constexpr double kPi = 3.14159265358979323846;
int g_failures = 0;

void report(int id, bool pass, const std::string& what, const std::string& detail) {
    std::printf("criterion %2d: %s  %s  (%s)\n", id, pass ? "PASS" : "FAIL", what.c_str(),
                detail.c_str());
    if (!pass) ++g_failures;
}

std::string fmt(const char* format, ...) {
    char buf[512];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buf, sizeof buf, format, args);
    va_end(args);
    return buf;
}

// --- 1: Table 1 level energies ---------------------------------------------
void criterion_1() {
    const double e51 = level_energy_from_wavelength(122.041913e-9, InitialLevel::D32);
    const double e52 = level_energy_from_wavelength(122.032384e-9, InitialLevel::D32);
    const double e64 = level_energy_from_wavelength(122.04050e-9, InitialLevel::D52);
    const bool pass = std::abs(e51 - 95589.258) < 0.02 && std::abs(e52 - 95595.656) < 0.02 &&
                      std::abs(e64 - 95650.901) < 0.1;
    report(1, pass, "Table 1 level energies from wavelengths",
           fmt("51F %.3f, 52F %.3f, 64F %.3f cm^-1", e51, e52, e64));
}

// --- 2: series identification ----------------------------------------------
void criterion_2() {
    const std::vector<double> lines = {
        level_energy_from_wavelength(122.041913e-9, InitialLevel::D32),
        level_energy_from_wavelength(122.032384e-9, InitialLevel::D32)};
    bool pass = false;
    std::string detail;
    try {
        const SeriesAssignment fit = identify_series(lines, 2, 40, 70);
        const bool f_ok = fit.n == std::vector<int>{51, 52} && fit.delta >= 0.0 &&
                          fit.delta <= 0.2;
        bool p_rejected = false;
        double p_resid = 0.0;
        IdentifyOptions p_hyp;
        p_hyp.fixed_delta = 1.44;
        p_hyp.fixed_limit_cm = fit.limit_cm;
        try {
            identify_series(lines, 2, 40, 70, p_hyp);
        } catch (const UnidentifiedSeriesError& err) {
            p_rejected = true;
            if (!err.best.empty()) p_resid = err.best.front().max_abs_residual_cm;
        }
        pass = f_ok && p_rejected;
        detail = fmt("n = %d,%d, delta = %.3f, max residual %.3f cm^-1; P hypothesis residual "
                     "%.2f cm^-1 %s",
                     fit.n[0], fit.n[1], fit.delta, fit.max_abs_residual_cm, p_resid,
                     p_rejected ? "rejected" : "NOT rejected");
    } catch (const std::exception& e) {
        detail = e.what();
    }
    report(2, pass, "series identification: F lines are 51, 52; P hypothesis rejected", detail);
}

// --- 3: polarizabilities -----------------------------------------------------
void criterion_3() {
    const QuantumDefectModel model = default_defect_model();
    const double a_f = polarizability({51, 3}, model, 40, 60).alpha_mhz_per_vcm2 / 2.0;
    const double a_p = polarizability({51, 1}, model, 40, 60).alpha_mhz_per_vcm2 / 2.0;
    const bool pass = a_f > 0.0 && a_f > 2e2 && a_f < 8e2 && a_p < 0.0;
    report(3, pass, "alpha(51F)/2 within x2 of 4e2 and positive; alpha(51P)/2 negative",
           fmt("alpha_51F/2 = %.1f, alpha_51P/2 = %.2f MHz/(V/cm)^2", a_f, a_p));
}

// --- 4: 4P lifetime -----------------------------------------------------------
void criterion_4() {
    const QuantumDefectModel model = calibrate_defects(default_term_table(), PhysicalConstants{});
    const double tau = lifetime_s({4, 1}, model, {{4, 0}, {3, 2}});
    const bool pass = std::abs(tau - 6.55e-9) / 6.55e-9 < 0.15;
    report(4, pass, "Ca+ 4P lifetime within 15% of 6.55 ns",
           fmt("tau = %.3f ns (deviation %.1f%%)", tau * 1e9,
               100.0 * std::abs(tau - 6.55e-9) / 6.55e-9));
}

// --- 5: hydrogenic oracle ----------------------------------------------------
void criterion_5() {
    QuantumDefectModel h;
    h.core_charge = 1;
    h.defects = {0.0, 0.0, 0.0, 0.0, 0.0};
    const double me = radial_matrix_element({1, 0}, {2, 1}, h);
    const double ref = 128.0 * std::sqrt(6.0) / 243.0;
    const PhysicalConstants consts;
    const double freq =
        (binding_energy_cm({2, 1}, h) - binding_energy_cm({1, 0}, h)) * consts.speed_of_light *
        100.0;
    const double rate = einstein_a({2, 1}, {1, 0}, h, freq);
    const bool pass =
        std::abs(me - ref) / ref < 1e-6 && std::abs(rate - 6.27e8) / 6.27e8 < 0.01;
    report(5, pass, "hydrogen 1s-2p integral = 1.2902 a0 (1e-6) and 2p rate = 6.27e8/s (1%)",
           fmt("<1s|r|2p> = %.8f a0, A = %.4g 1/s", me, rate));
}

// --- 6: comb against the time-domain oracle ---------------------------------
void criterion_6() {
    Rng rng(20150701);
    double worst_component = 0.0, worst_power = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const double b1 = 2.0 * rng.uniform();
        const double b2 = 2.0 * rng.uniform();
        const SidebandSpectrum comb = sideband_amplitudes(b1, b2, 1e-14);
        worst_power = std::max(worst_power, std::abs(comb.total_power() - 1.0));
        int q_max = 0;
        for (const auto& c : comb.components)
            if (std::abs(c.amplitude) > 1e-8) q_max = std::max(q_max, std::abs(c.q));
        const auto oracle = rydion_test::comb_from_time_domain(b1, b2, q_max);
        const std::complex<double> origin = std::exp(std::complex<double>(0.0, -b1));
        for (int q = -q_max; q <= q_max; ++q) {
            std::complex<double> analytic{0.0, 0.0};
            for (const auto& c : comb.components)
                if (c.q == q) analytic = c.amplitude;
            const std::complex<double> ref =
                oracle[std::size_t(q + q_max)] * origin * ((q & 1) ? -1.0 : 1.0);
            worst_component = std::max(worst_component, std::abs(analytic - ref));
        }
    }
    const bool pass = worst_component < 1e-6 && worst_power < 1e-9;
    report(6, pass, "sideband comb matches Eq.-(2) time-domain DFT; Parseval",
           fmt("worst component error %.2e, worst |power-1| %.2e over 20 random pairs",
               worst_component, worst_power));
}

// --- 7: carrier-to-sideband ratio at beta = 0.6 ------------------------------
void criterion_7() {
    const SidebandSpectrum comb = sideband_amplitudes(0.0, 0.6);
    double a0 = 0.0, a2 = 0.0;
    for (const auto& c : comb.components) {
        if (c.q == 0) a0 = std::abs(c.amplitude);
        if (c.q == 2) a2 = std::abs(c.amplitude);
    }
    const double ratio = a0 / a2;
    const double ref = bessel_jn(0, 0.6) / bessel_jn(1, 0.6);
    const bool pass = std::abs(ratio - ref) / ref < 0.01 && std::abs(ref - 3.18) < 0.01;
    report(7, pass, "carrier/first Stark sideband at beta = 0.6 is J0/J1 = 3.18 (1%)",
           fmt("ratio = %.4f, J0(0.6)/J1(0.6) = %.4f", ratio, ref));
}

// --- 8: broadening -----------------------------------------------------------
void criterion_8() {
    const PhysicalConstants consts;
    const double k = 2.0 * kPi / 122e-9;
    const double sigma_d = doppler_sigma_hz(0.005, consts.ion_mass_kg, k);
    const GaussianKernel kernel = broadening_kernel(BroadeningParams{}, k);
    // the ~10 MHz combined broadening is read as the quadrature width sigma;
    // the pinned 8.4 MHz Doppler sigma alone makes a 10 MHz Gaussian FWHM
    // unreachable (see ledger)
    const bool pass = std::abs(sigma_d - 8.4e6) / 8.4e6 < 0.02 && kernel.sigma_hz > 5e6 &&
                      kernel.sigma_hz < 15e6;
    report(8, pass, "Doppler sigma = 8.4 MHz (2%); combined width within 50% of 10 MHz",
           fmt("sigma_Doppler = %.3f MHz, combined sigma = %.3f MHz", sigma_d / 1e6,
               kernel.sigma_hz / 1e6));
}

// --- 9: fit round trip at the Fig. 3a conditions ------------------------------
struct McSample {
    double alpha;
    double error;
    bool converged;
};

McSample fit_synthetic(double e_ion, std::uint64_t seed) {
    TrapLineModel truth;
    truth.omega0_hz = 0.0;
    truth.alpha_mhz_per_vcm2 = 1000.0;  // alpha/2 = 5e2 MHz/(V/cm)^2
    truth.drive = TrapDrive{1.0e7, e_ion, 0.0, 2.0 * kPi / 122.04e-9};

    FitResult ref;
    ref.model = truth;
    ref.amplitude = 0.6;
    ref.baseline = 0.02;

    const ModulationIndices idx = modulation_indices(truth.alpha_mhz_per_vcm2, truth.drive);
    const double sigma = truth.kernel().sigma_hz;
    const double lo = 2.0 * idx.static_shift_hz - 5.0 * sigma;
    const double hi = 5.0 * sigma;
    const int npts = 96;

    MeasuredSpectrum data;
    data.metadata.e_ion_v_per_m = e_ion;
    data.metadata.omega_drive_hz = truth.drive.drive_frequency_hz;
    data.metadata.k_rad_per_m = truth.drive.wavenumber_rad_per_m;
    Rng rng(seed);
    for (int i = 0; i < npts; ++i) {
        const double x = lo + (hi - lo) * double(i) / double(npts - 1);
        const double p = std::clamp(fit_model_value(ref, x), 0.0, 1.0);
        data.points.push_back({x, 50, rng.binomial(50, p)});
    }

    TrapLineModel base = truth;
    base.alpha_mhz_per_vcm2 = 0.0;
    const FitResult fit = fit_lineshape(data, base);
    return {fit.value(FitParam::alpha), fit.error(FitParam::alpha), fit.converged};
}

void criterion_9() {
    const std::uint64_t master = 20150701;
    const int reps = 100;
    bool all_converged = true;
    double mean24 = 0.0, mean84 = 0.0, sq24 = 0.0, sq84 = 0.0;
    McSample first24{}, first84{};
    for (int rep = 0; rep < reps; ++rep) {
        std::uint64_t s = master + 1000 + rep;
        const McSample a = fit_synthetic(24.0, splitmix64(s));
        std::uint64_t s2 = master + 2000 + rep;
        const McSample b = fit_synthetic(84.0, splitmix64(s2));
        if (rep == 0) { first24 = a; first84 = b; }
        all_converged = all_converged && a.converged && b.converged;
        mean24 += a.alpha;
        mean84 += b.alpha;
        sq24 += a.alpha * a.alpha;
        sq84 += b.alpha * b.alpha;
    }
    mean24 /= reps;
    mean84 /= reps;
    const double sd24 = std::sqrt(std::max(sq24 / reps - mean24 * mean24, 0.0));
    const double sd84 = std::sqrt(std::max(sq84 / reps - mean84 * mean84, 0.0));
    const double se24 = sd24 / std::sqrt(double(reps));
    const double se84 = sd84 / std::sqrt(double(reps));

    const bool each_within_25 = std::abs(first24.alpha / 2.0 - 500.0) / 500.0 < 0.25 &&
                                std::abs(first84.alpha / 2.0 - 500.0) / 500.0 < 0.25;
    const double joint = std::hypot(first24.error, first84.error);
    const bool agree = std::abs(first24.alpha - first84.alpha) < 2.0 * joint;
    const bool unbiased =
        std::abs(mean24 - 1000.0) < 2.0 * se24 && std::abs(mean84 - 1000.0) < 2.0 * se84;

    const bool pass = each_within_25 && agree && unbiased && all_converged;
    report(9, pass, "fit round trip at E = 24 / 84 V/m, 50 shots, alpha/2 = 5e2",
           fmt("alpha/2: %.0f+-%.0f (24 V/m), %.1f+-%.1f (84 V/m); MC bias %.2f SE / %.2f SE",
               first24.alpha / 2.0, first24.error / 2.0, first84.alpha / 2.0, first84.error / 2.0,
               (mean24 - 1000.0) / se24, (mean84 - 1000.0) / se84));
}

// --- 10: detection Monte Carlo ------------------------------------------------
void criterion_10() {
    SequenceParams params;
    params.p_ryd_to_s = 0.0;
    const ShotRecord zero = simulate_sequence(0.0, params, 100000, 11);
    const double p_exc = 0.55;
    const double analytic = dark_probability(p_exc, params);
    const ShotRecord record = simulate_sequence(p_exc, params, 100000, 12);
    const double sigma = projection_noise(analytic, record.shots);
    const double dev = std::abs(record.dark_fraction() - analytic);
    const bool pass = zero.dark_counts == 0 && dev < 3.0 * sigma;
    report(10, pass, "detection Monte Carlo matches the analytic dark probability (3 sigma)",
           fmt("p_exc = 0 -> %d dark; deviation %.4f sigma at 1e5 shots", zero.dark_counts,
               dev / sigma));
}

// --- 11: Rabi frequency --------------------------------------------------------
void criterion_11() {
    const QuantumDefectModel model = default_defect_model();
    const double dipole = transition_dipole_cm({3, 2}, {52, 1}, model);
    const double omega = rabi_frequency(3e-6, 10e-6, dipole);
    const double target = 2.0 * kPi * 150e3;
    const bool pass = omega > target / 3.0 && omega < target * 3.0;
    report(11, pass, "3d-52P Rabi frequency within x3 of 2pi x 150 kHz at 3 uW, 10 um",
           fmt("Omega = 2pi x %.1f kHz (target 2pi x 150 kHz, ratio %.2f)",
               omega / (2.0 * kPi) / 1e3, target / omega));
}

}  // namespace

int main() {
    std::printf("rydion acceptance suite\n");
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    criterion_11();
    if (g_failures == 0) {
        std::printf("all criteria passed\n");
        return 0;
    }
    std::printf("%d criterion(s) FAILED\n", g_failures);
    return 1;
}
