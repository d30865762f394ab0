#pragma once

// Test-only oracle for the sideband comb: numerically integrate the
// instantaneous resonance frequency
//   domega(t) = beta_mm * W * sin(W t) - (8 beta_a W / 2) * cos^2(W t)
// (cumulative Simpson), remove the mean (static) shift, and project the
// periodic signal e^{i phase} onto e^{i q W t}. Independent of the analytic
// Bessel-series implementation it checks. The series' time origin sits half
// an RF period away, so the comparison removes a constant phase e^{i beta_mm}
// and a per-component factor (-1)^q; both are exact identities.

#include <cmath>
#include <complex>
#include <vector>

namespace rydion_test {

inline std::vector<std::complex<double>> comb_from_time_domain(double beta_mm, double beta_a,
                                                               int q_max, int samples = 8192) {
    const double w = 1.0;
    const double period = 2.0 * 3.14159265358979323846 / w;
    const double h = period / samples;
    std::vector<double> domega(std::size_t(samples) + 1);
    for (int i = 0; i <= samples; ++i) {
        const double t = i * h;
        const double c = std::cos(w * t);
        domega[std::size_t(i)] = beta_mm * w * std::sin(w * t) - 4.0 * beta_a * w * c * c;
    }
    std::vector<double> phase(std::size_t(samples) + 1, 0.0);
    for (int i = 2; i <= samples; i += 2)
        phase[std::size_t(i)] =
            phase[std::size_t(i - 2)] +
            (h / 3.0) * (domega[std::size_t(i - 2)] + 4.0 * domega[std::size_t(i - 1)] +
                         domega[std::size_t(i)]);
    for (int i = 1; i <= samples; i += 2)
        phase[std::size_t(i)] =
            phase[std::size_t(i - 1)] +
            (h / 12.0) * (5.0 * domega[std::size_t(i - 1)] + 8.0 * domega[std::size_t(i)] -
                          (i + 1 <= samples ? domega[std::size_t(i + 1)]
                                            : domega[std::size_t(i - 1)]));
    double mean_shift = 0.0;
    for (int i = 0; i < samples; ++i) mean_shift += domega[std::size_t(i)];
    mean_shift /= samples;

    std::vector<std::complex<double>> comb(std::size_t(2 * q_max) + 1);
    for (int q = -q_max; q <= q_max; ++q) {
        std::complex<double> acc{0.0, 0.0};
        for (int i = 0; i < samples; ++i) {
            const double t = i * h;
            acc += std::exp(
                std::complex<double>(0.0, phase[std::size_t(i)] - mean_shift * t - q * w * t));
        }
        comb[std::size_t(q + q_max)] = acc / double(samples);
    }
    return comb;
}

}  // namespace rydion_test
