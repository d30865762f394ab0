#pragma once

#include <cstdint>

namespace rydion {

/// Electron-shelving sequence parameters. The Rydberg state decays to D5/2
/// (dark), to the ground state (bright unless shelved by step iii), or back
/// to the initial D3/2 (bright).
struct SequenceParams {
    double p_ryd_to_d52 = 0.07 / 1.07;  // branching-ratio reading: D5/2:D3/2 = 7%
    double p_ryd_to_s = 0.0;            // forbidden for F states
    double p_pump_s_to_d52 = 0.90;      // step-iii shelving efficiency
    bool include_pumping = true;
    double dark_error = 0.0;    // P(read bright | dark)
    double bright_error = 0.0;  // P(read dark | bright)
    double background_dark = 0.0;  // residual dark probability, fit offset

    void validate() const;
};

struct ShotRecord {
    int shots = 0;
    int dark_counts = 0;
    std::uint64_t seed = 0;

    double dark_fraction() const { return shots > 0 ? double(dark_counts) / shots : 0.0; }
};

/// Probability that one sequence ends dark, given the Rydberg excitation
/// probability p_exc.
double dark_probability(double p_exc, const SequenceParams& params);

/// Bernoulli sampling of the per-shot outcome tree; per-shot streams are
/// derived from the seed, so the result is independent of evaluation order.
ShotRecord simulate_sequence(double p_exc, const SequenceParams& params, int shots,
                             std::uint64_t seed);

/// Quantum projection noise sqrt(p(1-p)/N) of a dark-fraction estimate.
double projection_noise(double p, int shots);

}  // namespace rydion
