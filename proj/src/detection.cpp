#include "rydion/detection.hpp"

#include <cmath>
#include <stdexcept>

#include "rydion/numerics.hpp"

namespace rydion {

void SequenceParams::validate() const {
    const double probs[] = {p_ryd_to_d52, p_ryd_to_s,  p_pump_s_to_d52,
                            dark_error,   bright_error, background_dark};
    for (double p : probs)
        if (!(p >= 0.0 && p <= 1.0))
            throw std::invalid_argument("SequenceParams: probabilities must be in [0,1]");
    if (p_ryd_to_d52 + p_ryd_to_s > 1.0 + 1e-12)
        throw std::invalid_argument("SequenceParams: p_ryd_to_d52 + p_ryd_to_s must be <= 1");
}

double dark_probability(double p_exc, const SequenceParams& params) {
    params.validate();
    if (!(p_exc >= 0.0 && p_exc <= 1.0))
        throw std::invalid_argument("dark_probability: p_exc must be in [0,1]");
    double shelved = params.p_ryd_to_d52;
    if (params.include_pumping) shelved += params.p_pump_s_to_d52 * params.p_ryd_to_s;
    double dark = p_exc * shelved;
    dark = dark + (1.0 - dark) * params.background_dark;
    return dark * (1.0 - params.dark_error) + (1.0 - dark) * params.bright_error;
}

ShotRecord simulate_sequence(double p_exc, const SequenceParams& params, int shots,
                             std::uint64_t seed) {
    params.validate();
    if (shots < 1) throw std::invalid_argument("simulate_sequence: shots must be >= 1");
    if (!(p_exc >= 0.0 && p_exc <= 1.0))
        throw std::invalid_argument("simulate_sequence: p_exc must be in [0,1]");

    ShotRecord record{shots, 0, seed};
    for (int shot = 0; shot < shots; ++shot) {
        std::uint64_t stream = seed;
        // derive an independent stream per shot so shots can run in parallel
        stream ^= 0x51aa9cd3f27ull * std::uint64_t(shot + 1);
        Rng rng(splitmix64(stream));

        bool dark = false;
        if (rng.uniform() < p_exc) {
            const double u = rng.uniform();
            if (u < params.p_ryd_to_d52) {
                dark = true;  // direct decay into D5/2
            } else if (u < params.p_ryd_to_d52 + params.p_ryd_to_s) {
                // cascaded to the ground state; step iii shelves it into D5/2
                if (params.include_pumping && rng.uniform() < params.p_pump_s_to_d52) dark = true;
            }
            // otherwise back to the initial D3/2: bright
        }
        if (!dark && params.background_dark > 0.0 && rng.uniform() < params.background_dark)
            dark = true;
        // state discrimination errors
        if (dark) {
            if (params.dark_error > 0.0 && rng.uniform() < params.dark_error) dark = false;
        } else {
            if (params.bright_error > 0.0 && rng.uniform() < params.bright_error) dark = true;
        }
        if (dark) ++record.dark_counts;
    }
    return record;
}

double projection_noise(double p, int shots) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("projection_noise: p must be in [0,1]");
    if (shots < 1) throw std::invalid_argument("projection_noise: shots must be >= 1");
    return std::sqrt(p * (1.0 - p) / shots);
}

}  // namespace rydion
