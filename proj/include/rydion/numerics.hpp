#pragma once

#include <cmath>
#include <cstdint>
#include <functional>

namespace rydion {

/// Integer-order Bessel J_n, negative orders via J_{-n} = (-1)^n J_n.
double bessel_jn(int n, double x);

/// Adaptive Gauss-Kronrod (G7,K15) quadrature of f on [a,b].
/// Subdivides until the local error estimate satisfies
/// err < max(abs_tol, rel_tol*|integral|) distributed over subintervals.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-10, double abs_tol = 0.0, int max_depth = 48);

/// splitmix64: cheap counter-based PRNG stage, used to derive per-shot and
/// per-repetition streams from one master seed.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

/// xoshiro256** seeded via splitmix64; deterministic across platforms.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& w : s_) w = splitmix64(sm);
    }
    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }
    /// Uniform double in [0,1).
    double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }
    /// Standard normal (Box-Muller, one value per call pair cached).
    double normal() {
        if (have_cache_) {
            have_cache_ = false;
            return cache_;
        }
        double u1 = 0.0;
        while (u1 == 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        cache_ = r * std::sin(6.283185307179586477 * u2);
        have_cache_ = true;
        return r * std::cos(6.283185307179586477 * u2);
    }
    /// Binomial draw by explicit Bernoulli trials (n is small in this code base).
    int binomial(int n, double p) {
        int k = 0;
        for (int i = 0; i < n; ++i)
            if (uniform() < p) ++k;
        return k;
    }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::uint64_t s_[4]{};
    double cache_ = 0.0;
    bool have_cache_ = false;
};

}  // namespace rydion
