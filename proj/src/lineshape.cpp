#include "rydion/lineshape.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "rydion/numerics.hpp"

namespace rydion {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr int kMaxSidebandIndex = 200;

// Orders with |J_n(beta)| above ~1e-16 tail; Bessel functions fall off
// super-exponentially once n > beta.
int bessel_order_cutoff(double beta) {
    const double b = std::abs(beta);
    return std::max(6, int(b + 14.0 + 5.0 * std::sqrt(b)));
}
}  // namespace

void TrapDrive::validate() const {
    if (!(drive_frequency_hz > 0.0))
        throw std::invalid_argument("TrapDrive: drive frequency must be > 0");
    if (field_v_per_m < 0.0) throw std::invalid_argument("TrapDrive: field must be >= 0");
    if (micromotion_amplitude_m < 0.0)
        throw std::invalid_argument("TrapDrive: micromotion amplitude must be >= 0");
    if (wavenumber_rad_per_m < 0.0)
        throw std::invalid_argument("TrapDrive: wavenumber must be >= 0");
}

void BroadeningParams::validate() const {
    if (temperature_k < 0.0) throw std::invalid_argument("BroadeningParams: T must be >= 0");
    if (b_field_t < 0.0) throw std::invalid_argument("BroadeningParams: B must be >= 0");
    if (!(ion_mass_kg > 0.0)) throw std::invalid_argument("BroadeningParams: mass must be > 0");
    if (zeeman_fwhm_hz_per_t < 0.0)
        throw std::invalid_argument("BroadeningParams: Zeeman width must be >= 0");
}

ModulationIndices modulation_indices(double alpha_mhz_per_vcm2, const TrapDrive& drive) {
    drive.validate();
    // alpha in MHz/(V/cm)^2 equals 1e2 Hz/(V/m)^2
    const double alpha_hz = alpha_mhz_per_vcm2 * 1e2;
    const double e2 = drive.field_v_per_m * drive.field_v_per_m;
    ModulationIndices idx;
    idx.beta_mm = drive.wavenumber_rad_per_m * drive.micromotion_amplitude_m;
    idx.beta_alpha = alpha_hz * e2 / (8.0 * drive.drive_frequency_hz);
    idx.static_shift_hz = -alpha_hz * e2 / 4.0;
    return idx;
}

double SidebandSpectrum::total_power() const {
    double p = 0.0;
    for (const auto& c : components) p += std::norm(c.amplitude);
    return p;
}

SidebandSpectrum sideband_amplitudes(double beta_mm, double beta_alpha, double tail_tolerance) {
    if (!std::isfinite(beta_mm) || !std::isfinite(beta_alpha))
        throw std::invalid_argument("sideband_amplitudes: modulation indices must be finite");
    if (tail_tolerance <= 0.0) tail_tolerance = 1e-10;

    const int n_max = bessel_order_cutoff(beta_mm);
    const int m_max = bessel_order_cutoff(beta_alpha);
    std::vector<double> jn(std::size_t(n_max) + 1), jm(std::size_t(m_max) + 1);
    for (int n = 0; n <= n_max; ++n) jn[std::size_t(n)] = bessel_jn(n, beta_mm);
    for (int m = 0; m <= m_max; ++m) jm[std::size_t(m)] = bessel_jn(m, beta_alpha);
    const auto j_mm = [&](int n) { return n >= 0 ? jn[std::size_t(n)] : (n & 1 ? -jn[std::size_t(-n)] : jn[std::size_t(-n)]); };
    const auto j_al = [&](int m) { return m >= 0 ? jm[std::size_t(m)] : (m & 1 ? -jm[std::size_t(-m)] : jm[std::size_t(-m)]); };
    static const std::complex<double> i_pow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

    std::map<int, std::complex<double>> acc;
    for (int n = -n_max; n <= n_max; ++n) {
        const double a = j_mm(n);
        if (a == 0.0) continue;
        const std::complex<double> phase = i_pow[((n % 4) + 4) % 4];
        for (int m = -m_max; m <= m_max; ++m) {
            const int q = n + 2 * m;
            if (std::abs(q) > kMaxSidebandIndex) continue;
            const double b = (m & 1 ? -j_al(m) : j_al(m));
            acc[q] += a * phase * b;
        }
    }

    // drop the weakest components until the discarded power reaches the
    // tail tolerance; keep at least the carrier
    std::vector<std::pair<double, int>> by_power;
    by_power.reserve(acc.size());
    for (const auto& [q, amp] : acc) by_power.emplace_back(std::norm(amp), q);
    std::sort(by_power.begin(), by_power.end());
    double discarded = 0.0;
    std::size_t first_kept = 0;
    for (std::size_t i = 0; i + 1 < by_power.size(); ++i) {
        if (discarded + by_power[i].first > tail_tolerance) break;
        discarded += by_power[i].first;
        first_kept = i + 1;
    }
    std::vector<bool> drop_mark;
    SidebandSpectrum result;
    for (std::size_t i = first_kept; i < by_power.size(); ++i) {
        const int q = by_power[i].second;
        result.components.push_back({q, double(q), acc[q]});
    }
    std::sort(result.components.begin(), result.components.end(),
              [](const SidebandComponent& a, const SidebandComponent& b) { return a.q < b.q; });
    return result;
}

SidebandSpectrum sideband_amplitudes(double alpha_mhz_per_vcm2, const TrapDrive& drive,
                                     double tail_tolerance) {
    const ModulationIndices idx = modulation_indices(alpha_mhz_per_vcm2, drive);
    SidebandSpectrum comb = sideband_amplitudes(idx.beta_mm, idx.beta_alpha, tail_tolerance);
    comb.carrier_shift_hz = idx.static_shift_hz;
    for (auto& c : comb.components) c.offset_hz = c.q * drive.drive_frequency_hz;
    return comb;
}

double doppler_sigma_hz(double temperature_k, double ion_mass_kg, double wavenumber_rad_per_m) {
    if (temperature_k < 0.0) throw std::invalid_argument("doppler_sigma: T must be >= 0");
    if (!(ion_mass_kg > 0.0)) throw std::invalid_argument("doppler_sigma: mass must be > 0");
    const double kb = PhysicalConstants{}.boltzmann_constant;
    return wavenumber_rad_per_m / (2.0 * kPi) * std::sqrt(kb * temperature_k / ion_mass_kg);
}

double GaussianKernel::operator()(double detuning_hz) const {
    if (sigma_hz <= 0.0) return detuning_hz == 0.0 ? 1.0 : 0.0;  // delta-like
    const double x = detuning_hz / sigma_hz;
    return std::exp(-0.5 * x * x) / (sigma_hz * std::sqrt(2.0 * kPi));
}

GaussianKernel broadening_kernel(const BroadeningParams& params, double wavenumber_rad_per_m) {
    params.validate();
    const double sd = doppler_sigma_hz(params.temperature_k, params.ion_mass_kg,
                                       wavenumber_rad_per_m);
    const double sz = params.zeeman_fwhm_hz() / 2.3548200450309493;
    GaussianKernel kernel;
    kernel.sigma_hz = std::hypot(sd, sz);
    if (!(kernel.sigma_hz >= sd))
        throw std::invalid_argument("broadening_kernel: total width below Doppler width");
    return kernel;
}

std::size_t FrequencyGrid::size() const {
    validate();
    return std::size_t((max_hz - min_hz) / step_hz + 1.5);
}

void FrequencyGrid::validate() const {
    if (!(step_hz > 0.0) || !(max_hz > min_hz))
        throw std::invalid_argument("FrequencyGrid: requires max > min and step > 0");
}

double spectral_density(const TrapLineModel& model, double detuning_hz, double tail_tolerance) {
    const SidebandSpectrum comb = sideband_amplitudes(model.alpha_mhz_per_vcm2, model.drive,
                                                      tail_tolerance);
    const GaussianKernel kernel = model.kernel();
    double sum = 0.0;
    for (const auto& c : comb.components) {
        const double w = std::norm(c.amplitude);
        sum += w * kernel(detuning_hz - comb.carrier_shift_hz - c.offset_hz);
    }
    return sum;
}

std::pair<double, double> required_span_hz(const TrapLineModel& model, double tail_tolerance) {
    const SidebandSpectrum comb = sideband_amplitudes(model.alpha_mhz_per_vcm2, model.drive,
                                                      tail_tolerance);
    const double sigma = model.kernel().sigma_hz;
    double lo = 0.0, hi = 0.0;
    for (const auto& c : comb.components) {
        lo = std::min(lo, comb.carrier_shift_hz + c.offset_hz);
        hi = std::max(hi, comb.carrier_shift_hz + c.offset_hz);
    }
    return {lo - 8.0 * sigma, hi + 8.0 * sigma};
}

Spectrum synthesize_lineshape(const TrapLineModel& model, const FrequencyGrid& grid,
                              double tail_tolerance) {
    grid.validate();
    const auto [lo, hi] = required_span_hz(model, tail_tolerance);
    if (grid.min_hz - model.omega0_hz > lo || grid.max_hz - model.omega0_hz < hi)
        throw std::invalid_argument(
            "synthesize_lineshape: grid too narrow, required detuning span ["
            + std::to_string(model.omega0_hz + lo) + ", " + std::to_string(model.omega0_hz + hi) +
            "] Hz");

    const SidebandSpectrum comb = sideband_amplitudes(model.alpha_mhz_per_vcm2, model.drive,
                                                      tail_tolerance);
    const GaussianKernel kernel = model.kernel();
    const auto density = [&](double delta) {
        double sum = 0.0;
        for (const auto& c : comb.components)
            sum += std::norm(c.amplitude) * kernel(delta - comb.carrier_shift_hz - c.offset_hz);
        return sum;
    };

    Spectrum spec;
    const std::size_t n = grid.size();
    spec.detuning_hz.resize(n);
    spec.value.resize(n);
    double peak = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        spec.detuning_hz[i] = grid.at(i);
        spec.value[i] = density(grid.at(i) - model.omega0_hz);
        peak = std::max(peak, spec.value[i]);
    }
    // normalize to the true peak, not just the best grid sample: refine
    // around the strongest comb line as well as the best grid point
    for (const auto& c : comb.components) {
        const double center = comb.carrier_shift_hz + c.offset_hz;
        for (double frac : {-0.25, 0.0, 0.25})
            peak = std::max(peak, density(center + frac * kernel.sigma_hz));
    }
    if (peak <= 0.0) throw std::runtime_error("synthesize_lineshape: empty spectrum");
    for (auto& v : spec.value) v /= peak;
    return spec;
}

}  // namespace rydion
