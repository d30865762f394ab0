#pragma once

#include <complex>
#include <vector>

#include "rydion/constants.hpp"

namespace rydion {

/// Trap-drive parameters seen by the ion. Frequencies are ordinary (Hz).
struct TrapDrive {
    double drive_frequency_hz = 0.0;      // Omega/2pi, no default in configs
    double field_v_per_m = 0.0;           // E_ion amplitude
    double micromotion_amplitude_m = 0.0; // x_mm along the laser
    double wavenumber_rad_per_m = 0.0;    // k projection on the micromotion

    void validate() const;
};

/// Default effective Zeeman width: Gaussian FWHM per tesla chosen so the
/// 0.45 mT field plus 5 mK Doppler reproduce the ~10 MHz combined width.
inline constexpr double kDefaultZeemanFwhmPerTesla = 2.8729e10;  // Hz/T

struct BroadeningParams {
    double temperature_k = 0.005;
    double b_field_t = 0.45e-3;
    double ion_mass_kg = PhysicalConstants{}.ion_mass_kg;
    double zeeman_fwhm_hz_per_t = kDefaultZeemanFwhmPerTesla;

    double zeeman_fwhm_hz() const { return zeeman_fwhm_hz_per_t * b_field_t; }
    void validate() const;
};

struct ModulationIndices {
    double beta_mm = 0.0;         // k x_mm
    double beta_alpha = 0.0;      // alpha E^2 / (8 Omega)
    double static_shift_hz = 0.0; // -alpha E^2 / 4
};

/// Modulation indices and static shift from the polarizability (MHz/(V/cm)^2,
/// convention dE = -(alpha/2)E^2) and the drive.
ModulationIndices modulation_indices(double alpha_mhz_per_vcm2, const TrapDrive& drive);

struct SidebandComponent {
    int q = 0;                  // offset index; frequency offset is q * Omega
    double offset_hz = 0.0;
    std::complex<double> amplitude;
};

/// Phase-modulation comb: micromotion sidebands at every multiple of Omega,
/// Stark sidebands at even multiples, combined coherently.
struct SidebandSpectrum {
    double carrier_shift_hz = 0.0;
    std::vector<SidebandComponent> components;

    double total_power() const;
};

/// A_q = sum_{n+2m=q} J_n(beta_mm) e^{i n pi/2} (-1)^m J_m(beta_alpha),
/// truncated once the discarded tail power is below tail_tolerance
/// (hard cap |q| <= 200). Offsets are filled with drive_frequency_hz = 0,
/// i.e. offset_hz = q, when no drive is supplied.
SidebandSpectrum sideband_amplitudes(double beta_mm, double beta_alpha,
                                     double tail_tolerance = 1e-10);
SidebandSpectrum sideband_amplitudes(double alpha_mhz_per_vcm2, const TrapDrive& drive,
                                     double tail_tolerance = 1e-10);

/// Gaussian Doppler width (standard deviation, Hz): (k/2pi) sqrt(kB T / m).
double doppler_sigma_hz(double temperature_k, double ion_mass_kg, double wavenumber_rad_per_m);

/// Unit-area Gaussian over detuning.
struct GaussianKernel {
    double sigma_hz = 0.0;

    double operator()(double detuning_hz) const;
    double fwhm_hz() const { return 2.3548200450309493 * sigma_hz; }
};

/// Combined thermal + Zeeman kernel; variances add.
GaussianKernel broadening_kernel(const BroadeningParams& params, double wavenumber_rad_per_m);

/// Complete line model: bare frequency, polarizability, drive, broadening.
struct TrapLineModel {
    double omega0_hz = 0.0;  // bare (zero-field) transition frequency offset
    double alpha_mhz_per_vcm2 = 0.0;
    TrapDrive drive;
    BroadeningParams broadening;

    GaussianKernel kernel() const { return broadening_kernel(broadening, drive.wavenumber_rad_per_m); }
};

struct FrequencyGrid {
    double min_hz = 0.0;
    double max_hz = 0.0;
    double step_hz = 0.0;

    std::size_t size() const;
    double at(std::size_t i) const { return min_hz + double(i) * step_hz; }
    void validate() const;
};

struct Spectrum {
    std::vector<double> detuning_hz;
    std::vector<double> value;  // peak-normalized
};

/// Un-normalized spectral response sum_q |A_q|^2 G(delta - shift - q Omega)
/// at a detuning relative to omega0.
double spectral_density(const TrapLineModel& model, double detuning_hz,
                        double tail_tolerance = 1e-10);

/// Required grid span [lo, hi] around omega0 for synthesize_lineshape.
std::pair<double, double> required_span_hz(const TrapLineModel& model,
                                           double tail_tolerance = 1e-10);

/// Peak-normalized spectrum on the grid (detunings relative to the bare
/// frequency). Throws if the grid does not cover the required span.
Spectrum synthesize_lineshape(const TrapLineModel& model, const FrequencyGrid& grid,
                              double tail_tolerance = 1e-10);

}  // namespace rydion
