#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rydion/constants.hpp"
#include "rydion/lineshape.hpp"

namespace rydion {

// ---------------------------------------------------------------------------
// Measured spectra
// ---------------------------------------------------------------------------

struct MeasuredPoint {
    double x_hz = 0.0;  // detuning or absolute frequency
    int shots = 0;
    int dark_counts = 0;

    double dark_fraction() const { return double(dark_counts) / shots; }
};

/// Metadata carried in the CSV header; key names match the file schema.
struct SpectrumMetadata {
    std::string initial_state = "D3/2";
    double e_ion_v_per_m = 0.0;
    double omega_drive_hz = 0.0;
    double k_rad_per_m = 0.0;
    double x_mm_m = 0.0;
    double temperature_k = 0.005;
    double b_t = 0.45e-3;
    std::optional<std::uint64_t> seed;
};

struct MeasuredSpectrum {
    std::vector<MeasuredPoint> points;
    SpectrumMetadata metadata;
    bool absolute_frequency = false;

    void validate() const;
    /// Projection-noise sigma of point i; proportions 0 and 1 are replaced by
    /// the adjusted (k+1/2)/(N+1) before the noise formula.
    double point_sigma(std::size_t i) const;
    TrapDrive drive() const;
    BroadeningParams broadening() const;
};

// ---------------------------------------------------------------------------
// Level energies and series identification
// ---------------------------------------------------------------------------

enum class InitialLevel { D32, D52 };

/// Reference frequencies used to place the D-state energies absolutely.
struct ReferenceFrequencies {
    double s_to_d52_hz = 411.042129776393e12;   // 4s S1/2 - 3d D5/2
    double fine_structure_hz = 1.819599021504e12;  // D5/2 - D3/2 splitting
};

/// Level energy above the ground state (cm^-1) from a vacuum wavelength and
/// the initial metastable level.
double level_energy_from_wavelength(double vacuum_wavelength_m, InitialLevel initial,
                                    const ReferenceFrequencies& refs = {},
                                    const PhysicalConstants& consts = {});

struct SeriesAssignment {
    std::vector<int> n;  // aligned with the input line order
    double delta = 0.0;
    double limit_cm = 0.0;
    std::vector<double> residuals_cm;  // model - measured
    double residual_norm_cm = 0.0;
    double max_abs_residual_cm = 0.0;
};

struct IdentifyOptions {
    double delta_min = 0.0;   // candidate defect window; the integer part of
    double delta_max = 0.5;   // delta is degenerate with n and must be pinned
    double residual_threshold_cm = 0.5;
    /// Plausibility window for the fitted series limit. Two lines always
    /// admit exact fits at several (n, gap) patterns; a bound on the limit is
    /// the physical prior that picks the real one. Defaults to the Ca II
    /// ionization limit +- 20 cm^-1, overridable for other systems.
    std::optional<double> limit_window_lo_cm = 95751.87 - 20.0;
    std::optional<double> limit_window_hi_cm = 95751.87 + 20.0;
    std::optional<double> fixed_limit_cm;  // hypothesis tests anchor the limit
    std::optional<double> fixed_delta;
};

class UnidentifiedSeriesError : public std::runtime_error {
  public:
    UnidentifiedSeriesError(const std::string& what, std::vector<SeriesAssignment> candidates)
        : std::runtime_error(what), best(std::move(candidates)) {}
    std::vector<SeriesAssignment> best;
};

/// Least-squares fit of (series limit, delta) over integer assignments with
/// the first (lowest) line's n scanned over [n_min, n_max]. Returns the
/// assignment with the smallest residual norm; ties go to the smallest
/// |delta|. Throws UnidentifiedSeriesError when nothing beats the threshold.
SeriesAssignment identify_series(const std::vector<double>& level_energies_cm, int core_charge,
                                 int n_min, int n_max, const IdentifyOptions& options = {},
                                 const PhysicalConstants& consts = {});

// ---------------------------------------------------------------------------
// Lineshape fitting
// ---------------------------------------------------------------------------

enum class FitParam { omega0, alpha, amplitude, baseline, e_ion, beta_mm, beta_alpha };

const char* fit_param_name(FitParam p);

struct FitOptions {
    std::vector<FitParam> free = {FitParam::omega0, FitParam::alpha, FitParam::amplitude,
                                  FitParam::baseline};
    std::optional<std::vector<double>> initial;  // aligned with `free`
    int max_iterations = 500;
    double rel_chi2_tol = 1e-8;
    /// Extra weighted-least-squares passes with projection-noise weights
    /// evaluated at the fitted model (removes the small-sample weight bias).
    int weight_refinements = 2;
    double tail_tolerance = 1e-10;
};

class DegenerateParametersError : public std::runtime_error {
  public:
    DegenerateParametersError(const std::string& what, FitParam a, FitParam b)
        : std::runtime_error(what), first(a), second(b) {}
    FitParam first, second;
};

struct FitResult {
    std::vector<FitParam> parameters;
    std::vector<double> values;
    std::vector<double> errors;
    std::vector<double> covariance;  // row-major k x k
    double chi_square = 0.0;
    int degrees_of_freedom = 0;
    bool converged = false;
    int iterations = 0;
    double amplitude = 0.0;
    double baseline = 0.0;
    TrapLineModel model;  // base model with fitted values substituted

    double value(FitParam p) const;
    double error(FitParam p) const;
};

/// Weighted least squares (damped Gauss-Newton) of the phase-modulation
/// lineshape against measured dark fractions. E_ion is held at the metadata
/// value unless listed in `free`.
FitResult fit_lineshape(const MeasuredSpectrum& data, const TrapLineModel& base_model,
                        const FitOptions& options = {});

/// Model prediction for one detuning (used by reports and tests).
double fit_model_value(const FitResult& fit, double x_hz, double tail_tolerance = 1e-10);

}  // namespace rydion
