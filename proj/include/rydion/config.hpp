#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rydion/constants.hpp"
#include "rydion/detection.hpp"
#include "rydion/inference.hpp"
#include "rydion/lineshape.hpp"
#include "rydion/structure.hpp"

namespace rydion {

class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Plain-text "key = value" configuration. Every physical key carries a unit
/// suffix; unknown keys are rejected.
struct Config {
    // trap drive and line model
    std::optional<double> omega_drive_hz;  // no default anywhere
    std::optional<double> e_ion_v_per_m;
    std::optional<double> x_mm_m;
    std::optional<double> k_rad_per_m;
    std::optional<double> alpha_mhz_per_vcm2;
    std::optional<double> omega0_hz;

    // broadening
    std::optional<double> temperature_k;
    std::optional<double> b_t;
    std::optional<double> zeeman_fwhm_hz_per_t;

    // synthesis grid
    std::optional<double> grid_min_hz;
    std::optional<double> grid_max_hz;
    std::optional<double> grid_step_hz;

    // structure model
    std::optional<int> core_charge;
    std::optional<double> defect_s, defect_p, defect_d, defect_f, defect_g;
    std::optional<std::string> term_file;

    // detection sequence
    std::optional<double> p_ryd_to_d52;
    std::optional<double> p_ryd_to_s;
    std::optional<double> p_pump_s_to_d52;
    std::optional<bool> include_pumping;
    std::optional<double> dark_error, bright_error, background_dark;
    std::optional<std::string> branching_reading;  // "ratio" (default) or "absolute"
    std::optional<int> shots;

    // inference
    std::optional<std::string> initial_state;
    std::optional<double> residual_threshold_cm;
    std::optional<int> n_min, n_max;
    std::optional<double> delta_min, delta_max;
    std::optional<double> fixed_limit_cm;

    // constants overrides
    std::optional<double> rydberg_constant_inf_cm;
    std::optional<double> electron_ion_mass_ratio;
    std::optional<double> ion_mass_kg;
    std::optional<double> ref_s_to_d52_hz;
    std::optional<double> ref_fine_structure_hz;

    std::optional<std::uint64_t> seed;

    // ---- assembled views ----
    PhysicalConstants constants() const;
    QuantumDefectModel defect_model() const;
    TrapDrive trap_drive() const;        // throws ConfigError naming missing keys
    BroadeningParams broadening() const;
    TrapLineModel line_model() const;
    FrequencyGrid grid() const;
    SequenceParams sequence_params() const;
    ReferenceFrequencies references() const;
    std::uint64_t master_seed() const { return seed.value_or(0); }
};

Config parse_config(std::istream& in);
Config parse_config_file(const std::string& path);

/// Deterministic dump; parse(dump(c)) reproduces identical behavior.
std::string dump_config(const Config& config);

}  // namespace rydion
