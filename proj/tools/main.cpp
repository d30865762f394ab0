// rydion: quantum-defect structure, micromotion/Stark lineshapes, spectrum
// fitting and shelving-detection simulation for a single trapped Rydberg ion.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "rydion/config.hpp"
#include "rydion/csvio.hpp"
#include "rydion/detection.hpp"
#include "rydion/inference.hpp"
#include "rydion/lineshape.hpp"
#include "rydion/structure.hpp"

namespace {

using nlohmann::json;
using namespace rydion;

constexpr const char* kVersionText =
    "rydion 0.1.0\n"
    "constants: CODATA 2018 (R_inf = 109737.31568160 cm^-1), 40Ca+ ion mass from AME2020\n"
    "Ca II term energies: NIST Atomic Spectra Database (embedded, overridable via term_file)\n"
    "reference frequencies: S1/2-D5/2 411.042129776393 THz, D5/2-D3/2 1.819599021504 THz\n";

struct CommandState {
    std::optional<std::string> config_path;
    Config config;

    void load() {
        if (config_path) config = parse_config_file(*config_path);
    }
};

RydbergState parse_state_arg(int n, const std::string& l_label) {
    if (l_label.size() != 1)
        throw std::invalid_argument("orbital label must be a single letter (S,P,D,F,G)");
    return RydbergState{n, orbital_from_label(l_label[0])};
}

std::vector<std::pair<std::string, std::string>> model_header(const Config& cfg,
                                                              const TrapLineModel& model,
                                                              const FrequencyGrid& grid) {
    std::vector<std::pair<std::string, std::string>> header;
    header.emplace_back("generator", "rydion 0.1.0");
    header.emplace_back("omega0_hz", format_double(model.omega0_hz));
    header.emplace_back("alpha_MHz_per_Vcm2", format_double(model.alpha_mhz_per_vcm2));
    header.emplace_back("omega_drive_hz", format_double(model.drive.drive_frequency_hz));
    header.emplace_back("E_ion_V_per_m", format_double(model.drive.field_v_per_m));
    header.emplace_back("x_mm_m", format_double(model.drive.micromotion_amplitude_m));
    header.emplace_back("k_rad_per_m", format_double(model.drive.wavenumber_rad_per_m));
    header.emplace_back("temperature_K", format_double(model.broadening.temperature_k));
    header.emplace_back("B_T", format_double(model.broadening.b_field_t));
    header.emplace_back("zeeman_fwhm_hz_per_T",
                        format_double(model.broadening.zeeman_fwhm_hz_per_t));
    header.emplace_back("grid_min_hz", format_double(grid.min_hz));
    header.emplace_back("grid_max_hz", format_double(grid.max_hz));
    header.emplace_back("grid_step_hz", format_double(grid.step_hz));
    header.emplace_back("seed", std::to_string(cfg.master_seed()));
    return header;
}

// ---------------------------------------------------------------------------

int cmd_energy(const CommandState& state, int n, const std::string& l_label,
               std::optional<int> z, std::optional<double> delta,
               std::optional<double> limit_cm) {
    const PhysicalConstants consts = state.config.constants();
    QuantumDefectModel model = state.config.defect_model();
    if (z) model.core_charge = *z;
    RydbergState st = parse_state_arg(n, l_label);
    if (delta) {
        for (int l = 0; l < 5; ++l) model.defects[std::size_t(l)] = *delta;
        model.validate();
    }
    const double binding = binding_energy_cm(st, model, consts);
    const double nstar = st.n - model.defect(st.l);
    std::printf("state: %s  (n* = %.6f, Z = %d, delta = %g)\n", st.label().c_str(), nstar,
                model.core_charge, model.defect(st.l));
    std::printf("binding energy: %.4f cm^-1\n", binding);
    if (model.core_charge == 2) {
        const double limit =
            limit_cm ? *limit_cm
                     : (state.config.fixed_limit_cm ? *state.config.fixed_limit_cm
                                                    : default_term_table().limit_cm);
        const double level = limit + binding;
        const ReferenceFrequencies refs = state.config.references();
        const double c_cm = consts.speed_of_light * 100.0;
        const double e_d52 = refs.s_to_d52_hz / c_cm;
        const double e_d32 = e_d52 - refs.fine_structure_hz / c_cm;
        std::printf("series limit: %.4f cm^-1%s\n", limit,
                    limit_cm || state.config.fixed_limit_cm ? " (override)" : " (term table)");
        std::printf("level energy: %.4f cm^-1 above 4s S1/2\n", level);
        std::printf("wavelength from D3/2: %.6f nm\n", 1e7 / (level - e_d32));
        std::printf("wavelength from D5/2: %.6f nm\n", 1e7 / (level - e_d52));
    }
    return 0;
}

int cmd_synth(const CommandState& state, const std::string& out_path) {
    const TrapLineModel model = state.config.line_model();
    const FrequencyGrid grid = state.config.grid();
    const Spectrum spec = synthesize_lineshape(model, grid);
    write_spectrum_csv_file(out_path, spec, model_header(state.config, model, grid));
    std::printf("wrote %zu points to %s\n", spec.detuning_hz.size(), out_path.c_str());
    return 0;
}

std::vector<FitParam> parse_free_list(const std::string& free_list) {
    std::vector<FitParam> free;
    std::stringstream ss(free_list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item == "omega0") free.push_back(FitParam::omega0);
        else if (item == "alpha") free.push_back(FitParam::alpha);
        else if (item == "amplitude") free.push_back(FitParam::amplitude);
        else if (item == "baseline") free.push_back(FitParam::baseline);
        else if (item == "e_ion") free.push_back(FitParam::e_ion);
        else if (item == "beta_mm") free.push_back(FitParam::beta_mm);
        else if (item == "beta_alpha") free.push_back(FitParam::beta_alpha);
        else
            throw std::invalid_argument("unknown fit parameter '" + item +
                                        "' (omega0, alpha, amplitude, baseline, e_ion, beta_mm, "
                                        "beta_alpha)");
    }
    if (free.empty()) throw std::invalid_argument("empty --free list");
    return free;
}

int cmd_fit(const CommandState& state, const std::string& data_path, const std::string& free_list,
            const std::string& json_path) {
    const MeasuredSpectrum data = read_measured_csv_file(data_path);
    data.validate();

    TrapLineModel base;
    base.drive = data.drive();
    base.broadening = data.broadening();
    base.broadening.ion_mass_kg = state.config.constants().ion_mass_kg;
    if (state.config.zeeman_fwhm_hz_per_t)
        base.broadening.zeeman_fwhm_hz_per_t = *state.config.zeeman_fwhm_hz_per_t;
    if (state.config.omega_drive_hz)
        base.drive.drive_frequency_hz = *state.config.omega_drive_hz;
    if (state.config.e_ion_v_per_m) base.drive.field_v_per_m = *state.config.e_ion_v_per_m;
    if (state.config.k_rad_per_m) base.drive.wavenumber_rad_per_m = *state.config.k_rad_per_m;
    if (state.config.x_mm_m) base.drive.micromotion_amplitude_m = *state.config.x_mm_m;
    base.alpha_mhz_per_vcm2 = state.config.alpha_mhz_per_vcm2.value_or(0.0);
    base.omega0_hz = state.config.omega0_hz.value_or(0.0);

    FitOptions options;
    if (!free_list.empty()) options.free = parse_free_list(free_list);

    const FitResult fit = fit_lineshape(data, base, options);

    std::printf("fit: %s, %d iterations, chi^2/dof = %.3f (%.2f / %d)\n",
                fit.converged ? "converged" : "NOT CONVERGED", fit.iterations,
                fit.chi_square / std::max(fit.degrees_of_freedom, 1), fit.chi_square,
                fit.degrees_of_freedom);
    for (std::size_t i = 0; i < fit.parameters.size(); ++i)
        std::printf("  %-20s = %.8g +- %.3g\n", fit_param_name(fit.parameters[i]), fit.values[i],
                    fit.errors[i]);

    if (!json_path.empty()) {
        json doc;
        doc["converged"] = fit.converged;
        doc["iterations"] = fit.iterations;
        doc["chi_square"] = fit.chi_square;
        doc["degrees_of_freedom"] = fit.degrees_of_freedom;
        json params = json::object();
        const int k = int(fit.parameters.size());
        for (int i = 0; i < k; ++i)
            params[fit_param_name(fit.parameters[std::size_t(i)])] = {
                {"value", fit.values[std::size_t(i)]}, {"error", fit.errors[std::size_t(i)]}};
        doc["parameters"] = params;
        doc["covariance"] = json::array();
        for (int a = 0; a < k; ++a) {
            json row = json::array();
            for (int b = 0; b < k; ++b) row.push_back(fit.covariance[std::size_t(a * k + b)]);
            doc["covariance"].push_back(row);
        }
        doc["model"] = {{"omega0_hz", fit.model.omega0_hz},
                        {"alpha_MHz_per_Vcm2", fit.model.alpha_mhz_per_vcm2},
                        {"E_ion_V_per_m", fit.model.drive.field_v_per_m},
                        {"omega_drive_hz", fit.model.drive.drive_frequency_hz},
                        {"amplitude", fit.amplitude},
                        {"baseline", fit.baseline}};
        std::ofstream out(json_path);
        if (!out) throw CsvError("cannot open for writing: " + json_path);
        out << doc.dump(2) << "\n";
    }
    return fit.converged ? 0 : 1;
}

int cmd_identify(const CommandState& state, const std::string& lines_path, int z,
                 std::optional<int> n_min, std::optional<int> n_max,
                 std::optional<double> delta_min, std::optional<double> delta_max,
                 std::optional<double> threshold, std::optional<double> fixed_limit,
                 std::optional<double> fixed_delta) {
    const std::vector<double> lines = read_lines_file(lines_path);
    IdentifyOptions options;
    const Config& cfg = state.config;
    options.delta_min = delta_min.value_or(cfg.delta_min.value_or(options.delta_min));
    options.delta_max = delta_max.value_or(cfg.delta_max.value_or(options.delta_max));
    options.residual_threshold_cm =
        threshold.value_or(cfg.residual_threshold_cm.value_or(options.residual_threshold_cm));
    if (fixed_limit) options.fixed_limit_cm = fixed_limit;
    else if (cfg.fixed_limit_cm) options.fixed_limit_cm = cfg.fixed_limit_cm;
    if (fixed_delta) options.fixed_delta = fixed_delta;
    const int lo = n_min.value_or(cfg.n_min.value_or(30));
    const int hi = n_max.value_or(cfg.n_max.value_or(80));

    try {
        const SeriesAssignment fit =
            identify_series(lines, z, lo, hi, options, cfg.constants());
        std::printf("series: delta = %.4f, limit = %.4f cm^-1\n", fit.delta, fit.limit_cm);
        for (std::size_t i = 0; i < lines.size(); ++i)
            std::printf("  %12.4f cm^-1  ->  n = %2d   residual %+.4f cm^-1\n", lines[i],
                        fit.n[i], fit.residuals_cm[i]);
        std::printf("residual norm %.4f cm^-1, max |residual| %.4f cm^-1\n",
                    fit.residual_norm_cm, fit.max_abs_residual_cm);
        return 0;
    } catch (const UnidentifiedSeriesError& err) {
        std::printf("unidentified series: %s\n", err.what());
        for (const auto& cand : err.best) {
            std::printf("  candidate delta = %.4f, limit = %.4f, max |residual| = %.4f cm^-1, n =",
                        cand.delta, cand.limit_cm, cand.max_abs_residual_cm);
            for (int n : cand.n) std::printf(" %d", n);
            std::printf("\n");
        }
        return 1;
    }
}

int cmd_polarizability(const CommandState& state, int n, const std::string& l_label,
                       std::optional<int> n_lo, std::optional<int> n_hi) {
    const PhysicalConstants consts = state.config.constants();
    const QuantumDefectModel model = state.config.defect_model();
    const RydbergState st = parse_state_arg(n, l_label);
    const int lo = n_lo.value_or(n - 11);
    const int hi = n_hi.value_or(n + 9);
    const PolarizabilityResult result = polarizability(st, model, lo, hi, consts);
    std::printf("alpha(%s, m_L = 0) over n' in [%d, %d]:\n", st.label().c_str(), lo, hi);
    std::printf("  alpha   = %.6g MHz/(V/cm)^2\n", result.alpha_mhz_per_vcm2);
    std::printf("  alpha/2 = %.6g MHz/(V/cm)^2   (convention dE = -(alpha/2) E^2)\n",
                result.alpha_mhz_per_vcm2 / 2.0);
    if (result.range_warning) std::printf("  warning: %s\n", result.message.c_str());
    return 0;
}

int cmd_lifetime(const CommandState& state, int n, const std::string& l_label,
                 const std::string& channels, bool rydberg_defects) {
    const PhysicalConstants consts = state.config.constants();
    // low-lying lifetimes use the term-calibrated defects unless the
    // Rydberg-series model is requested explicitly
    QuantumDefectModel model;
    if (state.config.term_file || rydberg_defects) {
        model = state.config.defect_model();
    } else {
        model = calibrate_defects(default_term_table(), consts);
    }
    const RydbergState st = parse_state_arg(n, l_label);

    std::vector<RydbergState> lower;
    std::stringstream ss(channels);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.size() < 2) throw std::invalid_argument("bad channel '" + item + "'");
        lower.push_back(parse_state_arg(std::stoi(item.substr(0, item.size() - 1)),
                                        item.substr(item.size() - 1)));
    }
    const double tau = lifetime_s(st, model, lower, consts);
    std::printf("lifetime(%s) with channels %s: %.6g s (%.4g ns)\n", st.label().c_str(),
                channels.c_str(), tau, tau * 1e9);
    for (const auto& low : lower) {
        const double freq = (binding_energy_cm(st, model, consts) -
                             binding_energy_cm(low, model, consts)) *
                            consts.speed_of_light * 100.0;
        std::printf("  A(%s -> %s) = %.6g 1/s  (lambda = %.2f nm)\n", st.label().c_str(),
                    low.label().c_str(), einstein_a(st, low, model, freq, consts),
                    consts.speed_of_light / freq * 1e9);
    }
    return 0;
}

int cmd_rabi(const CommandState& state, double power_w, double waist_m,
             std::optional<double> dipole_cm, const std::string& upper, const std::string& lower) {
    const PhysicalConstants consts = state.config.constants();
    double dipole = 0.0;
    if (dipole_cm) {
        dipole = *dipole_cm;
    } else {
        if (upper.empty() || lower.empty())
            throw std::invalid_argument("need either --dipole-cm or --upper and --lower states");
        const QuantumDefectModel model = state.config.defect_model();
        const auto parse = [](const std::string& s) {
            return parse_state_arg(std::stoi(s.substr(0, s.size() - 1)), s.substr(s.size() - 1));
        };
        dipole = transition_dipole_cm(parse(upper), parse(lower), model, consts);
        std::printf("line-strength dipole %s <-> %s: %.6g C m (%.6g e a0)\n", upper.c_str(),
                    lower.c_str(), dipole,
                    dipole / (consts.elementary_charge * consts.bohr_radius));
    }
    const double e_peak = gaussian_beam_peak_field(power_w, waist_m, consts);
    const double omega = rabi_frequency(power_w, waist_m, dipole, consts);
    std::printf("peak field: %.6g V/m\n", e_peak);
    std::printf("Rabi frequency: %.6g rad/s = 2pi x %.6g kHz\n", omega,
                omega / (2.0 * 3.14159265358979323846) / 1e3);
    return 0;
}

int cmd_simulate_detect(const CommandState& state, double p_exc, int shots,
                        std::optional<std::uint64_t> seed_arg, const std::string& out_path,
                        double detuning_hz) {
    const SequenceParams params = state.config.sequence_params();
    const std::uint64_t seed = seed_arg.value_or(state.config.master_seed());
    const ShotRecord record = simulate_sequence(p_exc, params, shots, seed);
    const double p_analytic = dark_probability(p_exc, params);
    std::printf("dark counts: %d / %d  (fraction %.4f)\n", record.dark_counts, record.shots,
                record.dark_fraction());
    std::printf("analytic dark probability: %.6f, projection noise at N=%d: %.6f\n", p_analytic,
                shots, projection_noise(p_analytic, shots));
    std::printf("seed: %llu\n", static_cast<unsigned long long>(seed));
    if (!out_path.empty()) {
        MeasuredSpectrum data;
        data.metadata.initial_state = state.config.initial_state.value_or("D3/2");
        data.metadata.e_ion_v_per_m = state.config.e_ion_v_per_m.value_or(0.0);
        data.metadata.omega_drive_hz = state.config.omega_drive_hz.value_or(0.0);
        data.metadata.k_rad_per_m = state.config.k_rad_per_m.value_or(0.0);
        data.metadata.x_mm_m = state.config.x_mm_m.value_or(0.0);
        data.metadata.temperature_k = state.config.temperature_k.value_or(0.005);
        data.metadata.b_t = state.config.b_t.value_or(0.45e-3);
        data.metadata.seed = seed;
        data.points.push_back({detuning_hz, record.shots, record.dark_counts});
        write_measured_csv_file(out_path, data);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Rydberg-ion spectroscopy toolkit: level energies, Stark/micromotion "
                 "lineshapes, spectrum fits, shelving detection"};
    app.set_version_flag("--version", kVersionText);
    app.require_subcommand(1);

    CommandState state;
    app.add_option("--config", state.config_path, "configuration file (key = value)");

    // energy
    auto* energy = app.add_subcommand("energy", "level energies and transition wavelengths");
    int energy_n = 0;
    std::string energy_l;
    std::optional<int> energy_z;
    std::optional<double> energy_delta, energy_limit;
    energy->add_option("--n", energy_n, "principal quantum number")->required();
    energy->add_option("--L", energy_l, "orbital angular momentum label (S,P,D,F,G)")->required();
    energy->add_option("--Z", energy_z, "core charge (default from model)");
    energy->add_option("--delta", energy_delta, "override all quantum defects with one value");
    energy->add_option("--limit-cm", energy_limit, "series limit override, cm^-1");

    // synth
    auto* synth = app.add_subcommand("synth", "synthesize a lineshape CSV from a config");
    std::string synth_out;
    synth->add_option("--out", synth_out, "output CSV path")->required();

    // fit
    auto* fit = app.add_subcommand("fit", "fit a measured spectrum CSV with the lineshape model");
    std::string fit_data, fit_free, fit_json;
    fit->add_option("--data", fit_data, "measured spectrum CSV")->required();
    fit->add_option("--free", fit_free,
                    "comma list of free parameters (default omega0,alpha,amplitude,baseline)");
    fit->add_option("--json", fit_json, "write the machine-readable fit report here");

    // identify
    auto* identify = app.add_subcommand("identify", "assign (n, delta, limit) to measured lines");
    std::string identify_lines;
    int identify_z = 2;
    std::optional<int> identify_nmin, identify_nmax;
    std::optional<double> identify_dmin, identify_dmax, identify_thresh, identify_fixed_limit,
        identify_fixed_delta;
    identify->add_option("--lines", identify_lines, "file with level energies in cm^-1")
        ->required();
    identify->add_option("--z", identify_z, "core charge (default 2)");
    identify->add_option("--n-min", identify_nmin, "lowest candidate n");
    identify->add_option("--n-max", identify_nmax, "highest candidate n");
    identify->add_option("--delta-min", identify_dmin, "defect window lower edge");
    identify->add_option("--delta-max", identify_dmax, "defect window upper edge");
    identify->add_option("--threshold", identify_thresh, "residual threshold, cm^-1");
    identify->add_option("--fixed-limit", identify_fixed_limit, "pin the series limit, cm^-1");
    identify->add_option("--fixed-delta", identify_fixed_delta,
                         "pin the quantum defect (hypothesis test)");

    // polarizability
    auto* polar = app.add_subcommand("polarizability", "second-order Stark polarizability");
    int polar_n = 0;
    std::string polar_l;
    std::optional<int> polar_lo, polar_hi;
    polar->add_option("--n", polar_n, "principal quantum number")->required();
    polar->add_option("--L", polar_l, "orbital label")->required();
    polar->add_option("--n-min", polar_lo, "coupling range lower edge (default n-11)");
    polar->add_option("--n-max", polar_hi, "coupling range upper edge (default n+9)");

    // lifetime
    auto* lifetime = app.add_subcommand("lifetime", "radiative lifetime over listed channels");
    int lifetime_n = 0;
    std::string lifetime_l, lifetime_channels;
    bool lifetime_rydberg = false;
    lifetime->add_option("--n", lifetime_n, "principal quantum number")->required();
    lifetime->add_option("--L", lifetime_l, "orbital label")->required();
    lifetime->add_option("--channels", lifetime_channels, "comma list of lower levels, e.g. 4S,3D")
        ->required();
    lifetime->add_flag("--rydberg-defects", lifetime_rydberg,
                       "use the Rydberg-series defect model instead of term-calibrated defects");

    // rabi
    auto* rabi = app.add_subcommand("rabi", "Rabi frequency for a Gaussian beam");
    double rabi_power = 0.0, rabi_waist = 0.0;
    std::optional<double> rabi_dipole;
    std::string rabi_upper, rabi_lower;
    rabi->add_option("--power-w", rabi_power, "beam power, W")->required();
    rabi->add_option("--waist-m", rabi_waist, "1/e^2 waist radius, m")->required();
    rabi->add_option("--dipole-cm", rabi_dipole, "transition dipole moment, C m");
    rabi->add_option("--upper", rabi_upper, "upper state, e.g. 52P");
    rabi->add_option("--lower", rabi_lower, "lower state, e.g. 3D");

    // simulate-detect
    auto* simulate = app.add_subcommand("simulate-detect", "Monte-Carlo shelving detection");
    double sim_pexc = 0.0, sim_detuning = 0.0;
    int sim_shots = 50;
    std::optional<std::uint64_t> sim_seed;
    std::string sim_out;
    simulate->add_option("--p-exc", sim_pexc, "Rydberg excitation probability")->required();
    simulate->add_option("--shots", sim_shots, "number of single-shot sequences");
    simulate->add_option("--seed", sim_seed, "random seed (default: config seed)");
    simulate->add_option("--out", sim_out, "measured-CSV output path");
    simulate->add_option("--detuning-hz", sim_detuning, "detuning recorded in the CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n\n" << app.help() << std::flush;
        return 2;
    }

    try {
        state.load();
        if (energy->parsed())
            return cmd_energy(state, energy_n, energy_l, energy_z, energy_delta, energy_limit);
        if (synth->parsed()) return cmd_synth(state, synth_out);
        if (fit->parsed()) return cmd_fit(state, fit_data, fit_free, fit_json);
        if (identify->parsed())
            return cmd_identify(state, identify_lines, identify_z, identify_nmin, identify_nmax,
                                identify_dmin, identify_dmax, identify_thresh,
                                identify_fixed_limit, identify_fixed_delta);
        if (polar->parsed()) return cmd_polarizability(state, polar_n, polar_l, polar_lo, polar_hi);
        if (lifetime->parsed())
            return cmd_lifetime(state, lifetime_n, lifetime_l, lifetime_channels, lifetime_rydberg);
        if (rabi->parsed())
            return cmd_rabi(state, rabi_power, rabi_waist, rabi_dipole, rabi_upper, rabi_lower);
        if (simulate->parsed())
            return cmd_simulate_detect(state, sim_pexc, sim_shots, sim_seed, sim_out, sim_detuning);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const CsvError& e) {
        std::cerr << "file error: " << e.what() << "\n";
        return 2;
    } catch (const DegenerateParametersError& e) {
        std::cerr << "fit setup error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
