#include "rydion/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace rydion {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& value) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(value, &pos);
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': bad numeric value '" + value + "'");
    }
    if (pos != value.size())
        throw ConfigError("config key '" + key + "': trailing characters in '" + value + "'");
    return v;
}

int parse_int(const std::string& key, const std::string& value) {
    const double v = parse_double(key, value);
    if (v != std::floor(v)) throw ConfigError("config key '" + key + "': expected an integer");
    return int(v);
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "1" || value == "true" || value == "on" || value == "yes") return true;
    if (value == "0" || value == "false" || value == "off" || value == "no") return false;
    throw ConfigError("config key '" + key + "': expected a boolean");
}

}  // namespace

Config parse_config(std::istream& in) {
    Config c;
    using Setter = std::function<void(Config&, const std::string&, const std::string&)>;
    static const std::map<std::string, Setter> keys = {
        {"omega_drive_hz", [](Config& c, const std::string& k, const std::string& v) { c.omega_drive_hz = parse_double(k, v); }},
        {"E_ion_V_per_m", [](Config& c, const std::string& k, const std::string& v) { c.e_ion_v_per_m = parse_double(k, v); }},
        {"x_mm_m", [](Config& c, const std::string& k, const std::string& v) { c.x_mm_m = parse_double(k, v); }},
        {"k_rad_per_m", [](Config& c, const std::string& k, const std::string& v) { c.k_rad_per_m = parse_double(k, v); }},
        {"alpha_MHz_per_Vcm2", [](Config& c, const std::string& k, const std::string& v) { c.alpha_mhz_per_vcm2 = parse_double(k, v); }},
        {"omega0_hz", [](Config& c, const std::string& k, const std::string& v) { c.omega0_hz = parse_double(k, v); }},
        {"temperature_K", [](Config& c, const std::string& k, const std::string& v) { c.temperature_k = parse_double(k, v); }},
        {"B_T", [](Config& c, const std::string& k, const std::string& v) { c.b_t = parse_double(k, v); }},
        {"zeeman_fwhm_hz_per_T", [](Config& c, const std::string& k, const std::string& v) { c.zeeman_fwhm_hz_per_t = parse_double(k, v); }},
        {"grid_min_hz", [](Config& c, const std::string& k, const std::string& v) { c.grid_min_hz = parse_double(k, v); }},
        {"grid_max_hz", [](Config& c, const std::string& k, const std::string& v) { c.grid_max_hz = parse_double(k, v); }},
        {"grid_step_hz", [](Config& c, const std::string& k, const std::string& v) { c.grid_step_hz = parse_double(k, v); }},
        {"core_charge", [](Config& c, const std::string& k, const std::string& v) { c.core_charge = parse_int(k, v); }},
        {"defect_S", [](Config& c, const std::string& k, const std::string& v) { c.defect_s = parse_double(k, v); }},
        {"defect_P", [](Config& c, const std::string& k, const std::string& v) { c.defect_p = parse_double(k, v); }},
        {"defect_D", [](Config& c, const std::string& k, const std::string& v) { c.defect_d = parse_double(k, v); }},
        {"defect_F", [](Config& c, const std::string& k, const std::string& v) { c.defect_f = parse_double(k, v); }},
        {"defect_G", [](Config& c, const std::string& k, const std::string& v) { c.defect_g = parse_double(k, v); }},
        {"term_file", [](Config& c, const std::string&, const std::string& v) { c.term_file = v; }},
        {"p_ryd_to_D52", [](Config& c, const std::string& k, const std::string& v) { c.p_ryd_to_d52 = parse_double(k, v); }},
        {"p_ryd_to_S", [](Config& c, const std::string& k, const std::string& v) { c.p_ryd_to_s = parse_double(k, v); }},
        {"p_pump_S_to_D52", [](Config& c, const std::string& k, const std::string& v) { c.p_pump_s_to_d52 = parse_double(k, v); }},
        {"include_pumping", [](Config& c, const std::string& k, const std::string& v) { c.include_pumping = parse_bool(k, v); }},
        {"dark_error", [](Config& c, const std::string& k, const std::string& v) { c.dark_error = parse_double(k, v); }},
        {"bright_error", [](Config& c, const std::string& k, const std::string& v) { c.bright_error = parse_double(k, v); }},
        {"background_dark", [](Config& c, const std::string& k, const std::string& v) { c.background_dark = parse_double(k, v); }},
        {"branching_reading", [](Config& c, const std::string& k, const std::string& v) {
             if (v != "ratio" && v != "absolute")
                 throw ConfigError("config key '" + k + "': expected 'ratio' or 'absolute'");
             c.branching_reading = v;
         }},
        {"shots", [](Config& c, const std::string& k, const std::string& v) { c.shots = parse_int(k, v); }},
        {"initial_state", [](Config& c, const std::string& k, const std::string& v) {
             if (v != "D3/2" && v != "D5/2")
                 throw ConfigError("config key '" + k + "': expected 'D3/2' or 'D5/2'");
             c.initial_state = v;
         }},
        {"residual_threshold_cm", [](Config& c, const std::string& k, const std::string& v) { c.residual_threshold_cm = parse_double(k, v); }},
        {"n_min", [](Config& c, const std::string& k, const std::string& v) { c.n_min = parse_int(k, v); }},
        {"n_max", [](Config& c, const std::string& k, const std::string& v) { c.n_max = parse_int(k, v); }},
        {"delta_min", [](Config& c, const std::string& k, const std::string& v) { c.delta_min = parse_double(k, v); }},
        {"delta_max", [](Config& c, const std::string& k, const std::string& v) { c.delta_max = parse_double(k, v); }},
        {"fixed_limit_cm", [](Config& c, const std::string& k, const std::string& v) { c.fixed_limit_cm = parse_double(k, v); }},
        {"rydberg_constant_inf_cm", [](Config& c, const std::string& k, const std::string& v) { c.rydberg_constant_inf_cm = parse_double(k, v); }},
        {"electron_ion_mass_ratio", [](Config& c, const std::string& k, const std::string& v) { c.electron_ion_mass_ratio = parse_double(k, v); }},
        {"ion_mass_kg", [](Config& c, const std::string& k, const std::string& v) { c.ion_mass_kg = parse_double(k, v); }},
        {"ref_S_to_D52_hz", [](Config& c, const std::string& k, const std::string& v) { c.ref_s_to_d52_hz = parse_double(k, v); }},
        {"ref_fine_structure_hz", [](Config& c, const std::string& k, const std::string& v) { c.ref_fine_structure_hz = parse_double(k, v); }},
        {"seed", [](Config& c, const std::string& k, const std::string& v) {
             try {
                 c.seed = std::stoull(v);
             } catch (const std::exception&) {
                 throw ConfigError("config key '" + k + "': bad seed value");
             }
         }},
    };

    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string body = trim(line);
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected 'key = value'");
        const std::string key = trim(body.substr(0, eq));
        const std::string value = trim(body.substr(eq + 1));
        const auto it = keys.find(key);
        if (it == keys.end())
            throw ConfigError("config line " + std::to_string(lineno) + ": unknown key '" + key +
                              "'");
        try {
            it->second(c, key, value);
        } catch (const ConfigError& err) {
            throw ConfigError("config line " + std::to_string(lineno) + ": " + err.what());
        }
    }
    return c;
}

Config parse_config_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file: " + path);
    return parse_config(f);
}

std::string dump_config(const Config& c) {
    std::ostringstream out;
    out.precision(17);
    const auto put = [&out](const char* key, const auto& opt) {
        if (opt) out << key << " = " << *opt << "\n";
    };
    const auto put_bool = [&out](const char* key, const std::optional<bool>& opt) {
        if (opt) out << key << " = " << (*opt ? "true" : "false") << "\n";
    };
    put("omega_drive_hz", c.omega_drive_hz);
    put("E_ion_V_per_m", c.e_ion_v_per_m);
    put("x_mm_m", c.x_mm_m);
    put("k_rad_per_m", c.k_rad_per_m);
    put("alpha_MHz_per_Vcm2", c.alpha_mhz_per_vcm2);
    put("omega0_hz", c.omega0_hz);
    put("temperature_K", c.temperature_k);
    put("B_T", c.b_t);
    put("zeeman_fwhm_hz_per_T", c.zeeman_fwhm_hz_per_t);
    put("grid_min_hz", c.grid_min_hz);
    put("grid_max_hz", c.grid_max_hz);
    put("grid_step_hz", c.grid_step_hz);
    put("core_charge", c.core_charge);
    put("defect_S", c.defect_s);
    put("defect_P", c.defect_p);
    put("defect_D", c.defect_d);
    put("defect_F", c.defect_f);
    put("defect_G", c.defect_g);
    put("term_file", c.term_file);
    put("p_ryd_to_D52", c.p_ryd_to_d52);
    put("p_ryd_to_S", c.p_ryd_to_s);
    put("p_pump_S_to_D52", c.p_pump_s_to_d52);
    put_bool("include_pumping", c.include_pumping);
    put("dark_error", c.dark_error);
    put("bright_error", c.bright_error);
    put("background_dark", c.background_dark);
    put("branching_reading", c.branching_reading);
    put("shots", c.shots);
    put("initial_state", c.initial_state);
    put("residual_threshold_cm", c.residual_threshold_cm);
    put("n_min", c.n_min);
    put("n_max", c.n_max);
    put("delta_min", c.delta_min);
    put("delta_max", c.delta_max);
    put("fixed_limit_cm", c.fixed_limit_cm);
    put("rydberg_constant_inf_cm", c.rydberg_constant_inf_cm);
    put("electron_ion_mass_ratio", c.electron_ion_mass_ratio);
    put("ion_mass_kg", c.ion_mass_kg);
    put("ref_S_to_D52_hz", c.ref_s_to_d52_hz);
    put("ref_fine_structure_hz", c.ref_fine_structure_hz);
    put("seed", c.seed);
    return out.str();
}

PhysicalConstants Config::constants() const {
    PhysicalConstants consts;
    if (rydberg_constant_inf_cm) consts.rydberg_constant_inf_cm = *rydberg_constant_inf_cm;
    if (electron_ion_mass_ratio) consts.electron_ion_mass_ratio = *electron_ion_mass_ratio;
    if (ion_mass_kg) consts.ion_mass_kg = *ion_mass_kg;
    consts.validate();
    return consts;
}

QuantumDefectModel Config::defect_model() const {
    const PhysicalConstants consts = constants();
    QuantumDefectModel model =
        term_file ? calibrate_defects(parse_term_table_file(*term_file), consts,
                                      defect_f.value_or(0.026), defect_g.value_or(0.004))
                  : default_defect_model(consts);
    if (!term_file && defect_f) model.set_defect(3, *defect_f);
    if (!term_file && defect_g) model.set_defect(4, *defect_g);
    if (defect_s) model.set_defect(0, *defect_s);
    if (defect_p) model.set_defect(1, *defect_p);
    if (defect_d) model.set_defect(2, *defect_d);
    if (core_charge) model.core_charge = *core_charge;
    model.validate();
    return model;
}

TrapDrive Config::trap_drive() const {
    if (!omega_drive_hz) throw ConfigError("missing required config key 'omega_drive_hz'");
    TrapDrive drive;
    drive.drive_frequency_hz = *omega_drive_hz;
    drive.field_v_per_m = e_ion_v_per_m.value_or(0.0);
    drive.micromotion_amplitude_m = x_mm_m.value_or(0.0);
    drive.wavenumber_rad_per_m = k_rad_per_m.value_or(0.0);
    drive.validate();
    return drive;
}

BroadeningParams Config::broadening() const {
    BroadeningParams b;
    b.temperature_k = temperature_k.value_or(0.005);
    b.b_field_t = b_t.value_or(0.45e-3);
    b.ion_mass_kg = constants().ion_mass_kg;
    if (zeeman_fwhm_hz_per_t) b.zeeman_fwhm_hz_per_t = *zeeman_fwhm_hz_per_t;
    b.validate();
    return b;
}

TrapLineModel Config::line_model() const {
    TrapLineModel model;
    model.omega0_hz = omega0_hz.value_or(0.0);
    model.alpha_mhz_per_vcm2 = alpha_mhz_per_vcm2.value_or(0.0);
    model.drive = trap_drive();
    model.broadening = broadening();
    return model;
}

FrequencyGrid Config::grid() const {
    if (!grid_min_hz) throw ConfigError("missing required config key 'grid_min_hz'");
    if (!grid_max_hz) throw ConfigError("missing required config key 'grid_max_hz'");
    if (!grid_step_hz) throw ConfigError("missing required config key 'grid_step_hz'");
    FrequencyGrid g{*grid_min_hz, *grid_max_hz, *grid_step_hz};
    g.validate();
    return g;
}

SequenceParams Config::sequence_params() const {
    SequenceParams s;
    if (p_ryd_to_d52) {
        s.p_ryd_to_d52 = *p_ryd_to_d52;
    } else if (branching_reading && *branching_reading == "absolute") {
        s.p_ryd_to_d52 = 0.07;
    }
    if (p_ryd_to_s) s.p_ryd_to_s = *p_ryd_to_s;
    if (p_pump_s_to_d52) s.p_pump_s_to_d52 = *p_pump_s_to_d52;
    if (include_pumping) s.include_pumping = *include_pumping;
    if (dark_error) s.dark_error = *dark_error;
    if (bright_error) s.bright_error = *bright_error;
    if (background_dark) s.background_dark = *background_dark;
    s.validate();
    return s;
}

ReferenceFrequencies Config::references() const {
    ReferenceFrequencies refs;
    if (ref_s_to_d52_hz) refs.s_to_d52_hz = *ref_s_to_d52_hz;
    if (ref_fine_structure_hz) refs.fine_structure_hz = *ref_fine_structure_hz;
    return refs;
}

}  // namespace rydion
