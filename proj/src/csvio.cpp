#include "rydion/csvio.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace rydion {

std::string format_double(double value) {
    char buf[40];
    if (value == std::floor(value) && std::abs(value) < 1e15) {
        std::snprintf(buf, sizeof buf, "%.0f", value);
        return buf;
    }
    // shortest representation that round-trips
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, value);
        if (std::strtod(buf, nullptr) == value) break;
    }
    return buf;
}

// ---------------------------------------------------------------------------
// Spectrum CSV
// ---------------------------------------------------------------------------

void write_spectrum_csv(std::ostream& out, const Spectrum& spectrum,
                        const std::vector<std::pair<std::string, std::string>>& header) {
    for (const auto& [key, value] : header) out << "# " << key << " = " << value << "\n";
    out << "detuning_hz,value\n";
    for (std::size_t i = 0; i < spectrum.detuning_hz.size(); ++i)
        out << format_double(spectrum.detuning_hz[i]) << "," << format_double(spectrum.value[i])
            << "\n";
}

void write_spectrum_csv_file(const std::string& path, const Spectrum& spectrum,
                             const std::vector<std::pair<std::string, std::string>>& header) {
    std::ofstream f(path);
    if (!f) throw CsvError("cannot open for writing: " + path);
    write_spectrum_csv(f, spectrum, header);
}

Spectrum read_spectrum_csv(std::istream& in) {
    Spectrum spec;
    std::string line;
    int lineno = 0;
    bool saw_header = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        if (!saw_header) {
            if (line.rfind("detuning_hz", 0) != 0)
                throw CsvError("spectrum CSV line " + std::to_string(lineno) +
                               ": expected header 'detuning_hz,value'");
            saw_header = true;
            continue;
        }
        double d, v;
        if (std::sscanf(line.c_str(), "%lf,%lf", &d, &v) != 2)
            throw CsvError("spectrum CSV line " + std::to_string(lineno) + ": bad row '" + line +
                           "'");
        spec.detuning_hz.push_back(d);
        spec.value.push_back(v);
    }
    return spec;
}

// ---------------------------------------------------------------------------
// Measured CSV
// ---------------------------------------------------------------------------

void write_measured_csv(std::ostream& out, const MeasuredSpectrum& data) {
    const auto& m = data.metadata;
    out << "# initial_state = " << m.initial_state << "\n";
    out << "# E_ion_V_per_m = " << format_double(m.e_ion_v_per_m) << "\n";
    out << "# omega_drive_hz = " << format_double(m.omega_drive_hz) << "\n";
    out << "# k_rad_per_m = " << format_double(m.k_rad_per_m) << "\n";
    out << "# x_mm_m = " << format_double(m.x_mm_m) << "\n";
    out << "# temperature_K = " << format_double(m.temperature_k) << "\n";
    out << "# B_T = " << format_double(m.b_t) << "\n";
    if (m.seed) out << "# seed = " << *m.seed << "\n";
    out << (data.absolute_frequency ? "frequency_hz" : "detuning_hz") << ",shots,dark_counts\n";
    for (const auto& p : data.points)
        out << format_double(p.x_hz) << "," << p.shots << "," << p.dark_counts << "\n";
}

void write_measured_csv_file(const std::string& path, const MeasuredSpectrum& data) {
    std::ofstream f(path);
    if (!f) throw CsvError("cannot open for writing: " + path);
    write_measured_csv(f, data);
}

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

void apply_metadata(SpectrumMetadata& m, const std::string& key, const std::string& value,
                    int lineno) {
    const auto num = [&](const char* name) {
        try {
            return std::stod(value);
        } catch (const std::exception&) {
            throw CsvError("measured CSV line " + std::to_string(lineno) + ": bad value for " +
                           name);
        }
    };
    if (key == "initial_state") m.initial_state = value;
    else if (key == "E_ion_V_per_m") m.e_ion_v_per_m = num("E_ion_V_per_m");
    else if (key == "omega_drive_hz") m.omega_drive_hz = num("omega_drive_hz");
    else if (key == "k_rad_per_m") m.k_rad_per_m = num("k_rad_per_m");
    else if (key == "x_mm_m") m.x_mm_m = num("x_mm_m");
    else if (key == "temperature_K") m.temperature_k = num("temperature_K");
    else if (key == "B_T") m.b_t = num("B_T");
    else if (key == "seed") m.seed = std::stoull(value);
    // unknown metadata keys are preserved-neutral: tolerated on read
}

}  // namespace

MeasuredSpectrum read_measured_csv(std::istream& in) {
    MeasuredSpectrum data;
    std::string line;
    int lineno = 0;
    bool saw_header = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line[0] == '#') {
            const auto eq = line.find('=');
            if (eq != std::string::npos) {
                const std::string key = trim(line.substr(1, eq - 1));
                const std::string value = trim(line.substr(eq + 1));
                apply_metadata(data.metadata, key, value, lineno);
            }
            continue;
        }
        if (trim(line).empty()) continue;
        if (!saw_header) {
            if (line.rfind("detuning_hz", 0) == 0) data.absolute_frequency = false;
            else if (line.rfind("frequency_hz", 0) == 0) data.absolute_frequency = true;
            else
                throw CsvError("measured CSV line " + std::to_string(lineno) +
                               ": expected header 'detuning_hz,shots,dark_counts' or "
                               "'frequency_hz,shots,dark_counts'");
            saw_header = true;
            continue;
        }
        double x;
        int shots, dark;
        if (std::sscanf(line.c_str(), "%lf,%d,%d", &x, &shots, &dark) != 3)
            throw CsvError("measured CSV line " + std::to_string(lineno) + ": bad row '" + line +
                           "'");
        if (shots <= 0)
            throw CsvError("measured CSV line " + std::to_string(lineno) + ": shots must be > 0");
        if (dark < 0 || dark > shots)
            throw CsvError("measured CSV line " + std::to_string(lineno) +
                           ": dark_counts must be in [0, shots]");
        data.points.push_back({x, shots, dark});
    }
    if (data.points.empty()) throw CsvError("measured CSV: no data rows");
    return data;
}

MeasuredSpectrum read_measured_csv_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw CsvError("cannot open: " + path);
    return read_measured_csv(f);
}

std::vector<double> read_lines_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw CsvError("cannot open: " + path);
    std::vector<double> lines;
    std::string line;
    int lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string body = trim(line);
        if (body.empty()) continue;
        try {
            lines.push_back(std::stod(body));
        } catch (const std::exception&) {
            throw CsvError("lines file " + path + " line " + std::to_string(lineno) +
                           ": expected a level energy in cm^-1");
        }
    }
    if (lines.empty()) throw CsvError("lines file " + path + ": no level energies");
    return lines;
}

}  // namespace rydion
