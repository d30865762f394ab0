#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "rydion/inference.hpp"
#include "rydion/lineshape.hpp"

namespace rydion {

class CsvError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Spectrum CSV: '#'-prefixed header of "key = value" pairs recording every
/// model parameter, then "detuning_hz,value" rows.
void write_spectrum_csv(std::ostream& out, const Spectrum& spectrum,
                        const std::vector<std::pair<std::string, std::string>>& header);
void write_spectrum_csv_file(const std::string& path, const Spectrum& spectrum,
                             const std::vector<std::pair<std::string, std::string>>& header);
Spectrum read_spectrum_csv(std::istream& in);

/// Measured-spectrum CSV: metadata header, then
/// "detuning_hz,shots,dark_counts" (or frequency_hz for absolute scans).
void write_measured_csv(std::ostream& out, const MeasuredSpectrum& data);
void write_measured_csv_file(const std::string& path, const MeasuredSpectrum& data);
MeasuredSpectrum read_measured_csv(std::istream& in);
MeasuredSpectrum read_measured_csv_file(const std::string& path);

/// Lines file: one level energy (cm^-1) per line, '#' comments.
std::vector<double> read_lines_file(const std::string& path);

std::string format_double(double value);  // shortest round-trip decimal

}  // namespace rydion
