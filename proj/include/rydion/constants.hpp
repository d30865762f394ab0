#pragma once

#include <stdexcept>

namespace rydion {

/// Fundamental constants (SI unless noted). Defaults are CODATA 2018 plus the
/// 40Ca+ ion mass derived from the AME atomic mass minus one electron.
struct PhysicalConstants {
    double rydberg_constant_inf_cm = 109737.31568160;  // cm^-1
    double electron_ion_mass_ratio = 5.48579909065e-4 / (39.962590863 - 5.48579909065e-4);
    double speed_of_light = 299792458.0;               // m/s
    double bohr_radius = 5.29177210903e-11;            // m
    double boltzmann_constant = 1.380649e-23;          // J/K
    double elementary_charge = 1.602176634e-19;        // C
    double reduced_planck = 1.054571817e-34;           // J s
    double planck = 6.62607015e-34;                    // J s
    double vacuum_permittivity = 8.8541878128e-12;     // F/m
    double ion_mass_kg = (39.962590863 - 5.48579909065e-4) * 1.66053906660e-27;

    /// Mass-corrected Rydberg constant of the ion, cm^-1.
    double rydberg_reduced_cm() const {
        return rydberg_constant_inf_cm / (1.0 + electron_ion_mass_ratio);
    }

    void validate() const {
        const double vals[] = {rydberg_constant_inf_cm, electron_ion_mass_ratio,
                               speed_of_light,          bohr_radius,
                               boltzmann_constant,      elementary_charge,
                               reduced_planck,          planck,
                               vacuum_permittivity,     ion_mass_kg};
        for (double v : vals)
            if (!(v > 0.0))
                throw std::invalid_argument("PhysicalConstants: all constants must be positive");
        const double rel = (rydberg_constant_inf_cm - rydberg_reduced_cm()) / rydberg_constant_inf_cm;
        if (!(rel > 0.0 && rel < 2e-5))
            throw std::invalid_argument("PhysicalConstants: reduced-mass correction out of range");
    }
};

}  // namespace rydion
