#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rydion/constants.hpp"

namespace rydion {

class SelectionRuleError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Orbital angular momentum label <-> integer L. Labels beyond G are not used.
int orbital_from_label(char label);
char orbital_label(int l);

/// Per-L quantum defects for one Rydberg series (core charge Z).
struct QuantumDefectModel {
    int core_charge = 2;
    std::array<double, 5> defects{};  // index = L for S,P,D,F,G

    double defect(int l) const { return l < int(defects.size()) ? defects[std::size_t(l)] : 0.0; }
    void set_defect(int l, double value);
    void validate() const;
};

struct RydbergState {
    int n = 1;
    int l = 0;
    int m_l = 0;
    std::optional<double> j;  // fine-structure label only, not used in matrix elements

    void validate(const QuantumDefectModel& model) const;
    std::string label() const;  // e.g. "51F"
};

// ---------------------------------------------------------------------------
// Term-energy table and defect calibration
// ---------------------------------------------------------------------------

/// Plain-text table of Ca II term energies: lines "level  energy_cm^-1",
/// '#' starts a comment, level "LIMIT" is the ionization limit.
struct TermTable {
    struct Entry {
        int n;
        int l;
        double two_j;  // 2J, 0 when not given
        double energy_cm;
    };
    std::vector<Entry> entries;
    double limit_cm = 0.0;

    /// Statistical-weight (2J+1) mean energy of one nL term.
    double term_energy_cm(int n, int l) const;
};

TermTable parse_term_table(std::istream& in);
TermTable parse_term_table_file(const std::string& path);
const std::string& default_term_table_text();
const TermTable& default_term_table();

/// Defects for S, P, D solved from n* = sqrt(Z^2 R / E_binding) at the lowest
/// terms of the table; F and G keep the supplied Rydberg-series values.
QuantumDefectModel calibrate_defects(const TermTable& table, const PhysicalConstants& consts,
                                     double defect_f = 0.026, double defect_g = 0.004);

/// Shipped defaults: F and P from Rydberg-series theory, S and D calibrated
/// from the embedded term table.
QuantumDefectModel default_defect_model(const PhysicalConstants& consts = {});

// ---------------------------------------------------------------------------
// Energies and wavefunctions
// ---------------------------------------------------------------------------

/// Series binding energy -R Z^2/(n - delta_L)^2 in cm^-1 (negative = bound).
double binding_energy_cm(const RydbergState& state, const QuantumDefectModel& model,
                         const PhysicalConstants& consts = {});

/// Analytic quantum-defect radial orbital: hydrogenic form continued to
/// n* = n - delta and L* = L - delta + I, I the smallest non-negative integer
/// with L* > -1/2. Numerically normalized; reduces to hydrogen at delta = 0.
class RadialOrbital {
  public:
    RadialOrbital(const RydbergState& state, const QuantumDefectModel& model);

    double operator()(double r_bohr) const;
    double nstar() const { return nstar_; }
    double lstar() const { return lstar_; }
    int nodes() const { return degree_; }
    double inner_radius() const { return r_min_; }
    double outer_radius() const { return r_max_; }

  private:
    double unnormalized(double r_bohr) const;
    double nstar_ = 0.0;
    double lstar_ = 0.0;
    int degree_ = 0;
    int z_ = 1;
    double norm_ = 1.0;
    double r_min_ = 0.0;
    double r_max_ = 0.0;
};

struct RadialWavefunction {
    std::vector<double> grid_bohr;
    std::vector<double> values;
    RydbergState state;
};

/// Sampled, normalized radial wavefunction on a logarithmic grid that covers
/// the classically allowed region plus the decaying tail. The default grid is
/// dense enough that a trapezoid norm on the samples is 1 within 1e-6.
RadialWavefunction radial_wavefunction(const RydbergState& state, const QuantumDefectModel& model,
                                       std::size_t points = 12000);

/// <a| r |b> in Bohr radii; requires |L_a - L_b| = 1.
double radial_matrix_element(const RydbergState& a, const RydbergState& b,
                             const QuantumDefectModel& model, double rel_tol = 1e-8);

/// <L' m| cos(theta) |L m> for L' = L +- 1.
double angular_factor_z(int l, int l_prime, int m_l);

// ---------------------------------------------------------------------------
// Polarizability, decay rates, Rabi frequency
// ---------------------------------------------------------------------------

struct PolarizabilityResult {
    double alpha_mhz_per_vcm2 = 0.0;  // convention dE = -(alpha/2) E^2
    int n_min = 0;
    int n_max = 0;
    bool range_warning = false;  // coupling range excludes near-degenerate partners
    std::string message;
};

/// Second-order perturbation sum over L' = L +- 1 and n' in [n_min, n_max],
/// m_l fixed (default 0 states).
PolarizabilityResult polarizability(const RydbergState& state, const QuantumDefectModel& model,
                                    int n_min, int n_max, const PhysicalConstants& consts = {});

/// Spontaneous-emission rate upper -> lower (1/s) averaged over upper m_L,
/// line strength from the radial matrix element.
double einstein_a(const RydbergState& upper, const RydbergState& lower,
                  const QuantumDefectModel& model, double transition_frequency_hz,
                  const PhysicalConstants& consts = {});

/// 1 / sum of einstein_a over the listed decay channels.
double lifetime_s(const RydbergState& state, const QuantumDefectModel& model,
                  const std::vector<RydbergState>& lower_levels,
                  const PhysicalConstants& consts = {});

/// Line-strength (reduced) transition dipole e sqrt(max(L,L')) <r>, in C m.
double transition_dipole_cm(const RydbergState& a, const RydbergState& b,
                            const QuantumDefectModel& model, const PhysicalConstants& consts = {});

/// Peak field of a Gaussian beam of power P and 1/e^2 waist radius w, V/m.
double gaussian_beam_peak_field(double power_w, double waist_m,
                                const PhysicalConstants& consts = {});

/// Rabi frequency d E_peak / hbar in rad/s.
double rabi_frequency(double power_w, double waist_m, double dipole_cm,
                      const PhysicalConstants& consts = {});

}  // namespace rydion
