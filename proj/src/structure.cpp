#include "rydion/structure.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "rydion/numerics.hpp"

namespace rydion {

namespace {
constexpr char kOrbitalLabels[] = "SPDFG";
}

int orbital_from_label(char label) {
    const char u = char(std::toupper(static_cast<unsigned char>(label)));
    for (int l = 0; l < 5; ++l)
        if (kOrbitalLabels[l] == u) return l;
    throw std::invalid_argument(std::string("unknown orbital label '") + label +
                                "' (expected one of S,P,D,F,G)");
}

char orbital_label(int l) {
    if (l < 0) throw std::invalid_argument("negative L");
    return l < 5 ? kOrbitalLabels[l] : char('H' + (l - 5));
}

void QuantumDefectModel::set_defect(int l, double value) {
    if (l < 0 || l >= int(defects.size())) throw std::invalid_argument("set_defect: L out of range");
    defects[std::size_t(l)] = value;
}

void QuantumDefectModel::validate() const {
    if (core_charge < 1) throw std::invalid_argument("QuantumDefectModel: core charge must be >= 1");
    if (defects.back() < 0.0) throw std::invalid_argument("QuantumDefectModel: defect(G) must be >= 0");
    for (std::size_t l = 1; l < defects.size(); ++l)
        if (defects[l] > defects[l - 1] + 1e-12)
            throw std::invalid_argument("QuantumDefectModel: defects must be non-increasing in L");
}

void RydbergState::validate(const QuantumDefectModel& model) const {
    if (l < 0) throw std::invalid_argument("RydbergState: L must be >= 0");
    if (n < l + 1) throw std::invalid_argument("RydbergState: requires n >= L + 1");
    if (std::abs(m_l) > l) throw std::invalid_argument("RydbergState: requires |m_L| <= L");
    if (!(n - model.defect(l) > 0.0))
        throw std::invalid_argument("RydbergState: effective quantum number n - delta(L) must be > 0");
}

std::string RydbergState::label() const {
    return std::to_string(n) + orbital_label(l);
}

// ---------------------------------------------------------------------------
// Term table
// ---------------------------------------------------------------------------

namespace {

// NIST ASD Ca II term energies (cm^-1 above the 4s 2S1/2 ground state).
const char kDefaultTermText[] =
    "# Ca II term energies, cm^-1 above 4s 2S1/2 (NIST Atomic Spectra Database)\n"
    "# level   energy_cm^-1\n"
    "4S1/2     0.00\n"
    "3D3/2     13650.19\n"
    "3D5/2     13710.88\n"
    "4P1/2     25191.51\n"
    "4P3/2     25414.40\n"
    "LIMIT     95751.87\n";

TermTable::Entry parse_level(const std::string& label, double energy) {
    // label like 4P3/2 or 3D5/2; J part optional ("4P")
    std::size_t i = 0;
    while (i < label.size() && std::isdigit(static_cast<unsigned char>(label[i]))) ++i;
    if (i == 0 || i >= label.size())
        throw std::invalid_argument("term table: bad level label '" + label + "'");
    TermTable::Entry e{};
    e.n = std::stoi(label.substr(0, i));
    e.l = orbital_from_label(label[i]);
    e.two_j = 0.0;
    const std::string jpart = label.substr(i + 1);
    if (!jpart.empty()) {
        const auto slash = jpart.find('/');
        if (slash == std::string::npos || jpart.substr(slash + 1) != "2")
            throw std::invalid_argument("term table: bad J in level '" + label + "'");
        e.two_j = std::stod(jpart.substr(0, slash));
    }
    e.energy_cm = energy;
    return e;
}

}  // namespace

double TermTable::term_energy_cm(int n, int l) const {
    double wsum = 0.0, esum = 0.0;
    for (const auto& e : entries) {
        if (e.n != n || e.l != l) continue;
        const double w = e.two_j > 0.0 ? e.two_j + 1.0 : 1.0;
        wsum += w;
        esum += w * e.energy_cm;
    }
    if (wsum == 0.0)
        throw std::invalid_argument("term table: no entry for " + std::to_string(n) + orbital_label(l));
    return esum / wsum;
}

TermTable parse_term_table(std::istream& in) {
    TermTable table;
    std::string line;
    int lineno = 0;
    bool have_limit = false;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string label;
        double energy;
        if (!(ls >> label)) continue;
        // allow "level, energy" with a comma separator as well as whitespace
        if (!label.empty() && label.back() == ',') label.pop_back();
        if (!(ls >> energy))
            throw std::invalid_argument("term table line " + std::to_string(lineno) +
                                        ": missing energy");
        if (label == "LIMIT" || label == "limit" || label == "Limit") {
            table.limit_cm = energy;
            have_limit = true;
        } else {
            table.entries.push_back(parse_level(label, energy));
        }
    }
    if (!have_limit) throw std::invalid_argument("term table: missing LIMIT entry");
    return table;
}

TermTable parse_term_table_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("cannot open term table file: " + path);
    return parse_term_table(f);
}

const std::string& default_term_table_text() {
    static const std::string text = kDefaultTermText;
    return text;
}

const TermTable& default_term_table() {
    static const TermTable table = [] {
        std::istringstream in(kDefaultTermText);
        return parse_term_table(in);
    }();
    return table;
}

QuantumDefectModel calibrate_defects(const TermTable& table, const PhysicalConstants& consts,
                                     double defect_f, double defect_g) {
    QuantumDefectModel model;
    model.core_charge = 2;
    const double rz2 = consts.rydberg_reduced_cm() * 4.0;
    const std::pair<int, int> low_terms[] = {{4, 0}, {4, 1}, {3, 2}};  // 4S, 4P, 3D
    for (auto [n, l] : low_terms) {
        const double binding = table.limit_cm - table.term_energy_cm(n, l);
        if (!(binding > 0.0))
            throw std::invalid_argument("term table: level above ionization limit");
        const double nstar = std::sqrt(rz2 / binding);
        model.set_defect(l, n - nstar);
    }
    model.set_defect(3, defect_f);
    model.set_defect(4, defect_g);
    model.validate();
    return model;
}

QuantumDefectModel default_defect_model(const PhysicalConstants& consts) {
    QuantumDefectModel model = calibrate_defects(default_term_table(), consts);
    model.set_defect(1, 1.44);  // Rydberg-series P defect; low-n value is ~1.50
    model.validate();
    return model;
}

// ---------------------------------------------------------------------------
// Energies
// ---------------------------------------------------------------------------

double binding_energy_cm(const RydbergState& state, const QuantumDefectModel& model,
                         const PhysicalConstants& consts) {
    state.validate(model);
    const double nstar = state.n - model.defect(state.l);
    const double z = model.core_charge;
    return -consts.rydberg_reduced_cm() * z * z / (nstar * nstar);
}

// ---------------------------------------------------------------------------
// Radial orbitals
// ---------------------------------------------------------------------------

namespace {

// Generalized Laguerre L_k^(alpha)(x) by the three-term recurrence in the
// degree; alpha may be non-integer.
double laguerre(int k, double alpha, double x) {
    if (k == 0) return 1.0;
    double lm1 = 1.0;
    double l0 = 1.0 + alpha - x;
    for (int i = 1; i < k; ++i) {
        const double lp = ((2.0 * i + 1.0 + alpha - x) * l0 - (i + alpha) * lm1) / (i + 1.0);
        lm1 = l0;
        l0 = lp;
    }
    return l0;
}

}  // namespace

RadialOrbital::RadialOrbital(const RydbergState& state, const QuantumDefectModel& model) {
    state.validate(model);
    const double delta = model.defect(state.l);
    nstar_ = state.n - delta;
    int shift = 0;
    while (state.l - delta + shift <= -0.5) ++shift;
    lstar_ = state.l - delta + shift;
    degree_ = state.n - state.l - shift - 1;
    if (degree_ < 0)
        throw std::invalid_argument("radial orbital: no normalizable wavefunction for " +
                                    state.label());
    z_ = model.core_charge;
    r_min_ = 1e-3 / z_;
    // outer cutoff: beyond the classical turning point 2 n*^2/Z the amplitude
    // decays exponentially; extend until it is < 1e-13 of the peak envelope
    const double r_turn = 2.0 * nstar_ * nstar_ / z_;
    r_max_ = std::max(1.5 * r_turn, r_turn + 30.0 * nstar_ / z_);
    double envelope = 0.0;
    for (int i = 0; i <= 128; ++i) {
        const double r = r_min_ + (1.2 * r_turn - r_min_) * i / 128.0;
        envelope = std::max(envelope, std::abs(unnormalized(r)));
    }
    while (std::abs(unnormalized(r_max_)) > 1e-13 * envelope) r_max_ *= 1.08;
    norm_ = 1.0;
    const double nrm = integrate([this](double r) { const double v = unnormalized(r); return v * v * r * r; },
                                 r_min_, r_max_, 1e-12, 0.0);
    if (!(nrm > 0.0) || !std::isfinite(nrm))
        throw std::invalid_argument("radial orbital: normalization failed for " + state.label());
    norm_ = 1.0 / std::sqrt(nrm);
}

double RadialOrbital::unnormalized(double r_bohr) const {
    const double rho = 2.0 * z_ * r_bohr / nstar_;
    // rho^L* e^{-rho/2} L_k^{2L*+1}(rho); work in logs for the prefactor to
    // survive large rho at high n
    const double lg = lstar_ * std::log(rho) - 0.5 * rho;
    if (lg < -745.0) return 0.0;
    return std::exp(lg) * laguerre(degree_, 2.0 * lstar_ + 1.0, rho);
}

double RadialOrbital::operator()(double r_bohr) const {
    if (r_bohr <= 0.0) return 0.0;
    return norm_ * unnormalized(r_bohr);
}

RadialWavefunction radial_wavefunction(const RydbergState& state, const QuantumDefectModel& model,
                                       std::size_t points) {
    if (points < 16) throw std::invalid_argument("radial_wavefunction: too few grid points");
    RadialOrbital orb(state, model);
    RadialWavefunction wf;
    wf.state = state;
    wf.grid_bohr.resize(points);
    wf.values.resize(points);
    const double lmin = std::log(orb.inner_radius());
    const double lmax = std::log(orb.outer_radius());
    for (std::size_t i = 0; i < points; ++i) {
        const double r = std::exp(lmin + (lmax - lmin) * double(i) / double(points - 1));
        wf.grid_bohr[i] = r;
        wf.values[i] = orb(r);
    }
    return wf;
}

double radial_matrix_element(const RydbergState& a, const RydbergState& b,
                             const QuantumDefectModel& model, double rel_tol) {
    if (std::abs(a.l - b.l) != 1)
        throw SelectionRuleError("radial_matrix_element: requires |L_a - L_b| = 1");
    const RadialOrbital oa(a, model);
    const RadialOrbital ob(b, model);
    const double lo = std::min(oa.inner_radius(), ob.inner_radius());
    const double hi = std::min(oa.outer_radius(), ob.outer_radius());
    return integrate([&](double r) { return oa(r) * ob(r) * r * r * r; }, lo, hi, rel_tol, 0.0);
}

double angular_factor_z(int l, int l_prime, int m_l) {
    if (std::abs(m_l) > std::min(l, l_prime))
        throw SelectionRuleError("angular_factor_z: requires |m_L| <= min(L, L')");
    if (std::abs(l - l_prime) != 1)
        throw SelectionRuleError("angular_factor_z: requires L' = L +- 1");
    const int lmax = std::max(l, l_prime);
    return std::sqrt((double(lmax) * lmax - double(m_l) * m_l) /
                     ((2.0 * lmax - 1.0) * (2.0 * lmax + 1.0)));
}

// ---------------------------------------------------------------------------
// Polarizability
// ---------------------------------------------------------------------------

PolarizabilityResult polarizability(const RydbergState& state, const QuantumDefectModel& model,
                                    int n_min, int n_max, const PhysicalConstants& consts) {
    state.validate(model);
    if (n_min > n_max) throw std::invalid_argument("polarizability: empty coupling range");
    if (state.n < n_min || state.n > n_max)
        throw std::invalid_argument("polarizability: coupling range must include the state itself");

    PolarizabilityResult result;
    result.n_min = n_min;
    result.n_max = n_max;
    if (n_min > state.n - 3 || n_max < state.n + 3) {
        result.range_warning = true;
        result.message = "coupling range excludes near-degenerate partners (n within +-3 of " +
                         std::to_string(state.n) + ")";
    }

    const double e0 = binding_energy_cm(state, model, consts);
    const double hc_cm = consts.planck * consts.speed_of_light * 100.0;  // J per cm^-1
    double alpha_si = 0.0;  // J/(V/m)^2, summed as 2 sum |<ez>|^2/(E'-E)
    for (int lp : {state.l - 1, state.l + 1}) {
        if (lp < 0) continue;
        if (std::abs(state.m_l) > lp) continue;
        const double ang = angular_factor_z(state.l, lp, state.m_l);
        for (int np = std::max(n_min, lp + 1); np <= n_max; ++np) {
            RydbergState partner{np, lp, state.m_l, std::nullopt};
            const double ep = binding_energy_cm(partner, model, consts);
            if (std::abs(ep - e0) < 1e-12) continue;  // accidental degeneracy
            const double radial = radial_matrix_element(state, partner, model);
            const double me = consts.elementary_charge * ang * radial * consts.bohr_radius;
            alpha_si += 2.0 * me * me / ((ep - e0) * hc_cm);
        }
    }
    // J/(V/m)^2 -> MHz/(V/cm)^2: divide by h for Hz, x1e4 field, x1e-6 MHz
    result.alpha_mhz_per_vcm2 = alpha_si / consts.planck * 1e-2;
    return result;
}

// ---------------------------------------------------------------------------
// Decay rates and lifetimes
// ---------------------------------------------------------------------------

double einstein_a(const RydbergState& upper, const RydbergState& lower,
                  const QuantumDefectModel& model, double transition_frequency_hz,
                  const PhysicalConstants& consts) {
    if (std::abs(upper.l - lower.l) != 1)
        throw SelectionRuleError("einstein_a: dipole-forbidden pair " + upper.label() + " -> " +
                                 lower.label());
    if (!(transition_frequency_hz > 0.0))
        throw std::invalid_argument("einstein_a: transition frequency must be > 0");
    const double radial = radial_matrix_element(upper, lower, model) * consts.bohr_radius;
    const double omega = 2.0 * 3.14159265358979323846 * transition_frequency_hz;
    const double lmax = std::max(upper.l, lower.l);
    const double c = consts.speed_of_light;
    const double prefactor = consts.elementary_charge * consts.elementary_charge * omega * omega *
                             omega /
                             (3.0 * 3.14159265358979323846 * consts.vacuum_permittivity *
                              consts.reduced_planck * c * c * c);
    return prefactor * (lmax / (2.0 * upper.l + 1.0)) * radial * radial;
}

double lifetime_s(const RydbergState& state, const QuantumDefectModel& model,
                  const std::vector<RydbergState>& lower_levels, const PhysicalConstants& consts) {
    if (lower_levels.empty()) throw std::invalid_argument("lifetime: no decay channels given");
    const double e_up = binding_energy_cm(state, model, consts);
    double rate = 0.0;
    for (const auto& low : lower_levels) {
        const double e_low = binding_energy_cm(low, model, consts);
        if (!(e_low < e_up))
            throw std::invalid_argument("lifetime: channel " + low.label() + " is not below " +
                                        state.label());
        const double freq_hz = (e_up - e_low) * consts.speed_of_light * 100.0;
        rate += einstein_a(state, low, model, freq_hz, consts);
    }
    return 1.0 / rate;
}

double transition_dipole_cm(const RydbergState& a, const RydbergState& b,
                            const QuantumDefectModel& model, const PhysicalConstants& consts) {
    const double radial = radial_matrix_element(a, b, model);
    const double lmax = std::max(a.l, b.l);
    return consts.elementary_charge * std::sqrt(lmax) * std::abs(radial) * consts.bohr_radius;
}

double gaussian_beam_peak_field(double power_w, double waist_m, const PhysicalConstants& consts) {
    if (power_w < 0.0) throw std::invalid_argument("gaussian beam: power must be >= 0");
    if (!(waist_m > 0.0)) throw std::invalid_argument("gaussian beam: waist must be > 0");
    // peak intensity 2P/(pi w^2), E = sqrt(2 I / (eps0 c))
    const double intensity = 2.0 * power_w / (3.14159265358979323846 * waist_m * waist_m);
    return std::sqrt(2.0 * intensity / (consts.vacuum_permittivity * consts.speed_of_light));
}

double rabi_frequency(double power_w, double waist_m, double dipole_cm,
                      const PhysicalConstants& consts) {
    return dipole_cm * gaussian_beam_peak_field(power_w, waist_m, consts) / consts.reduced_planck;
}

}  // namespace rydion
