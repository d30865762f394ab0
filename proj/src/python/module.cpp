#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rydion/config.hpp"
#include "rydion/detection.hpp"
#include "rydion/inference.hpp"
#include "rydion/lineshape.hpp"
#include "rydion/structure.hpp"

namespace py = pybind11;
using namespace rydion;

PYBIND11_MODULE(_rydion, m) {
    m.doc() = "Rydberg-ion spectroscopy: quantum-defect structure, micromotion/Stark "
              "lineshapes, spectrum fitting, shelving detection";

    py::register_exception<SelectionRuleError>(m, "SelectionRuleError", PyExc_ValueError);
    py::register_exception<UnidentifiedSeriesError>(m, "UnidentifiedSeriesError",
                                                    PyExc_RuntimeError);
    py::register_exception<DegenerateParametersError>(m, "DegenerateParametersError",
                                                      PyExc_RuntimeError);

    // ---- structure ----
    py::class_<PhysicalConstants>(m, "PhysicalConstants")
        .def(py::init<>())
        .def_readwrite("rydberg_constant_inf_cm", &PhysicalConstants::rydberg_constant_inf_cm)
        .def_readwrite("electron_ion_mass_ratio", &PhysicalConstants::electron_ion_mass_ratio)
        .def_readwrite("ion_mass_kg", &PhysicalConstants::ion_mass_kg)
        .def("rydberg_reduced_cm", &PhysicalConstants::rydberg_reduced_cm)
        .def("validate", &PhysicalConstants::validate);

    py::class_<QuantumDefectModel>(m, "QuantumDefectModel")
        .def(py::init<>())
        .def_readwrite("core_charge", &QuantumDefectModel::core_charge)
        .def_readwrite("defects", &QuantumDefectModel::defects)
        .def("defect", &QuantumDefectModel::defect, py::arg("l"))
        .def("set_defect", &QuantumDefectModel::set_defect, py::arg("l"), py::arg("value"))
        .def("validate", &QuantumDefectModel::validate);

    py::class_<RydbergState>(m, "RydbergState")
        .def(py::init([](int n, int l, int m_l) {
                 return RydbergState{n, l, m_l, std::nullopt};
             }),
             py::arg("n"), py::arg("l"), py::arg("m_l") = 0)
        .def_readwrite("n", &RydbergState::n)
        .def_readwrite("l", &RydbergState::l)
        .def_readwrite("m_l", &RydbergState::m_l)
        .def("label", &RydbergState::label)
        .def("__repr__", [](const RydbergState& s) { return "<RydbergState " + s.label() + ">"; });

    m.def("orbital_from_label", [](const std::string& s) {
        if (s.size() != 1) throw std::invalid_argument("orbital label must be one letter");
        return orbital_from_label(s[0]);
    });
    m.def("default_defect_model", &default_defect_model,
          py::arg("constants") = PhysicalConstants{});
    m.def(
        "calibrate_defects",
        [](const std::string& term_file, double defect_f, double defect_g) {
            return calibrate_defects(term_file.empty() ? default_term_table()
                                                       : parse_term_table_file(term_file),
                                     PhysicalConstants{}, defect_f, defect_g);
        },
        py::arg("term_file") = "", py::arg("defect_f") = 0.026, py::arg("defect_g") = 0.004);

    m.def("binding_energy_cm", &binding_energy_cm, py::arg("state"), py::arg("model"),
          py::arg("constants") = PhysicalConstants{});
    m.def(
        "radial_wavefunction",
        [](const RydbergState& s, const QuantumDefectModel& model, std::size_t points) {
            const RadialWavefunction wf = radial_wavefunction(s, model, points);
            return py::make_tuple(wf.grid_bohr, wf.values);
        },
        py::arg("state"), py::arg("model"), py::arg("points") = std::size_t(12000),
        "returns (grid_bohr, values)");
    m.def("radial_matrix_element", &radial_matrix_element, py::arg("a"), py::arg("b"),
          py::arg("model"), py::arg("rel_tol") = 1e-8);
    m.def("angular_factor_z", &angular_factor_z, py::arg("l"), py::arg("l_prime"), py::arg("m_l"));

    py::class_<PolarizabilityResult>(m, "PolarizabilityResult")
        .def_readonly("alpha_mhz_per_vcm2", &PolarizabilityResult::alpha_mhz_per_vcm2)
        .def_readonly("range_warning", &PolarizabilityResult::range_warning)
        .def_readonly("message", &PolarizabilityResult::message);
    m.def("polarizability", &polarizability, py::arg("state"), py::arg("model"), py::arg("n_min"),
          py::arg("n_max"), py::arg("constants") = PhysicalConstants{});

    m.def("einstein_a", &einstein_a, py::arg("upper"), py::arg("lower"), py::arg("model"),
          py::arg("transition_frequency_hz"), py::arg("constants") = PhysicalConstants{});
    m.def("lifetime_s", &lifetime_s, py::arg("state"), py::arg("model"), py::arg("lower_levels"),
          py::arg("constants") = PhysicalConstants{});
    m.def("transition_dipole_cm", &transition_dipole_cm, py::arg("a"), py::arg("b"),
          py::arg("model"), py::arg("constants") = PhysicalConstants{});
    m.def("gaussian_beam_peak_field", &gaussian_beam_peak_field, py::arg("power_w"),
          py::arg("waist_m"), py::arg("constants") = PhysicalConstants{});
    m.def("rabi_frequency", &rabi_frequency, py::arg("power_w"), py::arg("waist_m"),
          py::arg("dipole_cm"), py::arg("constants") = PhysicalConstants{});

    // ---- lineshape ----
    py::class_<TrapDrive>(m, "TrapDrive")
        .def(py::init([](double omega, double e, double x, double k) {
                 return TrapDrive{omega, e, x, k};
             }),
             py::arg("drive_frequency_hz"), py::arg("field_v_per_m") = 0.0,
             py::arg("micromotion_amplitude_m") = 0.0, py::arg("wavenumber_rad_per_m") = 0.0)
        .def_readwrite("drive_frequency_hz", &TrapDrive::drive_frequency_hz)
        .def_readwrite("field_v_per_m", &TrapDrive::field_v_per_m)
        .def_readwrite("micromotion_amplitude_m", &TrapDrive::micromotion_amplitude_m)
        .def_readwrite("wavenumber_rad_per_m", &TrapDrive::wavenumber_rad_per_m);

    py::class_<BroadeningParams>(m, "BroadeningParams")
        .def(py::init<>())
        .def_readwrite("temperature_k", &BroadeningParams::temperature_k)
        .def_readwrite("b_field_t", &BroadeningParams::b_field_t)
        .def_readwrite("ion_mass_kg", &BroadeningParams::ion_mass_kg)
        .def_readwrite("zeeman_fwhm_hz_per_t", &BroadeningParams::zeeman_fwhm_hz_per_t);

    py::class_<ModulationIndices>(m, "ModulationIndices")
        .def_readonly("beta_mm", &ModulationIndices::beta_mm)
        .def_readonly("beta_alpha", &ModulationIndices::beta_alpha)
        .def_readonly("static_shift_hz", &ModulationIndices::static_shift_hz);
    m.def("modulation_indices", &modulation_indices, py::arg("alpha_mhz_per_vcm2"),
          py::arg("drive"));

    py::class_<SidebandComponent>(m, "SidebandComponent")
        .def_readonly("q", &SidebandComponent::q)
        .def_readonly("offset_hz", &SidebandComponent::offset_hz)
        .def_readonly("amplitude", &SidebandComponent::amplitude);
    py::class_<SidebandSpectrum>(m, "SidebandSpectrum")
        .def_readonly("carrier_shift_hz", &SidebandSpectrum::carrier_shift_hz)
        .def_readonly("components", &SidebandSpectrum::components)
        .def("total_power", &SidebandSpectrum::total_power);
    m.def("sideband_amplitudes",
          py::overload_cast<double, double, double>(&sideband_amplitudes), py::arg("beta_mm"),
          py::arg("beta_alpha"), py::arg("tail_tolerance") = 1e-10);
    m.def("sideband_amplitudes_for_drive",
          py::overload_cast<double, const TrapDrive&, double>(&sideband_amplitudes),
          py::arg("alpha_mhz_per_vcm2"), py::arg("drive"), py::arg("tail_tolerance") = 1e-10);

    m.def("doppler_sigma_hz", &doppler_sigma_hz, py::arg("temperature_k"), py::arg("ion_mass_kg"),
          py::arg("wavenumber_rad_per_m"));
    py::class_<GaussianKernel>(m, "GaussianKernel")
        .def_readonly("sigma_hz", &GaussianKernel::sigma_hz)
        .def("fwhm_hz", &GaussianKernel::fwhm_hz)
        .def("__call__", &GaussianKernel::operator());
    m.def("broadening_kernel", &broadening_kernel, py::arg("params"),
          py::arg("wavenumber_rad_per_m"));

    py::class_<TrapLineModel>(m, "TrapLineModel")
        .def(py::init<>())
        .def_readwrite("omega0_hz", &TrapLineModel::omega0_hz)
        .def_readwrite("alpha_mhz_per_vcm2", &TrapLineModel::alpha_mhz_per_vcm2)
        .def_readwrite("drive", &TrapLineModel::drive)
        .def_readwrite("broadening", &TrapLineModel::broadening)
        .def("kernel", &TrapLineModel::kernel);

    py::class_<FrequencyGrid>(m, "FrequencyGrid")
        .def(py::init([](double lo, double hi, double step) {
                 return FrequencyGrid{lo, hi, step};
             }),
             py::arg("min_hz"), py::arg("max_hz"), py::arg("step_hz"))
        .def_readwrite("min_hz", &FrequencyGrid::min_hz)
        .def_readwrite("max_hz", &FrequencyGrid::max_hz)
        .def_readwrite("step_hz", &FrequencyGrid::step_hz);

    py::class_<Spectrum>(m, "Spectrum")
        .def_readonly("detuning_hz", &Spectrum::detuning_hz)
        .def_readonly("value", &Spectrum::value);
    m.def("synthesize_lineshape", &synthesize_lineshape, py::arg("model"), py::arg("grid"),
          py::arg("tail_tolerance") = 1e-10);
    m.def("required_span_hz", &required_span_hz, py::arg("model"),
          py::arg("tail_tolerance") = 1e-10);
    m.def("spectral_density", &spectral_density, py::arg("model"), py::arg("detuning_hz"),
          py::arg("tail_tolerance") = 1e-10);

    // ---- inference ----
    py::enum_<InitialLevel>(m, "InitialLevel")
        .value("D32", InitialLevel::D32)
        .value("D52", InitialLevel::D52);
    m.def(
        "level_energy_from_wavelength",
        [](double lam, InitialLevel init) { return level_energy_from_wavelength(lam, init); },
        py::arg("vacuum_wavelength_m"), py::arg("initial"));

    py::class_<SeriesAssignment>(m, "SeriesAssignment")
        .def_readonly("n", &SeriesAssignment::n)
        .def_readonly("delta", &SeriesAssignment::delta)
        .def_readonly("limit_cm", &SeriesAssignment::limit_cm)
        .def_readonly("residuals_cm", &SeriesAssignment::residuals_cm)
        .def_readonly("residual_norm_cm", &SeriesAssignment::residual_norm_cm)
        .def_readonly("max_abs_residual_cm", &SeriesAssignment::max_abs_residual_cm);
    py::class_<IdentifyOptions>(m, "IdentifyOptions")
        .def(py::init<>())
        .def_readwrite("delta_min", &IdentifyOptions::delta_min)
        .def_readwrite("delta_max", &IdentifyOptions::delta_max)
        .def_readwrite("residual_threshold_cm", &IdentifyOptions::residual_threshold_cm)
        .def_readwrite("limit_window_lo_cm", &IdentifyOptions::limit_window_lo_cm)
        .def_readwrite("limit_window_hi_cm", &IdentifyOptions::limit_window_hi_cm)
        .def_readwrite("fixed_limit_cm", &IdentifyOptions::fixed_limit_cm)
        .def_readwrite("fixed_delta", &IdentifyOptions::fixed_delta);
    m.def("identify_series", &identify_series, py::arg("level_energies_cm"),
          py::arg("core_charge"), py::arg("n_min"), py::arg("n_max"),
          py::arg("options") = IdentifyOptions{}, py::arg("constants") = PhysicalConstants{});

    py::enum_<FitParam>(m, "FitParam")
        .value("omega0", FitParam::omega0)
        .value("alpha", FitParam::alpha)
        .value("amplitude", FitParam::amplitude)
        .value("baseline", FitParam::baseline)
        .value("e_ion", FitParam::e_ion)
        .value("beta_mm", FitParam::beta_mm)
        .value("beta_alpha", FitParam::beta_alpha);
    m.def("fit_param_name", &fit_param_name);

    py::class_<SpectrumMetadata>(m, "SpectrumMetadata")
        .def(py::init<>())
        .def_readwrite("initial_state", &SpectrumMetadata::initial_state)
        .def_readwrite("e_ion_v_per_m", &SpectrumMetadata::e_ion_v_per_m)
        .def_readwrite("omega_drive_hz", &SpectrumMetadata::omega_drive_hz)
        .def_readwrite("k_rad_per_m", &SpectrumMetadata::k_rad_per_m)
        .def_readwrite("x_mm_m", &SpectrumMetadata::x_mm_m)
        .def_readwrite("temperature_k", &SpectrumMetadata::temperature_k)
        .def_readwrite("b_t", &SpectrumMetadata::b_t);
    py::class_<MeasuredPoint>(m, "MeasuredPoint")
        .def(py::init([](double x, int shots, int dark) {
                 return MeasuredPoint{x, shots, dark};
             }),
             py::arg("x_hz"), py::arg("shots"), py::arg("dark_counts"))
        .def_readwrite("x_hz", &MeasuredPoint::x_hz)
        .def_readwrite("shots", &MeasuredPoint::shots)
        .def_readwrite("dark_counts", &MeasuredPoint::dark_counts);
    py::class_<MeasuredSpectrum>(m, "MeasuredSpectrum")
        .def(py::init<>())
        .def_readwrite("points", &MeasuredSpectrum::points)
        .def_readwrite("metadata", &MeasuredSpectrum::metadata)
        .def_readwrite("absolute_frequency", &MeasuredSpectrum::absolute_frequency)
        .def("point_sigma", &MeasuredSpectrum::point_sigma)
        .def("validate", &MeasuredSpectrum::validate);

    py::class_<FitOptions>(m, "FitOptions")
        .def(py::init<>())
        .def_readwrite("free", &FitOptions::free)
        .def_readwrite("initial", &FitOptions::initial)
        .def_readwrite("max_iterations", &FitOptions::max_iterations)
        .def_readwrite("weight_refinements", &FitOptions::weight_refinements);
    py::class_<FitResult>(m, "FitResult")
        .def_readonly("parameters", &FitResult::parameters)
        .def_readonly("values", &FitResult::values)
        .def_readonly("errors", &FitResult::errors)
        .def_readonly("covariance", &FitResult::covariance)
        .def_readonly("chi_square", &FitResult::chi_square)
        .def_readonly("degrees_of_freedom", &FitResult::degrees_of_freedom)
        .def_readonly("converged", &FitResult::converged)
        .def_readonly("iterations", &FitResult::iterations)
        .def_readonly("amplitude", &FitResult::amplitude)
        .def_readonly("baseline", &FitResult::baseline)
        .def_readonly("model", &FitResult::model)
        .def("value", &FitResult::value)
        .def("error", &FitResult::error);
    m.def("fit_lineshape", &fit_lineshape, py::arg("data"), py::arg("base_model"),
          py::arg("options") = FitOptions{});
    m.def("fit_model_value", &fit_model_value, py::arg("fit"), py::arg("x_hz"),
          py::arg("tail_tolerance") = 1e-10);

    // ---- detection ----
    py::class_<SequenceParams>(m, "SequenceParams")
        .def(py::init<>())
        .def_readwrite("p_ryd_to_d52", &SequenceParams::p_ryd_to_d52)
        .def_readwrite("p_ryd_to_s", &SequenceParams::p_ryd_to_s)
        .def_readwrite("p_pump_s_to_d52", &SequenceParams::p_pump_s_to_d52)
        .def_readwrite("include_pumping", &SequenceParams::include_pumping)
        .def_readwrite("dark_error", &SequenceParams::dark_error)
        .def_readwrite("bright_error", &SequenceParams::bright_error)
        .def_readwrite("background_dark", &SequenceParams::background_dark);
    py::class_<ShotRecord>(m, "ShotRecord")
        .def_readonly("shots", &ShotRecord::shots)
        .def_readonly("dark_counts", &ShotRecord::dark_counts)
        .def_readonly("seed", &ShotRecord::seed)
        .def("dark_fraction", &ShotRecord::dark_fraction);
    m.def("dark_probability", &dark_probability, py::arg("p_exc"), py::arg("params"));
    m.def("simulate_sequence", &simulate_sequence, py::arg("p_exc"), py::arg("params"),
          py::arg("shots"), py::arg("seed"));
    m.def("projection_noise", &projection_noise, py::arg("p"), py::arg("shots"));

    m.attr("__version__") = "0.1.0";
}
