#include "rydion/inference.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>

namespace rydion {

// ---------------------------------------------------------------------------
// MeasuredSpectrum
// ---------------------------------------------------------------------------

void MeasuredSpectrum::validate() const {
    if (points.empty()) throw std::invalid_argument("MeasuredSpectrum: no data points");
    for (const auto& p : points) {
        if (p.shots <= 0) throw std::invalid_argument("MeasuredSpectrum: shots must be > 0");
        if (p.dark_counts < 0 || p.dark_counts > p.shots)
            throw std::invalid_argument("MeasuredSpectrum: requires 0 <= dark_counts <= shots");
    }
}

double MeasuredSpectrum::point_sigma(std::size_t i) const {
    const auto& p = points.at(i);
    double frac = p.dark_fraction();
    if (p.dark_counts == 0 || p.dark_counts == p.shots)
        frac = (p.dark_counts + 0.5) / (p.shots + 1.0);
    return std::sqrt(frac * (1.0 - frac) / p.shots);
}

TrapDrive MeasuredSpectrum::drive() const {
    return TrapDrive{metadata.omega_drive_hz, metadata.e_ion_v_per_m, metadata.x_mm_m,
                     metadata.k_rad_per_m};
}

BroadeningParams MeasuredSpectrum::broadening() const {
    BroadeningParams b;
    b.temperature_k = metadata.temperature_k;
    b.b_field_t = metadata.b_t;
    return b;
}

// ---------------------------------------------------------------------------
// Level energies
// ---------------------------------------------------------------------------

double level_energy_from_wavelength(double vacuum_wavelength_m, InitialLevel initial,
                                    const ReferenceFrequencies& refs,
                                    const PhysicalConstants& consts) {
    if (!(vacuum_wavelength_m > 0.0))
        throw std::invalid_argument("level_energy_from_wavelength: wavelength must be > 0");
    const double c_cm = consts.speed_of_light * 100.0;  // cm/s
    const double e_d52 = refs.s_to_d52_hz / c_cm;
    const double e_init =
        initial == InitialLevel::D52 ? e_d52 : e_d52 - refs.fine_structure_hz / c_cm;
    return e_init + 0.01 / vacuum_wavelength_m;  // 1/lambda in cm^-1
}

// ---------------------------------------------------------------------------
// Series identification
// ---------------------------------------------------------------------------

namespace {

struct SeriesFit {
    double delta = 0.0;
    double limit_cm = 0.0;
    double rss = 0.0;
};

// Residual sum of squares at fixed delta, limit profiled out unless fixed.
SeriesFit series_rss(const std::vector<double>& energies, const std::vector<int>& ns, double rz2,
                     double delta, const std::optional<double>& fixed_limit) {
    SeriesFit fit;
    fit.delta = delta;
    double mean_b = 0.0, mean_e = 0.0;
    std::vector<double> binding(ns.size());
    for (std::size_t i = 0; i < ns.size(); ++i) {
        const double nstar = ns[i] - delta;
        binding[i] = rz2 / (nstar * nstar);
        mean_b += binding[i];
        mean_e += energies[i];
    }
    mean_b /= double(ns.size());
    mean_e /= double(ns.size());
    fit.limit_cm = fixed_limit ? *fixed_limit : mean_e + mean_b;
    fit.rss = 0.0;
    for (std::size_t i = 0; i < ns.size(); ++i) {
        const double r = (fit.limit_cm - binding[i]) - energies[i];
        fit.rss += r * r;
    }
    return fit;
}

// Golden-section minimization of the profiled RSS over delta in [lo, hi].
SeriesFit fit_series_delta(const std::vector<double>& energies, const std::vector<int>& ns,
                           double rz2, double lo, double hi,
                           const std::optional<double>& fixed_limit) {
    constexpr double kInvPhi = 0.6180339887498949;
    double a = lo, b = hi;
    double x1 = b - kInvPhi * (b - a);
    double x2 = a + kInvPhi * (b - a);
    double f1 = series_rss(energies, ns, rz2, x1, fixed_limit).rss;
    double f2 = series_rss(energies, ns, rz2, x2, fixed_limit).rss;
    for (int it = 0; it < 200 && (b - a) > 1e-12; ++it) {
        if (f1 < f2) {
            b = x2; x2 = x1; f2 = f1;
            x1 = b - kInvPhi * (b - a);
            f1 = series_rss(energies, ns, rz2, x1, fixed_limit).rss;
        } else {
            a = x1; x1 = x2; f1 = f2;
            x2 = a + kInvPhi * (b - a);
            f2 = series_rss(energies, ns, rz2, x2, fixed_limit).rss;
        }
    }
    return series_rss(energies, ns, rz2, 0.5 * (a + b), fixed_limit);
}

}  // namespace

SeriesAssignment identify_series(const std::vector<double>& level_energies_cm, int core_charge,
                                 int n_min, int n_max, const IdentifyOptions& options,
                                 const PhysicalConstants& consts) {
    if (level_energies_cm.size() < 2)
        throw std::invalid_argument("identify_series: need at least 2 lines");
    if (n_min < 1 || n_max < n_min) throw std::invalid_argument("identify_series: bad n range");
    if (options.fixed_delta &&
        (*options.fixed_delta < options.delta_min || *options.fixed_delta > options.delta_max)) {
        // a pinned delta overrides the window
    }

    const double rz2 = consts.rydberg_reduced_cm() * double(core_charge) * double(core_charge);

    // work on sorted energies, remember the permutation
    std::vector<std::size_t> order(level_energies_cm.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return level_energies_cm[a] < level_energies_cm[b];
    });
    std::vector<double> energies;
    energies.reserve(order.size());
    for (auto i : order) energies.push_back(level_energies_cm[i]);

    const double dlo = options.fixed_delta ? *options.fixed_delta : options.delta_min;
    const double dhi = options.fixed_delta ? *options.fixed_delta : options.delta_max;
    if (!(dhi >= dlo)) throw std::invalid_argument("identify_series: bad delta window");

    std::vector<SeriesAssignment> candidates;
    for (int n0 = n_min; n0 <= n_max; ++n0) {
        std::vector<int> ns(energies.size());
        ns[0] = n0;
        // initial assignment of the remaining lines from the limit implied by
        // the first line at the window midpoint, then refine
        double delta = 0.5 * (dlo + dhi);
        bool valid = true;
        SeriesFit fit{};
        for (int pass = 0; pass < 3 && valid; ++pass) {
            const double nstar0 = n0 - delta;
            if (nstar0 <= 0.5) { valid = false; break; }
            const double limit0 = pass == 0 ? energies[0] + rz2 / (nstar0 * nstar0) : fit.limit_cm;
            for (std::size_t i = 1; i < energies.size(); ++i) {
                const double binding = limit0 - energies[i];
                if (binding <= 0.0) { valid = false; break; }
                const int ni = int(std::lround(delta + std::sqrt(rz2 / binding)));
                if (ni <= ns[i - 1]) { valid = false; break; }
                ns[i] = ni;
            }
            if (!valid) break;
            fit = dlo == dhi ? series_rss(energies, ns, rz2, dlo, options.fixed_limit_cm)
                             : fit_series_delta(energies, ns, rz2, dlo, dhi,
                                                options.fixed_limit_cm);
            delta = fit.delta;
        }
        if (!valid) continue;
        if (!options.fixed_limit_cm) {
            if (options.limit_window_lo_cm && fit.limit_cm < *options.limit_window_lo_cm) continue;
            if (options.limit_window_hi_cm && fit.limit_cm > *options.limit_window_hi_cm) continue;
        }

        SeriesAssignment cand;
        cand.delta = fit.delta;
        cand.limit_cm = fit.limit_cm;
        cand.residual_norm_cm = std::sqrt(fit.rss);
        cand.n.resize(order.size());
        cand.residuals_cm.resize(order.size());
        double max_abs = 0.0;
        for (std::size_t i = 0; i < order.size(); ++i) {
            const double nstar = ns[i] - fit.delta;
            const double resid = (fit.limit_cm - rz2 / (nstar * nstar)) - energies[i];
            cand.n[order[i]] = ns[i];
            cand.residuals_cm[order[i]] = resid;
            max_abs = std::max(max_abs, std::abs(resid));
        }
        cand.max_abs_residual_cm = max_abs;
        candidates.push_back(std::move(cand));
    }

    if (candidates.empty())
        throw UnidentifiedSeriesError("identify_series: no valid assignment in the n range", {});

    std::sort(candidates.begin(), candidates.end(),
              [](const SeriesAssignment& a, const SeriesAssignment& b) {
                  if (std::abs(a.residual_norm_cm - b.residual_norm_cm) > 1e-9)
                      return a.residual_norm_cm < b.residual_norm_cm;
                  return std::abs(a.delta) < std::abs(b.delta);
              });

    if (candidates.front().max_abs_residual_cm > options.residual_threshold_cm) {
        std::vector<SeriesAssignment> best(candidates.begin(),
                                           candidates.begin() + std::min<std::size_t>(3, candidates.size()));
        throw UnidentifiedSeriesError(
            "identify_series: best assignment residual " +
                std::to_string(candidates.front().max_abs_residual_cm) + " cm^-1 exceeds threshold " +
                std::to_string(options.residual_threshold_cm) + " cm^-1",
            std::move(best));
    }
    return candidates.front();
}

// ---------------------------------------------------------------------------
// Lineshape fitting
// ---------------------------------------------------------------------------

const char* fit_param_name(FitParam p) {
    switch (p) {
        case FitParam::omega0: return "omega0_hz";
        case FitParam::alpha: return "alpha_MHz_per_Vcm2";
        case FitParam::amplitude: return "amplitude";
        case FitParam::baseline: return "baseline";
        case FitParam::e_ion: return "E_ion_V_per_m";
        case FitParam::beta_mm: return "beta_mm";
        case FitParam::beta_alpha: return "beta_alpha";
    }
    return "?";
}

namespace {

struct ParamVector {
    double omega0, alpha, amplitude, baseline, e_ion, beta_mm;
    std::optional<double> beta_alpha;  // set when fitting in beta space
};

// Comb + kernel evaluation shared by all fit iterations at one parameter set.
struct LineEvaluator {
    std::vector<double> centers_hz;  // shift + q*Omega
    std::vector<double> weights;     // |A_q|^2
    double sigma_hz = 0.0;
    double peak = 1.0;

    double density(double delta) const {
        double sum = 0.0;
        for (std::size_t i = 0; i < centers_hz.size(); ++i) {
            const double x = (delta - centers_hz[i]) / sigma_hz;
            if (std::abs(x) < 40.0) sum += weights[i] * std::exp(-0.5 * x * x);
        }
        return sum;
    }
    double value(double x_hz, const ParamVector& p) const {
        return p.baseline + p.amplitude * density(x_hz - p.omega0) / peak;
    }
};

LineEvaluator make_evaluator(const ParamVector& p, const TrapLineModel& base,
                             double tail_tolerance) {
    TrapDrive drive = base.drive;
    drive.field_v_per_m = p.e_ion;
    double beta_alpha, shift;
    if (p.beta_alpha) {
        beta_alpha = *p.beta_alpha;
        shift = -2.0 * beta_alpha * drive.drive_frequency_hz;
    } else {
        const double alpha_hz = p.alpha * 1e2;
        const double e2 = drive.field_v_per_m * drive.field_v_per_m;
        beta_alpha = alpha_hz * e2 / (8.0 * drive.drive_frequency_hz);
        shift = -alpha_hz * e2 / 4.0;
    }
    const SidebandSpectrum comb = sideband_amplitudes(p.beta_mm, beta_alpha, tail_tolerance);

    LineEvaluator ev;
    ev.sigma_hz = base.kernel().sigma_hz;
    if (!(ev.sigma_hz > 0.0)) throw std::invalid_argument("fit_lineshape: kernel width must be > 0");
    ev.centers_hz.reserve(comb.components.size());
    ev.weights.reserve(comb.components.size());
    for (const auto& c : comb.components) {
        ev.centers_hz.push_back(shift + c.q * drive.drive_frequency_hz);
        ev.weights.push_back(std::norm(c.amplitude));
    }
    // peak of the envelope: scan the comb support, then refine locally
    double lo = 0.0, hi = 0.0;
    for (double c : ev.centers_hz) {
        lo = std::min(lo, c);
        hi = std::max(hi, c);
    }
    lo -= 2.0 * ev.sigma_hz;
    hi += 2.0 * ev.sigma_hz;
    const double step = 0.5 * ev.sigma_hz;
    double best_x = 0.0, best = -1.0;
    for (double x = lo; x <= hi; x += step) {
        const double v = ev.density(x);
        if (v > best) { best = v; best_x = x; }
    }
    for (double frac : {-0.375, -0.25, -0.125, 0.125, 0.25, 0.375}) {
        const double v = ev.density(best_x + frac * step);
        if (v > best) best = v;
    }
    ev.peak = best > 0.0 ? best : 1.0;
    return ev;
}

ParamVector apply_free(const ParamVector& base, const std::vector<FitParam>& free,
                       const Eigen::VectorXd& x) {
    ParamVector p = base;
    for (int j = 0; j < int(free.size()); ++j) {
        const double v = x[j];
        switch (free[std::size_t(j)]) {
            case FitParam::omega0: p.omega0 = v; break;
            case FitParam::alpha: p.alpha = v; break;
            case FitParam::amplitude: p.amplitude = v; break;
            case FitParam::baseline: p.baseline = v; break;
            case FitParam::e_ion: p.e_ion = v; break;
            case FitParam::beta_mm: p.beta_mm = v; break;
            case FitParam::beta_alpha: p.beta_alpha = v; break;
        }
    }
    return p;
}

double param_scale(FitParam p, const ParamVector& start, double sigma_hz) {
    switch (p) {
        case FitParam::omega0: return std::max(0.1 * sigma_hz, 1e3);
        case FitParam::alpha: return std::max(std::abs(start.alpha), 10.0);
        case FitParam::amplitude: return std::max(std::abs(start.amplitude), 0.05);
        case FitParam::baseline: return 0.02;
        case FitParam::e_ion: return std::max(std::abs(start.e_ion), 1.0);
        case FitParam::beta_mm: return std::max(std::abs(start.beta_mm), 0.1);
        case FitParam::beta_alpha:
            return std::max(start.beta_alpha ? std::abs(*start.beta_alpha) : 0.0, 0.1);
    }
    return 1.0;
}

}  // namespace

double FitResult::value(FitParam p) const {
    for (std::size_t i = 0; i < parameters.size(); ++i)
        if (parameters[i] == p) return values[i];
    throw std::invalid_argument(std::string("FitResult: parameter not fitted: ") +
                                fit_param_name(p));
}

double FitResult::error(FitParam p) const {
    for (std::size_t i = 0; i < parameters.size(); ++i)
        if (parameters[i] == p) return errors[i];
    throw std::invalid_argument(std::string("FitResult: parameter not fitted: ") +
                                fit_param_name(p));
}

FitResult fit_lineshape(const MeasuredSpectrum& data, const TrapLineModel& base_model,
                        const FitOptions& options) {
    data.validate();
    const auto& free = options.free;
    if (free.empty()) throw std::invalid_argument("fit_lineshape: no free parameters");
    const std::size_t npts = data.points.size();
    if (npts < free.size() + 1)
        throw std::invalid_argument("fit_lineshape: under-determined, need at least " +
                                    std::to_string(free.size() + 1) + " points for " +
                                    std::to_string(free.size()) + " free parameters");
    const bool beta_space =
        std::find(free.begin(), free.end(), FitParam::beta_alpha) != free.end();
    if (beta_space && std::find(free.begin(), free.end(), FitParam::alpha) != free.end())
        throw std::invalid_argument("fit_lineshape: alpha and beta_alpha cannot both be free");

    base_model.drive.validate();

    // measured fractions and data-based weights
    Eigen::VectorXd x(npts), y(npts), w(npts);
    for (std::size_t i = 0; i < npts; ++i) {
        x[Eigen::Index(i)] = data.points[i].x_hz;
        y[Eigen::Index(i)] = data.points[i].dark_fraction();
        const double s = data.point_sigma(i);
        w[Eigen::Index(i)] = 1.0 / (s * s);
    }

    // -------- initial guess policy --------
    const std::size_t edge = std::max<std::size_t>(2, npts / 8);
    double base0 = 0.0;
    for (std::size_t i = 0; i < edge; ++i) base0 += y[Eigen::Index(i)] + y[Eigen::Index(npts - 1 - i)];
    base0 /= double(2 * edge);
    double ymax = y.maxCoeff();
    double amp0 = std::max(ymax - base0, 0.05);
    double centroid = 0.0, norm = 0.0, right_edge = x[Eigen::Index(npts - 1)];
    for (std::size_t i = 0; i < npts; ++i) {
        const double excess = std::max(y[Eigen::Index(i)] - base0, 0.0);
        centroid += excess * x[Eigen::Index(i)];
        norm += excess;
    }
    centroid = norm > 0.0 ? centroid / norm : 0.5 * (x[0] + x[Eigen::Index(npts - 1)]);
    for (std::size_t i = npts; i-- > 0;) {
        if (y[Eigen::Index(i)] - base0 > 0.5 * amp0) {
            right_edge = x[Eigen::Index(i)];
            break;
        }
    }
    // bare line sits at the asymmetric line's upper edge for alpha > 0; the
    // centroid is displaced from it by the static shift
    const double omega0_0 = right_edge;
    const double shift0 = std::min(centroid - omega0_0, 0.0);
    const double e2 = base_model.drive.field_v_per_m * base_model.drive.field_v_per_m;
    const double alpha0 =
        e2 > 0.0 ? std::max(-4.0 * shift0 / e2 * 1e-2, 1.0) : base_model.alpha_mhz_per_vcm2;

    ParamVector start{};
    start.omega0 = base_model.omega0_hz;
    start.alpha = base_model.alpha_mhz_per_vcm2;
    start.amplitude = amp0;
    start.baseline = base0;
    start.e_ion = base_model.drive.field_v_per_m;
    start.beta_mm =
        base_model.drive.wavenumber_rad_per_m * base_model.drive.micromotion_amplitude_m;
    if (beta_space) start.beta_alpha = 0.0;

    Eigen::VectorXd p(free.size());
    for (std::size_t j = 0; j < free.size(); ++j) {
        double v = 0.0;
        if (options.initial) {
            v = options.initial->at(j);
        } else {
            switch (free[j]) {
                case FitParam::omega0: v = omega0_0; break;
                case FitParam::alpha: v = alpha0; break;
                case FitParam::amplitude: v = amp0; break;
                case FitParam::baseline: v = base0; break;
                case FitParam::e_ion: v = base_model.drive.field_v_per_m; break;
                case FitParam::beta_mm: v = start.beta_mm; break;
                case FitParam::beta_alpha:
                    v = alpha0 * 1e2 * e2 / (8.0 * base_model.drive.drive_frequency_hz);
                    break;
            }
        }
        p[Eigen::Index(j)] = v;
    }

    const auto predict = [&](const Eigen::VectorXd& params) {
        const ParamVector pv = apply_free(start, free, params);
        const LineEvaluator ev = make_evaluator(pv, base_model, options.tail_tolerance);
        Eigen::VectorXd out(npts);
        for (std::size_t i = 0; i < npts; ++i)
            out[Eigen::Index(i)] = ev.value(x[Eigen::Index(i)], pv);
        return out;
    };
    const auto chisq = [&](const Eigen::VectorXd& params) {
        const Eigen::VectorXd r = y - predict(params);
        return double((r.array().square() * w.array()).sum());
    };

    const int k = int(free.size());
    Eigen::MatrixXd jac(npts, k);
    Eigen::MatrixXd jtwj(k, k);
    const auto build_jacobian = [&](const Eigen::VectorXd& params, const Eigen::VectorXd& model0) {
        const ParamVector pv = apply_free(start, free, params);
        for (int j = 0; j < k; ++j) {
            const double step =
                1e-6 * param_scale(free[std::size_t(j)], pv, base_model.kernel().sigma_hz) +
                1e-8 * std::abs(params[j]);
            Eigen::VectorXd pj = params;
            pj[j] += step;
            jac.col(j) = (predict(pj) - model0) / step;
        }
        jtwj = jac.transpose() * w.asDiagonal() * jac;
    };

    const auto check_degeneracy = [&]() {
        for (int a = 0; a < k; ++a)
            for (int b = a + 1; b < k; ++b) {
                const double den = std::sqrt(jtwj(a, a) * jtwj(b, b));
                if (den <= 0.0 || std::abs(jtwj(a, b)) / den > 1.0 - 1e-12)
                    throw DegenerateParametersError(
                        std::string("fit_lineshape: singular normal equations, parameters '") +
                            fit_param_name(free[std::size_t(a)]) + "' and '" +
                            fit_param_name(free[std::size_t(b)]) + "' are degenerate",
                        free[std::size_t(a)], free[std::size_t(b)]);
            }
    };

    FitResult result;
    result.parameters = free;
    double chi2 = chisq(p);
    int total_iterations = 0;
    bool converged = false;

    for (int round = 0; round <= options.weight_refinements; ++round) {
        double lambda = 1e-3;
        converged = false;
        for (int it = 0; it < options.max_iterations; ++it) {
            ++total_iterations;
            const Eigen::VectorXd model0 = predict(p);
            build_jacobian(p, model0);
            if (it == 0 && round == 0) check_degeneracy();
            const Eigen::VectorXd grad = jac.transpose() * (w.array() * (y - model0).array()).matrix();

            bool improved = false;
            double rel = 0.0;
            for (int tries = 0; tries < 40; ++tries) {
                Eigen::MatrixXd damped = jtwj;
                for (int d = 0; d < k; ++d)
                    damped(d, d) += lambda * std::max(jtwj(d, d), 1e-30);
                const Eigen::LDLT<Eigen::MatrixXd> ldlt(damped);
                if (ldlt.info() != Eigen::Success) {
                    check_degeneracy();
                    lambda *= 10.0;
                    continue;
                }
                const Eigen::VectorXd step = ldlt.solve(grad);
                if (!step.allFinite()) {
                    check_degeneracy();
                    lambda *= 10.0;
                    continue;
                }
                const Eigen::VectorXd pn = p + step;
                const double c2 = chisq(pn);
                if (std::isfinite(c2) && c2 <= chi2) {
                    rel = (chi2 - c2) / std::max(chi2, 1e-300);
                    p = pn;
                    chi2 = c2;
                    lambda = std::max(lambda * 0.3, 1e-14);
                    improved = true;
                    break;
                }
                lambda *= 10.0;
            }
            if (!improved || rel < options.rel_chi2_tol) {
                converged = true;
                break;
            }
        }
        if (round < options.weight_refinements) {
            // projection-noise weights at the fitted model
            const Eigen::VectorXd model0 = predict(p);
            bool changed = false;
            for (std::size_t i = 0; i < npts; ++i) {
                const int n = data.points[i].shots;
                const double lo = 0.5 / (n + 1.0);
                const double pm = std::clamp(model0[Eigen::Index(i)], lo, 1.0 - lo);
                const double wi = n / (pm * (1.0 - pm));
                if (std::abs(wi - w[Eigen::Index(i)]) > 1e-9 * wi) changed = true;
                w[Eigen::Index(i)] = wi;
            }
            if (!changed) break;
            chi2 = chisq(p);
        }
    }

    // final covariance at the solution
    const Eigen::VectorXd model0 = predict(p);
    build_jacobian(p, model0);
    check_degeneracy();
    const Eigen::MatrixXd cov = jtwj.inverse();

    result.values.assign(p.data(), p.data() + k);
    result.errors.resize(std::size_t(k));
    result.covariance.resize(std::size_t(k) * std::size_t(k));
    for (int a = 0; a < k; ++a) {
        result.errors[std::size_t(a)] = std::sqrt(std::max(cov(a, a), 0.0));
        for (int b = 0; b < k; ++b)
            result.covariance[std::size_t(a * k + b)] = cov(a, b);
    }
    result.chi_square = chi2;
    result.degrees_of_freedom = int(npts) - k;
    result.converged = converged;
    result.iterations = total_iterations;

    const ParamVector pv = apply_free(start, free, p);
    result.amplitude = pv.amplitude;
    result.baseline = pv.baseline;
    result.model = base_model;
    result.model.omega0_hz = pv.omega0;
    result.model.drive.field_v_per_m = pv.e_ion;
    if (pv.beta_alpha) {
        const double e2f = pv.e_ion * pv.e_ion;
        result.model.alpha_mhz_per_vcm2 =
            e2f > 0.0 ? 8.0 * base_model.drive.drive_frequency_hz * (*pv.beta_alpha) / e2f * 1e-2
                      : 0.0;
    } else {
        result.model.alpha_mhz_per_vcm2 = pv.alpha;
    }
    if (base_model.drive.wavenumber_rad_per_m > 0.0)
        result.model.drive.micromotion_amplitude_m =
            pv.beta_mm / base_model.drive.wavenumber_rad_per_m;
    return result;
}

double fit_model_value(const FitResult& fit, double x_hz, double tail_tolerance) {
    ParamVector pv{};
    pv.omega0 = fit.model.omega0_hz;
    pv.alpha = fit.model.alpha_mhz_per_vcm2;
    pv.amplitude = fit.amplitude;
    pv.baseline = fit.baseline;
    pv.e_ion = fit.model.drive.field_v_per_m;
    pv.beta_mm = fit.model.drive.wavenumber_rad_per_m * fit.model.drive.micromotion_amplitude_m;
    const LineEvaluator ev = make_evaluator(pv, fit.model, tail_tolerance);
    return ev.value(x_hz, pv);
}

}  // namespace rydion
