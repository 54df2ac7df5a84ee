#include "zenolind/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <ostream>
#include <set>

#include <Eigen/Eigenvalues>

namespace zenolind::cli {

using nlohmann::json;

using ops::Operator;

// ---- parsing --------------------------------------------------------------------

namespace {

void reject_unknown_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
    if (!j.is_object()) throw ConfigError(where + ": expected a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!allowed.count(it.key())) {
            throw ConfigError(where + ": unknown field '" + it.key() + "'");
        }
    }
}

double require_number(const json& j, const std::string& key, const std::string& where) {
    if (!j.contains(key)) throw ConfigError(where + ": missing field '" + key + "'");
    if (!j.at(key).is_number()) throw ConfigError(where + ": field '" + key + "' must be a number");
    return j.at(key).get<double>();
}

zeno::TargetSpec parse_target(const json& j, const std::string& where) {
    reject_unknown_keys(j, {"theta", "phi", "mu"}, where);
    zeno::TargetSpec spec;
    spec.theta = require_number(j, "theta", where);
    spec.phi = require_number(j, "phi", where);
    spec.mu = require_number(j, "mu", where);
    return spec;
}

} // namespace

void ScenarioConfig::validate() const {
    if (n_sites < 3) throw ConfigError("config: n_sites must be at least 3");
    if (gamma <= 0.0) throw ConfigError("config: gamma must be positive");
    if (t_end <= 0.0 || dt_record <= 0.0) throw ConfigError("config: t_end and dt_record must be positive");
    try {
        left.validate();
        if (right) right->validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    if (initial_R_diagonal) {
        double sum = 0.0;
        for (double v : *initial_R_diagonal) {
            if (v < 0.0) throw ConfigError("config: initial_R_diagonal entries must be nonnegative");
            sum += v;
        }
        if (std::abs(sum - 1.0) > 1e-9) {
            throw ConfigError("config: initial_R_diagonal must sum to 1");
        }
        const int d1 = 1 << (n_sites - (right ? 2 : 1));
        if (static_cast<int>(initial_R_diagonal->size()) != d1) {
            throw ConfigError("config: initial_R_diagonal must have " + std::to_string(d1) + " entries");
        }
    }
}

void SweepConfig::validate() const {
    base.validate();
    if (gamma_values.empty()) throw ConfigError("config: gamma_values must be nonempty");
    for (std::size_t i = 0; i < gamma_values.size(); ++i) {
        if (gamma_values[i] <= 0.0) throw ConfigError("config: gamma_values must be positive");
        if (i > 0 && gamma_values[i] <= gamma_values[i - 1]) {
            throw ConfigError("config: gamma_values must be strictly increasing");
        }
    }
}

ScenarioConfig parse_scenario(const json& j) {
    reject_unknown_keys(j,
                        {"n_sites", "couplings", "left", "right", "gamma", "t_end", "dt_record",
                         "initial_R_diagonal", "seed"},
                        "scenario");
    ScenarioConfig cfg;
    if (!j.contains("n_sites") || !j.at("n_sites").is_number_integer()) {
        throw ConfigError("scenario: missing integer field 'n_sites'");
    }
    cfg.n_sites = j.at("n_sites").get<int>();
    if (!j.contains("couplings") || !j.at("couplings").is_array() || j.at("couplings").size() != 3) {
        throw ConfigError("scenario: 'couplings' must be an array [jx, jy, jz]");
    }
    for (int a = 0; a < 3; ++a) cfg.couplings[a] = j.at("couplings").at(a).get<double>();
    if (!j.contains("left")) throw ConfigError("scenario: missing field 'left'");
    cfg.left = parse_target(j.at("left"), "scenario.left");
    if (j.contains("right")) cfg.right = parse_target(j.at("right"), "scenario.right");
    cfg.gamma = require_number(j, "gamma", "scenario");
    if (j.contains("t_end")) cfg.t_end = require_number(j, "t_end", "scenario");
    if (j.contains("dt_record")) cfg.dt_record = require_number(j, "dt_record", "scenario");
    if (j.contains("initial_R_diagonal")) {
        if (!j.at("initial_R_diagonal").is_array()) {
            throw ConfigError("scenario: 'initial_R_diagonal' must be an array");
        }
        cfg.initial_R_diagonal = j.at("initial_R_diagonal").get<std::vector<double>>();
    }
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    cfg.validate();
    return cfg;
}

SweepConfig parse_sweep(const json& j) {
    reject_unknown_keys(j, {"base", "gamma_values"}, "sweep");
    if (!j.contains("base")) throw ConfigError("sweep: missing field 'base'");
    if (!j.contains("gamma_values") || !j.at("gamma_values").is_array()) {
        throw ConfigError("sweep: 'gamma_values' must be an array");
    }
    SweepConfig cfg;
    cfg.base = parse_scenario(j.at("base"));
    cfg.gamma_values = j.at("gamma_values").get<std::vector<double>>();
    cfg.validate();
    return cfg;
}

namespace {

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ConfigError("config parse error in " + path + ": " + e.what());
    }
    return j;
}

} // namespace

ScenarioConfig load_scenario(const std::string& path) { return parse_scenario(load_json_file(path)); }
SweepConfig load_sweep(const std::string& path) { return parse_sweep(load_json_file(path)); }

json scenario_to_json(const ScenarioConfig& cfg) {
    json j;
    j["n_sites"] = cfg.n_sites;
    j["couplings"] = {cfg.couplings[0], cfg.couplings[1], cfg.couplings[2]};
    j["left"] = {{"theta", cfg.left.theta}, {"phi", cfg.left.phi}, {"mu", cfg.left.mu}};
    if (cfg.right) {
        j["right"] = {{"theta", cfg.right->theta}, {"phi", cfg.right->phi}, {"mu", cfg.right->mu}};
    }
    j["gamma"] = cfg.gamma;
    j["t_end"] = cfg.t_end;
    j["dt_record"] = cfg.dt_record;
    if (cfg.initial_R_diagonal) j["initial_R_diagonal"] = *cfg.initial_R_diagonal;
    j["seed"] = cfg.seed;
    return j;
}

// ---- scenario assembly -------------------------------------------------------------

Scenario build_scenario(const ScenarioConfig& cfg) {
    cfg.validate();
    Scenario s;
    s.config = cfg;

    Operator h = zeno::xyz_chain_hamiltonian(cfg.n_sites, cfg.couplings[0], cfg.couplings[1],
                                             cfg.couplings[2]);
    std::vector<int> diss_sites{0};
    std::vector<zeno::TargetSpec> targets{cfg.left};
    if (cfg.right) {
        diss_sites.push_back(cfg.n_sites - 1);
        targets.push_back(*cfg.right);
    }
    const Operator marked(h.space.with_dissipative(diss_sites), h.entries);

    s.full = zeno::targeted_chain_model(marked, targets, cfg.gamma);
    s.eff = zeno::reduce_targeted_model(marked, targets, cfg.gamma, /*assert_locality=*/true);
    s.psi0 = s.eff.spectrum.psis[0];
    return s;
}

namespace {

// R(0) from its diagonal in the phase-fixed eigenbasis of h_D; uniform if the
// config does not pin one.
RealVector initial_nu(const ScenarioConfig& cfg, int d1) {
    if (cfg.initial_R_diagonal) {
        return Eigen::Map<const RealVector>(cfg.initial_R_diagonal->data(),
                                            static_cast<Eigen::Index>(cfg.initial_R_diagonal->size()));
    }
    return RealVector::Constant(d1, 1.0 / d1);
}

Matrix diagonal_in_basis(const RealVector& diag, const Matrix& vectors) {
    Matrix out = Matrix::Zero(vectors.rows(), vectors.rows());
    for (Eigen::Index a = 0; a < diag.size(); ++a) {
        out += diag(a) * Matrix(vectors.col(a) * vectors.col(a).adjoint());
    }
    return out;
}

} // namespace

// ---- reduce ---------------------------------------------------------------------------

ReduceReport run_reduce(const ScenarioConfig& cfg) {
    const Scenario s = build_scenario(cfg);
    ReduceReport report;
    report.h_d = s.eff.h_d.entries;
    report.h_a_norm = s.eff.generator.h_a.norm();
    report.a_matrix = s.eff.generator.a_matrix;
    for (const auto& jump : s.eff.generator.jumps) report.jump_rates.push_back(jump.rate);
    report.h_d_eigenvalues = ops::hermitian_eig(s.eff.h_d).values;
    return report;
}

namespace {

json complex_matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            row.push_back({m(i, j).real(), m(i, j).imag()});
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

Matrix complex_matrix_from_json(const json& j) {
    const auto rows = static_cast<Eigen::Index>(j.size());
    const auto cols = rows > 0 ? static_cast<Eigen::Index>(j.at(0).size()) : 0;
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index c = 0; c < cols; ++c) {
            m(i, c) = Complex(j.at(i).at(c).at(0).get<double>(), j.at(i).at(c).at(1).get<double>());
        }
    return m;
}

} // namespace

json reduce_report_to_json(const ReduceReport& report) {
    json j;
    j["h_d"] = complex_matrix_to_json(report.h_d);
    j["h_a_norm"] = report.h_a_norm;
    j["a_matrix"] = complex_matrix_to_json(report.a_matrix);
    j["jump_rates"] = report.jump_rates;
    j["h_d_eigenvalues"] = std::vector<double>(report.h_d_eigenvalues.begin(),
                                               report.h_d_eigenvalues.end());
    return j;
}

ReduceReport reduce_report_from_json(const json& j) {
    ReduceReport report;
    report.h_d = complex_matrix_from_json(j.at("h_d"));
    report.h_a_norm = j.at("h_a_norm").get<double>();
    report.a_matrix = complex_matrix_from_json(j.at("a_matrix"));
    report.jump_rates = j.at("jump_rates").get<std::vector<double>>();
    const auto vals = j.at("h_d_eigenvalues").get<std::vector<double>>();
    report.h_d_eigenvalues = Eigen::Map<const RealVector>(vals.data(), static_cast<Eigen::Index>(vals.size()));
    return report;
}

// ---- formatting -------------------------------------------------------------------------

std::string format_double(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw std::invalid_argument("loglog_slope: need at least two points");
    }
    const auto n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// ---- gamma sweep -------------------------------------------------------------------------

SweepResult run_gamma_sweep(const SweepConfig& cfg, int threads) {
    cfg.validate();
    const Scenario base = build_scenario(cfg.base);

    // The reduced steady state does not depend on Γ; compute it once.
    const markov::MarkovChain chain = markov::markov_rates(base.eff);
    const markov::StationaryDistribution nu = markov::stationary_distribution(chain);
    const Matrix r_inf = markov::assemble_R_infinity(nu, chain.basis);
    const Matrix zeno_limit = ops::split_product(base.full.space, base.psi0, r_inf).entries;

    auto error_at = [&](double gamma) {
        lme::LindbladModel model = base.full;
        model.gamma = gamma;
        const lme::DensityMatrix rho = lme::ness_full(model);
        return (zeno_limit - rho.op.entries).norm();
    };

    SweepResult result;
    result.gammas = cfg.gamma_values;
    result.errors.resize(cfg.gamma_values.size());
    if (threads <= 1) {
        for (std::size_t i = 0; i < cfg.gamma_values.size(); ++i) {
            result.errors[i] = error_at(cfg.gamma_values[i]);
        }
    } else {
        std::vector<std::future<double>> futures(cfg.gamma_values.size());
        std::size_t next = 0;
        while (next < futures.size()) {
            const std::size_t batch_end = std::min(futures.size(), next + static_cast<std::size_t>(threads));
            for (std::size_t i = next; i < batch_end; ++i) {
                futures[i] = std::async(std::launch::async, error_at, cfg.gamma_values[i]);
            }
            for (std::size_t i = next; i < batch_end; ++i) result.errors[i] = futures[i].get();
            next = batch_end;
        }
    }
    result.slope = loglog_slope(result.gammas, result.errors);
    return result;
}

void write_sweep_csv(const SweepResult& result, std::ostream& out) {
    out << "gamma,error_frobenius\n";
    for (std::size_t i = 0; i < result.gammas.size(); ++i) {
        out << format_double(result.gammas[i]) << ',' << format_double(result.errors[i]) << '\n';
    }
    out << "# loglog_slope = " << format_double(result.slope) << '\n';
    if (result.slope < -1.15 || result.slope > -0.85) {
        out << "# slope_flag = outside [-1.15, -0.85]; possible symmetry-protected steady state\n";
    }
}

// ---- population comparison ------------------------------------------------------------------

PopulationComparison run_population_comparison(const ScenarioConfig& cfg) {
    const Scenario s = build_scenario(cfg);
    const markov::MarkovChain chain = markov::markov_rates(s.eff);
    const int d1 = chain.n_states();
    const RealVector nu0 = initial_nu(cfg, d1);

    const Matrix r0 = diagonal_in_basis(nu0, chain.basis.vectors);
    const Operator rho0 = ops::split_product(s.full.space, s.psi0, r0);
    const lme::Trajectory traj = lme::evolve(s.full, lme::DensityMatrix{rho0}, cfg.t_end, cfg.dt_record);

    PopulationComparison result;
    result.times = traj.times;
    result.populations_full = lme::population_series(traj, chain.basis.vectors);
    const markov::PopulationSeries series = markov::evolve_populations(chain, nu0, cfg.t_end, cfg.dt_record);
    result.populations_markov = series.values;
    result.nu_infinity = markov::stationary_distribution(chain).nu;
    return result;
}

void write_population_csv(const PopulationComparison& result, std::ostream& out) {
    const Eigen::Index d1 = result.nu_infinity.size();
    out << "tau";
    for (Eigen::Index a = 0; a < d1; ++a) out << ",pop_full_" << a;
    for (Eigen::Index a = 0; a < d1; ++a) out << ",pop_markov_" << a;
    out << '\n';
    for (std::size_t i = 0; i < result.times.size(); ++i) {
        out << format_double(result.times[i]);
        for (Eigen::Index a = 0; a < d1; ++a) out << ',' << format_double(result.populations_full[i](a));
        for (Eigen::Index a = 0; a < d1; ++a) out << ',' << format_double(result.populations_markov[i](a));
        out << '\n';
    }
    // Final row: the stationary distribution both series converge to.
    out << "inf";
    for (int rep = 0; rep < 2; ++rep) {
        for (Eigen::Index a = 0; a < d1; ++a) out << ',' << format_double(result.nu_infinity(a));
    }
    out << '\n';
}

// ---- spectral comparison --------------------------------------------------------------------

SpectralComparison run_spectral_comparison(const ScenarioConfig& cfg) {
    const Scenario s = build_scenario(cfg);
    const markov::MarkovChain chain = markov::markov_rates(s.eff);
    const int d1 = chain.n_states();
    const RealVector nu0 = initial_nu(cfg, d1);

    const Matrix r0 = diagonal_in_basis(nu0, chain.basis.vectors);
    const Operator rho0 = ops::split_product(s.full.space, s.psi0, r0);
    const lme::Trajectory traj_full =
        lme::evolve(s.full, lme::DensityMatrix{rho0}, cfg.t_end, cfg.dt_record);

    const lme::LindbladModel eff_model = s.eff.effective_lme();
    const lme::DensityMatrix r0_state{Operator(eff_model.space, r0)};
    const lme::Trajectory traj_eff = lme::evolve(eff_model, r0_state, cfg.t_end, cfg.dt_record);

    SpectralComparison result;
    result.times = traj_full.times;
    result.eigenvalues_full = lme::traced_spectrum_series(traj_full);
    result.eigenvalues_effective = lme::traced_spectrum_series(traj_eff);
    result.nu_infinity = markov::stationary_distribution(chain).nu;
    return result;
}

void write_spectral_csv(const SpectralComparison& result, std::ostream& out) {
    const Eigen::Index d1 = result.nu_infinity.size();
    out << "tau";
    for (Eigen::Index k = 0; k < d1; ++k) out << ",eig_full_" << k;
    for (Eigen::Index k = 0; k < d1; ++k) out << ",eig_effective_" << k;
    out << '\n';
    for (std::size_t i = 0; i < result.times.size(); ++i) {
        out << format_double(result.times[i]);
        for (Eigen::Index k = 0; k < d1; ++k) out << ',' << format_double(result.eigenvalues_full[i](k));
        for (Eigen::Index k = 0; k < d1; ++k) {
            out << ',' << format_double(result.eigenvalues_effective[i](k));
        }
        out << '\n';
    }
}

// ---- verification ----------------------------------------------------------------------------

bool VerificationReport::passed() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const VerificationCheck& c) { return c.passed; });
}

VerificationReport run_verification(const ScenarioConfig& cfg) {
    const Scenario s = build_scenario(cfg);
    VerificationReport report;

    report.dyson = zeno::verify_dyson(s.full, s.psi0, {0.5, 1.0, 2.0}, {50.0, 200.0}, cfg.seed);

    const int d1 = s.full.space.free_dim();
    const Matrix brute = zeno::brute_force_effective_superoperator(s.full, s.psi0);
    const Matrix constructed = zeno::effective_superoperator(s.eff.generator, d1);
    report.generator_equivalence = (brute - constructed).cwiseAbs().maxCoeff();

    // Distance of the evolved state from the dark-state slice, over a grid of
    // dissipation strengths; should shrink like 1/Γ.
    report.leakage_gammas = {50.0, 100.0, 200.0, 400.0};
    const markov::MarkovChain chain = markov::markov_rates(s.eff);
    const RealVector nu0 = initial_nu(cfg, d1);
    const Matrix r0 = diagonal_in_basis(nu0, chain.basis.vectors);
    for (double gamma : report.leakage_gammas) {
        lme::LindbladModel model = s.full;
        model.gamma = gamma;
        const Operator rho0 = ops::split_product(model.space, s.psi0, r0);
        const lme::Trajectory traj = lme::evolve(model, lme::DensityMatrix{rho0}, 5.0, 0.25);
        double worst = 0.0;
        for (std::size_t i = 0; i < traj.times.size(); ++i) {
            if (traj.times[i] < 1.0) continue;
            const Operator reduced = ops::trace_out_dissipative(traj.states[i].op);
            const Matrix slice = ops::split_product(model.space, s.psi0, reduced.entries).entries;
            worst = std::max(worst, (traj.states[i].op.entries - slice).norm());
        }
        report.leakage_norms.push_back(worst);
    }
    report.leakage_slope = loglog_slope(report.leakage_gammas, report.leakage_norms);

    auto add_check = [&](const std::string& name, double value, double threshold, bool pass_if_below) {
        const bool ok = pass_if_below ? value <= threshold : value >= threshold;
        report.checks.push_back({name, value, threshold, ok});
    };
    add_check("pseudo_inverse_identity", report.dyson.pseudo_inverse_residual, 1e-10, true);
    add_check("projector_action", report.dyson.projector_action_residual, 1e-10, true);
    add_check("generator_equivalence", report.generator_equivalence, 1e-10, true);
    for (std::size_t i = 0; i < report.dyson.propagator.size(); ++i) {
        const auto& p = report.dyson.propagator[i];
        // Second-order accuracy: the residual is dominated by an O(1/Γ²) term.
        add_check("propagator_residual(t=" + format_double(p.t) + ",gamma=" + format_double(p.gamma) + ")",
                  p.residual, 40.0 * (p.t + p.t * p.t * p.t) / (p.gamma * p.gamma), true);
    }
    add_check("leakage_slope_upper", report.leakage_slope, -0.8, true);
    add_check("leakage_slope_lower", -report.leakage_slope, 1.2, true);
    return report;
}

json verification_report_to_json(const VerificationReport& report) {
    json j;
    j["pseudo_inverse_residual"] = report.dyson.pseudo_inverse_residual;
    j["projector_action_residual"] = report.dyson.projector_action_residual;
    j["generator_equivalence"] = report.generator_equivalence;
    json prop = json::array();
    for (const auto& p : report.dyson.propagator) {
        prop.push_back({{"t", p.t}, {"gamma", p.gamma}, {"residual", p.residual}});
    }
    j["propagator_residuals"] = std::move(prop);
    j["leakage_gammas"] = report.leakage_gammas;
    j["leakage_norms"] = report.leakage_norms;
    j["leakage_slope"] = report.leakage_slope;
    json checks = json::array();
    for (const auto& c : report.checks) {
        checks.push_back(
            {{"name", c.name}, {"value", c.value}, {"threshold", c.threshold}, {"passed", c.passed}});
    }
    j["checks"] = std::move(checks);
    j["passed"] = report.passed();
    return j;
}

} // namespace zenolind::cli
