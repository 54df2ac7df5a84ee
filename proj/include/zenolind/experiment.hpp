// experiment.hpp — Config-driven scenarios: full/effective/Markov pipelines and
// CSV emitters for the dissipation-strength sweep, population dynamics and
// spectral-comparison data sets, plus the verification report.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "zenolind/lindblad.hpp"
#include "zenolind/markov.hpp"
#include "zenolind/zeno.hpp"

#include <json.hpp>

namespace zenolind::cli {

struct ScenarioConfig {
    int n_sites = 4;
    std::array<double, 3> couplings{1.0, 1.0, 1.0}; // jx, jy, jz
    zeno::TargetSpec left;
    std::optional<zeno::TargetSpec> right; // absent: dissipation on the first spin only
    double gamma = 1.0;
    double t_end = 3000.0;
    double dt_record = 10.0;
    std::optional<std::vector<double>> initial_R_diagonal; // in the h_D eigenbasis
    std::uint64_t seed = 0;

    void validate() const;
};

struct SweepConfig {
    ScenarioConfig base;
    std::vector<double> gamma_values; // nonempty, strictly increasing

    void validate() const;
};

// Strict parsers: unknown fields are rejected.
ScenarioConfig parse_scenario(const nlohmann::json& j);
SweepConfig parse_sweep(const nlohmann::json& j);
ScenarioConfig load_scenario(const std::string& path);
SweepConfig load_sweep(const std::string& path);
nlohmann::json scenario_to_json(const ScenarioConfig& cfg);

// Assembled full + effective models for one configuration.
struct Scenario {
    ScenarioConfig config;
    lme::LindbladModel full;
    zeno::EffectiveModel eff;
    Matrix psi0; // composite dark state on the dissipative factors
};

Scenario build_scenario(const ScenarioConfig& cfg);

// ---- reduce -------------------------------------------------------------------

struct ReduceReport {
    Matrix h_d;
    double h_a_norm = 0.0;
    Matrix a_matrix;
    std::vector<double> jump_rates;
    RealVector h_d_eigenvalues;
};

ReduceReport run_reduce(const ScenarioConfig& cfg);
nlohmann::json reduce_report_to_json(const ReduceReport& report);
ReduceReport reduce_report_from_json(const nlohmann::json& j);

// ---- figure pipelines ----------------------------------------------------------

struct SweepResult {
    std::vector<double> gammas;
    std::vector<double> errors; // ‖psi0 ⊗ R_inf - rho_NESS(Γ)‖_F
    double slope = 0.0;         // least-squares log-log fit
};

SweepResult run_gamma_sweep(const SweepConfig& cfg, int threads = 1);
void write_sweep_csv(const SweepResult& result, std::ostream& out);

struct PopulationComparison {
    std::vector<double> times;
    std::vector<RealVector> populations_full;   // ⟨a| tr ρ(τ) |a⟩
    std::vector<RealVector> populations_markov; // ν(τ)
    RealVector nu_infinity;
};

PopulationComparison run_population_comparison(const ScenarioConfig& cfg);
void write_population_csv(const PopulationComparison& result, std::ostream& out);

struct SpectralComparison {
    std::vector<double> times;
    std::vector<RealVector> eigenvalues_full;      // sorted descending
    std::vector<RealVector> eigenvalues_effective; // sorted descending
    RealVector nu_infinity;
};

SpectralComparison run_spectral_comparison(const ScenarioConfig& cfg);
void write_spectral_csv(const SpectralComparison& result, std::ostream& out);

// ---- verification ---------------------------------------------------------------

struct VerificationCheck {
    std::string name;
    double value = 0.0;
    double threshold = 0.0;
    bool passed = false;
};

struct VerificationReport {
    zeno::DysonReport dyson;
    double generator_equivalence = 0.0; // max entrywise |brute force - constructed|
    std::vector<double> leakage_gammas;
    std::vector<double> leakage_norms;
    double leakage_slope = 0.0;
    std::vector<VerificationCheck> checks;

    bool passed() const;
};

VerificationReport run_verification(const ScenarioConfig& cfg);
nlohmann::json verification_report_to_json(const VerificationReport& report);

// ---- small shared helpers --------------------------------------------------------

// 17-significant-digit decimal rendering used by every CSV/JSON emitter.
std::string format_double(double value);

// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

} // namespace zenolind::cli
