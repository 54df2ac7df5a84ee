// zenolind_main.cpp — Command-line front end: reduce / fig1 / fig2 / fig3 / verify

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "zenolind/experiment.hpp"

namespace {

using namespace zenolind;

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 1;
constexpr int kExitNumericalError = 2;
constexpr int kExitVerificationFailure = 3;

struct CommonArgs {
    std::string config_path;
    std::string out_path;
    std::optional<double> gamma_override;
    int threads = 1;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "Path to the JSON configuration")->required();
    cmd->add_option("--out", args.out_path, "Output file path")->required();
    cmd->add_option("--gamma", args.gamma_override, "Override the configured dissipation strength");
    cmd->add_option("--threads", args.threads, "Worker threads for independent sweep points")
        ->check(CLI::PositiveNumber);
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open output file: " + path);
    return out;
}

cli::ScenarioConfig load_scenario_args(const CommonArgs& args) {
    cli::ScenarioConfig cfg = cli::load_scenario(args.config_path);
    if (args.gamma_override) {
        cfg.gamma = *args.gamma_override;
        cfg.validate();
    }
    return cfg;
}

int run_reduce(const CommonArgs& args) {
    const cli::ScenarioConfig cfg = load_scenario_args(args);
    const cli::ReduceReport report = cli::run_reduce(cfg);
    auto out = open_output(args.out_path);
    out << cli::reduce_report_to_json(report).dump(2) << '\n';
    std::cout << "reduce: " << report.jump_rates.size() << " canonical jump channels, |h_a| = "
              << cli::format_double(report.h_a_norm) << '\n';
    std::cout << "h_D eigenvalues:";
    for (Eigen::Index i = 0; i < report.h_d_eigenvalues.size(); ++i) {
        std::cout << ' ' << cli::format_double(report.h_d_eigenvalues(i));
    }
    std::cout << '\n';
    return kExitOk;
}

int run_fig1(const CommonArgs& args) {
    cli::SweepConfig cfg = cli::load_sweep(args.config_path);
    if (args.gamma_override) {
        cfg.gamma_values = {*args.gamma_override};
        cfg.validate();
    }
    const cli::SweepResult result = cli::run_gamma_sweep(cfg, args.threads);
    auto out = open_output(args.out_path);
    cli::write_sweep_csv(result, out);
    std::cout << "fig1: " << result.gammas.size() << " points, log-log slope "
              << cli::format_double(result.slope) << '\n';
    return kExitOk;
}

int run_fig2(const CommonArgs& args) {
    const cli::ScenarioConfig cfg = load_scenario_args(args);
    const cli::PopulationComparison result = cli::run_population_comparison(cfg);
    auto out = open_output(args.out_path);
    cli::write_population_csv(result, out);
    std::cout << "fig2: " << result.times.size() << " samples to tau = "
              << cli::format_double(result.times.back()) << '\n';
    return kExitOk;
}

int run_fig3(const CommonArgs& args) {
    const cli::ScenarioConfig cfg = load_scenario_args(args);
    const cli::SpectralComparison result = cli::run_spectral_comparison(cfg);
    auto out = open_output(args.out_path);
    cli::write_spectral_csv(result, out);
    std::cout << "fig3: " << result.times.size() << " samples to tau = "
              << cli::format_double(result.times.back()) << '\n';
    return kExitOk;
}

int run_verify(const CommonArgs& args) {
    const cli::ScenarioConfig cfg = load_scenario_args(args);
    const cli::VerificationReport report = cli::run_verification(cfg);
    auto out = open_output(args.out_path);
    out << cli::verification_report_to_json(report).dump(2) << '\n';
    for (const auto& check : report.checks) {
        std::cout << (check.passed ? "[pass] " : "[FAIL] ") << check.name << ": value "
                  << cli::format_double(check.value) << " vs threshold "
                  << cli::format_double(check.threshold) << '\n';
    }
    return report.passed() ? kExitOk : kExitVerificationFailure;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Boundary-driven Lindblad dynamics, strong-dissipation reduction and steady states"};
    app.require_subcommand(1);

    CommonArgs args;
    auto* reduce = app.add_subcommand("reduce", "Report the reduced model for a scenario");
    auto* fig1 = app.add_subcommand("fig1", "Steady-state error vs dissipation strength (CSV)");
    auto* fig2 = app.add_subcommand("fig2", "Eigenstate populations, full vs Markov (CSV)");
    auto* fig3 = app.add_subcommand("fig3", "Reduced-state spectra, full vs effective (CSV)");
    auto* verify = app.add_subcommand("verify", "Run the propagator and generator checks");
    for (auto* cmd : {reduce, fig1, fig2, fig3, verify}) add_common(cmd, args);

    try {
        app.parse(argc, argv);
        if (reduce->parsed()) return run_reduce(args);
        if (fig1->parsed()) return run_fig1(args);
        if (fig2->parsed()) return run_fig2(args);
        if (fig3->parsed()) return run_fig3(args);
        if (verify->parsed()) return run_verify(args);
        return kExitConfigError;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfigError;
    } catch (const zenolind::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const zenolind::NumericalContractError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return kExitNumericalError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumericalError;
    }
}
