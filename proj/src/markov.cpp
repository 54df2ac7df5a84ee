#include "zenolind/markov.hpp"

#include <cmath>
#include <string>

#include <Eigen/LU>
#include <unsupported/Eigen/MatrixFunctions>

namespace zenolind::markov {



MarkovChain markov_rates(const zeno::EffectiveModel& eff) {
    MarkovChain chain;
    chain.gamma = eff.gamma;
    chain.basis = ops::hermitian_eig(eff.h_d);

    const int n = chain.n_states();
    const double range = chain.basis.values(n - 1) - chain.basis.values(0);
    for (int a = 0; a + 1 < n; ++a) {
        const double gap = chain.basis.values(a + 1) - chain.basis.values(a);
        if (gap <= 1e-8 * std::max(range, 1e-300)) {
            throw DegenerateSpectrumError(
                "markov_rates: projected Hamiltonian levels " + std::to_string(a) + " and " +
                std::to_string(a + 1) + " are degenerate (values " +
                std::to_string(chain.basis.values(a)) + ", " + std::to_string(chain.basis.values(a + 1)) +
                ")");
        }
    }

    chain.rates = RealMatrix::Zero(n, n);
    for (const auto& jump : eff.generator.jumps) {
        const Matrix in_basis = chain.basis.vectors.adjoint() * jump.op * chain.basis.vectors;
        for (int b = 0; b < n; ++b)
            for (int a = 0; a < n; ++a) {
                if (a == b) continue;
                chain.rates(b, a) += jump.rate * std::norm(in_basis(a, b)) / eff.gamma;
            }
    }

    chain.generator = RealMatrix::Zero(n, n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            if (a == b) continue;
            chain.generator(a, b) = chain.rates(b, a);
            chain.generator(a, a) -= chain.rates(a, b);
        }
    return chain;
}

namespace {

// Exactly one closed communicating class guarantees a unique stationary state.
void check_single_closed_class(const RealMatrix& rates) {
    const int n = static_cast<int>(rates.rows());
    const double threshold = 1e-14 * std::max(1.0, rates.maxCoeff());

    // Reachability closure on the support graph.
    std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
    for (int i = 0; i < n; ++i) {
        reach[i][i] = true;
        for (int j = 0; j < n; ++j)
            if (i != j && rates(i, j) > threshold) reach[i][j] = true;
    }
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            if (reach[i][k])
                for (int j = 0; j < n; ++j)
                    if (reach[k][j]) reach[i][j] = true;

    int closed_classes = 0;
    std::vector<bool> counted(n, false);
    for (int i = 0; i < n; ++i) {
        if (counted[i]) continue;
        bool closed = true;
        for (int j = 0; j < n; ++j) {
            if (reach[i][j] && !reach[j][i]) closed = false;
        }
        if (closed) {
            ++closed_classes;
            for (int j = 0; j < n; ++j)
                if (reach[i][j] && reach[j][i]) counted[j] = true;
        }
    }
    if (closed_classes != 1) {
        throw DegenerateKernelError("stationary_distribution: " + std::to_string(closed_classes) +
                                    " closed communicating classes, stationary state not unique");
    }
}

} // namespace

StationaryDistribution stationary_distribution(const MarkovChain& chain) {
    check_single_closed_class(chain.rates);
    const int n = chain.n_states();

    RealMatrix constrained = chain.generator;
    constrained.row(n - 1).setOnes();
    RealVector rhs = RealVector::Zero(n);
    rhs(n - 1) = 1.0;
    RealVector nu = constrained.partialPivLu().solve(rhs);

    const double residual = (chain.generator * nu).norm();
    if (residual > 1e-12 * std::max(1.0, chain.generator.norm())) {
        throw NumericalContractError("stationary_distribution: residual above tolerance");
    }
    for (int i = 0; i < n; ++i) {
        if (nu(i) < -1e-12) {
            throw NumericalContractError("stationary_distribution: negative probability " +
                                         std::to_string(nu(i)));
        }
        nu(i) = std::max(nu(i), 0.0);
    }
    nu /= nu.sum();
    return {nu};
}

PopulationSeries evolve_populations(const MarkovChain& chain, const RealVector& nu0, double t_end,
                                    double record_every) {
    if (nu0.size() != chain.n_states()) {
        throw std::invalid_argument("evolve_populations: initial vector size mismatch");
    }
    if (nu0.minCoeff() < -1e-12 || std::abs(nu0.sum() - 1.0) > 1e-9) {
        throw std::invalid_argument("evolve_populations: initial vector is not a probability vector");
    }
    if (t_end <= 0.0 || record_every <= 0.0) {
        throw std::invalid_argument("evolve_populations: t_end and record_every must be positive");
    }

    const RealMatrix step = (chain.generator * record_every).exp();
    PopulationSeries series;
    RealVector nu = nu0;
    series.times.push_back(0.0);
    series.values.push_back(nu);
    const int intervals = static_cast<int>(std::floor(t_end / record_every + 1e-9));
    for (int j = 1; j <= intervals; ++j) {
        nu = step * nu;
        series.times.push_back(j * record_every);
        series.values.push_back(nu);
    }
    const double tail = t_end - intervals * record_every;
    if (tail > 1e-9 * record_every) {
        nu = (chain.generator * tail).exp() * nu;
        series.times.push_back(t_end);
        series.values.push_back(nu);
    }
    for (const RealVector& v : series.values) {
        if (std::abs(v.sum() - 1.0) > 1e-12) {
            throw NumericalContractError("evolve_populations: probability not conserved");
        }
    }
    return series;
}

Matrix assemble_R_infinity(const StationaryDistribution& nu, const HermitianEigensystem& basis) {
    if (nu.nu.size() != basis.values.size()) {
        throw std::invalid_argument("assemble_R_infinity: size mismatch");
    }
    const int n = static_cast<int>(nu.nu.size());
    Matrix r = Matrix::Zero(n, n);
    for (int a = 0; a < n; ++a) {
        r += nu.nu(a) * Matrix(basis.vectors.col(a) * basis.vectors.col(a).adjoint());
    }
    return r;
}

} // namespace zenolind::markov
