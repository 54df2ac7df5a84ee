// markov.hpp — Classical Markov reduction of the effective dynamics on the
// populations of the projected-Hamiltonian eigenstates.

#pragma once

#include <vector>

#include "zenolind/operator_core.hpp"
#include "zenolind/types.hpp"
#include "zenolind/zeno.hpp"

namespace zenolind::markov {

using ops::HermitianEigensystem;

// Rate-matrix orientation: rates(b, a) is the transition rate b → a, so the
// two-state chain with rates(0,1) = u and rates(1,0) = v has stationary
// distribution (v, u)/(u+v). The generator acts on column vectors of
// populations: dν/dτ = F ν with F(a,b) = rates(b,a) for a ≠ b and
// F(a,a) = -Σ_{b≠a} rates(a,b).
struct MarkovChain {
    HermitianEigensystem basis; // eigensystem of the projected Hamiltonian
    RealMatrix rates;
    RealMatrix generator;
    double gamma = 1.0;

    int n_states() const { return static_cast<int>(basis.values.size()); }
};

struct StationaryDistribution {
    RealVector nu;
};

struct PopulationSeries {
    std::vector<double> times;
    std::vector<RealVector> values;
};

// rates(b, a) = (1/Γ) Σ_k rate_k |⟨a|L_k|b⟩|² from the canonical jumps of the
// effective model. Requires a nondegenerate projected-Hamiltonian spectrum
// (relative gap > 1e-8).
MarkovChain markov_rates(const zeno::EffectiveModel& eff);

// Solve F ν = 0 with Σν = 1. Requires a single closed communicating class of
// the support graph of the rates.
StationaryDistribution stationary_distribution(const MarkovChain& chain);

// ν(t) = exp(F t) ν(0) on the recording grid.
PopulationSeries evolve_populations(const MarkovChain& chain, const RealVector& nu0, double t_end,
                                    double record_every);

// R = Σ_a ν_a |a⟩⟨a| in the given eigenbasis.
ops::Matrix assemble_R_infinity(const StationaryDistribution& nu, const HermitianEigensystem& basis);

} // namespace zenolind::markov
