// lindblad.hpp — Lindblad master equation: propagation, superoperator, exact steady state

#pragma once

#include <utility>
#include <vector>

#include "zenolind/operator_core.hpp"
#include "zenolind/types.hpp"

namespace zenolind::lme {

using ops::Operator;
using ops::TensorSpace;

// dρ/dτ = -i[H,ρ] + Γ Σ_k rate_k (L_k ρ L_k† - ½{L_k†L_k, ρ})
struct LindbladModel {
    TensorSpace space;
    Operator hamiltonian;
    std::vector<std::pair<Operator, double>> jumps; // (operator, rate >= 0)
    double gamma = 1.0;                             // global dissipation strength

    void validate() const;
};

struct DensityMatrix {
    Operator op;

    // Hermitian to 1e-9, unit trace to 1e-9, min eigenvalue >= -1e-8
    // (thresholds scaled by `slack`).
    void validate(double slack = 1.0) const;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<DensityMatrix> states;
    // |tr - 1| accumulated per recording interval, before renormalization.
    std::vector<double> trace_corrections;
    // max over intervals of |tr - 1| / interval length.
    double max_drift_rate = 0.0;
};

struct EvolveOptions {
    // Force the plain step-by-step integrator even when the one-step transfer
    // matrix could be powered per recording interval (the two paths produce
    // the same recorded states; powering is much faster for long runs).
    bool force_stepwise = false;
    // Divide the automatic step by this factor (convergence studies).
    int step_refinement = 1;
};

// X ↦ L X L† - ½(L†L X + X L†L), unit rate.
Operator dissipator_apply(const Operator& l, const Operator& x);
Matrix dissipator_apply(const Matrix& l, const Matrix& x);

// Right-hand side of the master equation. rescaled=false: physical time τ.
// rescaled=true: t = Γτ, i.e. D[ρ] - (i/Γ)[H,ρ].
Operator liouvillian_apply(const LindbladModel& m, const Operator& rho, bool rescaled = false);

// Matrix M with vec(Lρ) = M vec(ρ), column-major vectorization.
// Guarded to total_dim² <= 4096.
Matrix superoperator_matrix(const LindbladModel& m, bool rescaled = false);

// Dissipator part alone at unit strength: Σ_k rate_k D_{L_k} as a superoperator.
Matrix dissipator_superoperator(const LindbladModel& m);

// Classical RK4 with fixed step h = min(0.05, 0.1/(Γ·γ_max + ‖H‖_F)), where
// γ_max = max_k rate_k ‖L_k‖₂². The step is shrunk so each recording interval
// holds an integer number of steps; the trace is renormalized along the way
// and the applied corrections are logged per interval.
Trajectory evolve(const LindbladModel& m, const DensityMatrix& rho0, double t_end,
                  double record_every, const EvolveOptions& options = {});

// Exact nonequilibrium steady state: solve M vec(ρ) = 0 with the trace
// constraint spliced in as a row replacement. Fails if the kernel of M is not
// one-dimensional (second-smallest singular value below 1e-8).
DensityMatrix ness_full(const LindbladModel& m);

// Observable helpers on trajectories.
std::vector<RealVector> traced_spectrum_series(const Trajectory& traj);       // sorted descending
std::vector<RealVector> population_series(const Trajectory& traj, const Matrix& basis_vectors);

} // namespace zenolind::lme
