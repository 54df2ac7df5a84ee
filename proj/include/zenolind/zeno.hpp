// zeno.hpp — Strong-dissipation reduction: dissipator spectral data, projected
// Hamiltonian, effective Lindblad generator on the dissipation-free factors,
// and the second-order propagator checks backing it.

#pragma once

#include <array>
#include <optional>
#include <vector>

#include "zenolind/lindblad.hpp"
#include "zenolind/operator_core.hpp"
#include "zenolind/types.hpp"

namespace zenolind::zeno {

using lme::LindbladModel;
using ops::Operator;
using ops::TensorSpace;

// Bloch parametrization of the targeted single-spin state: polar angles of
// |0⟩ and mixing parameter mu in [-1, 1] (mu = 1 targets the pure state |0⟩,
// mu = 0 the maximally mixed state; negative mu swaps |0⟩ and |0⊥⟩).
struct TargetSpec {
    double theta = 0.0;
    double phi = 0.0;
    double mu = 1.0;

    void validate() const;
};

// Unit-strength targeting dissipator for one spin: two jump operators whose
// joint dark state is psi0.
struct SingleSpinDissipator {
    Matrix l1; // amplitude sqrt((1+mu)/2), pumps |0⊥⟩ → |0⟩
    Matrix l2; // amplitude sqrt((1-mu)/2), pumps |0⟩ → |0⊥⟩
    Matrix psi0;
};

// Eigen-triples of a local dissipator at unit strength. Index 0 is the dark
// state (unit trace); all other psis are traceless; phis is the dual basis
// with tr(phi_k psi_j) = delta_kj and phi_0 = identity.
struct DissipatorSpectrum {
    std::vector<int> local_dims;
    std::vector<Matrix> psis;
    std::vector<Complex> xis;
    std::vector<Matrix> phis;

    int local_dim() const;
    void validate(const Matrix& dissipator_superop) const;
};

struct CanonicalJump {
    Matrix op;
    double rate = 0.0;
};

// Lindblad form of the second-order generator acting on the dissipation-free
// factors: W R = -i[h_a, R] + Σ_k rate_k (L_k R L_k† - ½{L_k†L_k, R}).
struct EffectiveGenerator {
    Matrix h_a;
    Matrix a_matrix; // Hermitian PSD coefficient matrix over the g operators
    Matrix b_matrix; // Hermitian part feeding h_a
    std::vector<CanonicalJump> jumps;
};

// Complete reduction of a boundary-targeted model.
struct EffectiveModel {
    TensorSpace space;           // full space with dissipative factors marked
    DissipatorSpectrum spectrum; // composite spectrum on the dissipative factors
    Operator h_d;                // dissipation-projected Hamiltonian, on the free factors
    std::vector<Matrix> g_ops;   // component operators for spectrum indices k > 0
    EffectiveGenerator generator;
    double gamma = 1.0;

    // dR/dτ = -i[h_D + h_a/Γ, R] + (1/Γ) W_dissipative[R] as a LindbladModel.
    LindbladModel effective_lme() const;
};

// ---- single-spin targeting --------------------------------------------------

// |0⟩ = (cos(θ/2) e^{-iφ/2}, sin(θ/2) e^{iφ/2}); |0⊥⟩ phased so that
// ⟨0⊥|σ_a|0⟩ = (n' - i n'')_a with the frame below.
Eigen::Vector2cd target_ket(const TargetSpec& spec);
Eigen::Vector2cd target_ket_perp(const TargetSpec& spec);

SingleSpinDissipator single_spin_dissipator(const TargetSpec& spec);

// Closed-form spectrum: eigenvalues (0, -1/2, -1/2, -1) regardless of spec.
DissipatorSpectrum dissipator_spectrum_analytic(const TargetSpec& spec);

// General spectrum from a d0²×d0² dissipator superoperator. Fails on a
// degenerate kernel or an eigenvector matrix with condition number > 1e8.
DissipatorSpectrum dissipator_spectrum_numeric(const Matrix& dissipator_superop,
                                               const std::vector<int>& local_dims);

// Tensor product spectrum: psis kron, duals kron, eigenvalues add.
DissipatorSpectrum compose_spectra(const DissipatorSpectrum& a, const DissipatorSpectrum& b);

// ---- decomposition and generator -------------------------------------------

// C_mn = tr(phi_m† phi_n psi0). Row and column 0 are delta_0n.
Matrix coeffs_C(const DissipatorSpectrum& spectrum);

// g_k = tr over the dissipative factors of (psi_k ⊗ I) H, for every spectrum
// index including 0 (g_0 is the projected Hamiltonian). Verifies the
// reconstruction Σ_n phi_n ⊗ g_n = H.
std::vector<Matrix> hamiltonian_components_g(const Operator& h, const DissipatorSpectrum& spectrum);

// h_D = tr over the dissipative factors of (psi0 ⊗ I) H.
Operator projected_hamiltonian(const Operator& h, const Matrix& psi0);

// Build the Lindblad form of the second-order generator from the coefficient
// matrix, eigenvalues and component operators at indices m, n > 0.
EffectiveGenerator effective_generator(const Matrix& c_positive, const std::vector<Complex>& xis_positive,
                                       const std::vector<Matrix>& g_positive);

// Reduce a chain Hamiltonian with targeting dissipators on the marked factors
// (one TargetSpec per dissipative site, ascending site order). When
// `assert_locality` is set, cross components g_{n_L, n_R} with both indices
// positive must vanish, as they do for nearest-neighbour interactions.
EffectiveModel reduce_targeted_model(const Operator& h, const std::vector<TargetSpec>& targets,
                                     double gamma, bool assert_locality);

// Two-boundary convenience wrapper: dissipation on the first and last spins.
EffectiveModel compose_two_boundary(const Operator& h, const TargetSpec& left, const TargetSpec& right,
                                    double gamma);

// ---- model builders ----------------------------------------------------------

// Open anisotropic XYZ chain: H = Σ_n σ_n · (J σ_{n+1}).
Operator xyz_chain_hamiltonian(int n_sites, double jx, double jy, double jz);

// Orthonormal frame (n, n', n'') attached to the target direction:
// n' = n(π/2-θ, φ+π), n'' = n(π/2, φ+π/2).
std::array<Eigen::Vector3d, 3> bloch_frame(double theta, double phi);

// Full LindbladModel for a chain with targeting dissipators on the marked sites.
LindbladModel targeted_chain_model(const Operator& h, const std::vector<TargetSpec>& targets,
                                   double gamma);

// ---- second-order propagator verification -----------------------------------

struct PropagatorResidual {
    double t = 0.0;
    double gamma = 0.0;
    double residual = 0.0; // spectral norm of the superoperator difference
};

struct DysonReport {
    double pseudo_inverse_residual = 0.0; // max of ‖L0 S - Q0‖, ‖S L0 - Q0‖ (Frobenius)
    double projector_action_residual = 0.0; // max over random X of ‖P0 X - psi0 ⊗ tr X‖
    std::vector<PropagatorResidual> propagator;
};

// Spectral projector onto the kernel of a generator, computed as the limit of
// exp(M t) under repeated squaring. Fails if the limit does not converge.
Matrix kernel_projector(const Matrix& generator);

// Pseudo-inverse S with L0 S = S L0 = Q0, vanishing on the kernel.
Matrix dissipator_pseudo_inverse(const Matrix& dissipator_superop, const Matrix& p0);

// Verify the projector/pseudo-inverse identities and the second-order
// short-time expansion of the projected propagator against the exact matrix
// exponential, at the given rescaled times and dissipation strengths.
DysonReport verify_dyson(const LindbladModel& m, const Matrix& psi0,
                         const std::vector<double>& times = {0.5, 1.0, 2.0},
                         const std::vector<double>& gammas = {50.0, 200.0},
                         std::uint64_t seed = 0);

// Brute-force second-order generator on the free factors,
// -Γ² tr∘(P0 K Q0 S K P0)∘(psi0 ⊗ ·), as a d1²×d1² superoperator matrix.
Matrix brute_force_effective_superoperator(const LindbladModel& m, const Matrix& psi0);

// Superoperator matrix of -i[h_a, ·] + Σ_k rate_k D_{L_k} on the free factors.
Matrix effective_superoperator(const EffectiveGenerator& gen, int dim);

} // namespace zenolind::zeno
