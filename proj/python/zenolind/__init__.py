"""Lindblad dynamics of boundary-driven spin chains and their strong-dissipation reduction."""

from ._core import (  # noqa: F401
    ConfigError,
    EffectiveModel,
    NumericalContractError,
    TargetSpec,
    __version__,
    bloch_frame,
    dissipator_apply,
    dissipator_spectrum,
    hermitian_eig,
    kron,
    markov_chain,
    ness_full,
    partial_trace,
    pauli_x,
    pauli_y,
    pauli_z,
    reduce_chain,
    single_spin_dissipator,
    stationary_reduced_state,
    superoperator_matrix,
    xyz_chain_hamiltonian,
)
