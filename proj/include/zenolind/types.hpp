// types.hpp — Shared scalar/matrix aliases and error types

#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace zenolind {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

inline constexpr Complex kImag{0.0, 1.0};

// Raised when a numerical contract is violated (residual above threshold,
// non-PSD coefficient matrix, integration failure, ...).
struct NumericalContractError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Stationary-state solvers: kernel of the generator is not one-dimensional.
struct DegenerateKernelError : NumericalContractError {
    using NumericalContractError::NumericalContractError;
};

// Spectrum of the projected Hamiltonian has (near-)degenerate levels, so the
// population reduction is ill-defined.
struct DegenerateSpectrumError : NumericalContractError {
    using NumericalContractError::NumericalContractError;
};

// Local dissipator is not diagonalizable to working precision.
struct DiagonalizabilityError : NumericalContractError {
    using NumericalContractError::NumericalContractError;
};

// Bad configuration file or command-line input.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace zenolind
