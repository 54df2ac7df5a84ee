// operator_core.hpp — Dense complex operator algebra on tensor-product spaces

#pragma once

#include <vector>

#include "zenolind/tensor_space.hpp"
#include "zenolind/types.hpp"

namespace zenolind::ops {

// Dense operator tagged with the tensor-factor structure it lives on.
struct Operator {
    TensorSpace space;
    Matrix entries;

    Operator() = default;
    Operator(TensorSpace s, Matrix m);

    int dim() const { return space.total_dim(); }
};

// Real eigenvalues ascending, orthonormal columns, each column rotated so its
// largest-magnitude entry is real and nonnegative.
struct HermitianEigensystem {
    RealVector values;
    Matrix vectors;
};

// ---- elementary 2x2 blocks -------------------------------------------------

Matrix pauli_x();
Matrix pauli_y();
Matrix pauli_z();
Matrix identity_matrix(int n);

// ---- algebra ---------------------------------------------------------------

Operator kron(const Operator& a, const Operator& b);
Matrix kron(const Matrix& a, const Matrix& b);

// Trace over the listed factors; the result lives on the remaining ones.
Operator partial_trace(const Operator& x, const std::vector<int>& over);
// Trace over the dissipative factors of x.space.
Operator trace_out_dissipative(const Operator& x);

Operator commutator(const Operator& h, const Operator& x);
Matrix commutator(const Matrix& h, const Matrix& x);
Operator dagger(const Operator& x);
double frobenius_norm(const Operator& x);

bool is_hermitian(const Matrix& a, double rel_tol = 1e-10);

HermitianEigensystem hermitian_eig(const Operator& a);
HermitianEigensystem hermitian_eig(const Matrix& a);

// I ⊗ ... ⊗ op ⊗ ... ⊗ I with op covering contiguous factors starting at first_site.
Operator embed_local(const Matrix& op, int first_site, const TensorSpace& space);

// Operator acting as `diss_part` on the dissipative factors and `free_part`
// on the remaining ones, whatever the interleaving. Factor order within each
// group is ascending site order.
Operator split_product(const TensorSpace& space, const Matrix& diss_part, const Matrix& free_part);

// split_product with identity on the free factors.
Operator lift_dissipative(const TensorSpace& space, const Matrix& diss_part);

// ---- vectorization (column-major) -------------------------------------------

Vector vectorize(const Matrix& m);
Matrix unvectorize(const Vector& v, int dim);

} // namespace zenolind::ops
