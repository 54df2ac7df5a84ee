#include "zenolind/operator_core.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace zenolind::ops {

Operator::Operator(TensorSpace s, Matrix m) : space(std::move(s)), entries(std::move(m)) {
    if (entries.rows() != space.total_dim() || entries.cols() != space.total_dim()) {
        throw std::invalid_argument("Operator: matrix size does not match space dimension");
    }
}

Matrix pauli_x() {
    Matrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

Matrix pauli_y() {
    Matrix m(2, 2);
    m << 0, Complex(0, -1), Complex(0, 1), 0;
    return m;
}

Matrix pauli_z() {
    Matrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

Matrix identity_matrix(int n) { return Matrix::Identity(n, n); }

Matrix kron(const Matrix& a, const Matrix& b) {
    const Eigen::Index ar = a.rows(), ac = a.cols(), br = b.rows(), bc = b.cols();
    Matrix out(ar * br, ac * bc);
    for (Eigen::Index i = 0; i < ar; ++i)
        for (Eigen::Index j = 0; j < ac; ++j) out.block(i * br, j * bc, br, bc) = a(i, j) * b;
    return out;
}

Operator kron(const Operator& a, const Operator& b) {
    std::vector<int> dims = a.space.dims();
    dims.insert(dims.end(), b.space.dims().begin(), b.space.dims().end());
    std::vector<int> diss = a.space.dissipative_sites();
    const int offset = a.space.n_sites();
    for (int s : b.space.dissipative_sites()) diss.push_back(s + offset);
    return Operator(TensorSpace(std::move(dims), std::move(diss)), kron(a.entries, b.entries));
}

namespace {

void check_sites(const TensorSpace& space, const std::vector<int>& sites) {
    for (int s : sites) {
        if (s < 0 || s >= space.n_sites()) throw std::invalid_argument("factor index out of range");
    }
}

} // namespace

Operator partial_trace(const Operator& x, const std::vector<int>& over) {
    std::vector<int> traced = over;
    std::sort(traced.begin(), traced.end());
    traced.erase(std::unique(traced.begin(), traced.end()), traced.end());
    check_sites(x.space, traced);
    if (traced.size() != over.size()) throw std::invalid_argument("partial_trace: duplicate factor index");

    const TensorSpace scratch = x.space.with_dissipative(traced);
    const int d = scratch.total_dim();
    const int d_tr = scratch.dissipative_dim();
    const int d_keep = scratch.free_dim();

    // Full-space offsets contributed by each kept (resp. traced) sub-index.
    std::vector<int> keep_offset(d_keep, 0), trace_offset(d_tr, 0);
    for (int i = 0; i < d; ++i) {
        int off = 0;
        for (int s : traced) off += scratch.digit(i, s) * scratch.stride(s);
        trace_offset[scratch.dissipative_index(i)] = off;
        keep_offset[scratch.free_index(i)] = i - off;
    }

    Matrix out = Matrix::Zero(d_keep, d_keep);
    for (int r = 0; r < d_keep; ++r)
        for (int c = 0; c < d_keep; ++c) {
            Complex sum = 0.0;
            for (int t = 0; t < d_tr; ++t)
                sum += x.entries(keep_offset[r] + trace_offset[t], keep_offset[c] + trace_offset[t]);
            out(r, c) = sum;
        }

    // Remaining dissipative marks, re-indexed into the reduced space.
    std::vector<int> new_diss;
    const std::vector<int> kept_sites = scratch.free_sites();
    for (std::size_t k = 0; k < kept_sites.size(); ++k) {
        const auto& old_diss = x.space.dissipative_sites();
        if (std::find(old_diss.begin(), old_diss.end(), kept_sites[k]) != old_diss.end()) {
            new_diss.push_back(static_cast<int>(k));
        }
    }
    return Operator(TensorSpace(scratch.free_dims(), std::move(new_diss)), std::move(out));
}

Operator trace_out_dissipative(const Operator& x) {
    return partial_trace(x, x.space.dissipative_sites());
}

Matrix commutator(const Matrix& h, const Matrix& x) { return h * x - x * h; }

Operator commutator(const Operator& h, const Operator& x) {
    if (h.space != x.space) throw std::invalid_argument("commutator: operand spaces differ");
    return Operator(h.space, commutator(h.entries, x.entries));
}

Operator dagger(const Operator& x) { return Operator(x.space, x.entries.adjoint()); }

double frobenius_norm(const Operator& x) { return x.entries.norm(); }

bool is_hermitian(const Matrix& a, double rel_tol) {
    const double scale = a.norm();
    return (a - a.adjoint()).norm() <= rel_tol * std::max(scale, 1e-300);
}

namespace {

void fix_phases(Matrix& vectors) {
    for (Eigen::Index c = 0; c < vectors.cols(); ++c) {
        Eigen::Index imax = 0;
        double best = -1.0;
        for (Eigen::Index r = 0; r < vectors.rows(); ++r) {
            const double mag = std::abs(vectors(r, c));
            if (mag > best + 1e-14) {
                best = mag;
                imax = r;
            }
        }
        const Complex pivot = vectors(imax, c);
        if (std::abs(pivot) > 0) vectors.col(c) *= std::conj(pivot) / std::abs(pivot);
    }
}

} // namespace

HermitianEigensystem hermitian_eig(const Matrix& a) {
    if (!is_hermitian(a)) {
        throw NumericalContractError("hermitian_eig: input is not Hermitian to 1e-10");
    }
    const Matrix sym = 0.5 * (a + a.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
    if (solver.info() != Eigen::Success) {
        throw NumericalContractError("hermitian_eig: eigensolver failed");
    }
    HermitianEigensystem out{solver.eigenvalues(), solver.eigenvectors()};
    fix_phases(out.vectors);

    const double scale = std::max(sym.norm(), 1e-300);
    for (Eigen::Index k = 0; k < out.values.size(); ++k) {
        const double resid = (sym * out.vectors.col(k) - out.values(k) * out.vectors.col(k)).norm();
        if (resid > 1e-10 * scale) {
            throw NumericalContractError("hermitian_eig: eigenpair residual above 1e-10");
        }
    }
    return out;
}

HermitianEigensystem hermitian_eig(const Operator& a) { return hermitian_eig(a.entries); }

Operator embed_local(const Matrix& op, int first_site, const TensorSpace& space) {
    if (op.rows() != op.cols()) throw std::invalid_argument("embed_local: operator must be square");
    if (first_site < 0 || first_site >= space.n_sites()) {
        throw std::invalid_argument("embed_local: site out of range");
    }
    // Determine how many contiguous factors the operator covers.
    int covered = 1;
    long long block = space.dims()[first_site];
    while (block < op.rows()) {
        if (first_site + covered >= space.n_sites()) {
            throw std::invalid_argument("embed_local: operator does not fit inside the space");
        }
        block *= space.dims()[first_site + covered];
        ++covered;
    }
    if (block != op.rows()) {
        throw std::invalid_argument("embed_local: operator dimension does not match factor dims");
    }
    std::vector<int> sites(covered);
    for (int k = 0; k < covered; ++k) sites[k] = first_site + k;

    const TensorSpace scratch = space.with_dissipative(sites);
    const int d = space.total_dim();
    Matrix out(d, d);
    for (int i = 0; i < d; ++i) {
        const int li = scratch.dissipative_index(i);
        const int fi = scratch.free_index(i);
        for (int j = 0; j < d; ++j) {
            const int lj = scratch.dissipative_index(j);
            out(i, j) = (fi == scratch.free_index(j)) ? op(li, lj) : Complex(0.0);
        }
    }
    return Operator(space, std::move(out));
}

Operator split_product(const TensorSpace& space, const Matrix& diss_part, const Matrix& free_part) {
    if (diss_part.rows() != space.dissipative_dim() || diss_part.cols() != space.dissipative_dim()) {
        throw std::invalid_argument("split_product: dissipative block has wrong dimension");
    }
    if (free_part.rows() != space.free_dim() || free_part.cols() != space.free_dim()) {
        throw std::invalid_argument("split_product: free block has wrong dimension");
    }
    const int d = space.total_dim();
    std::vector<int> h0(d), h1(d);
    for (int i = 0; i < d; ++i) {
        h0[i] = space.dissipative_index(i);
        h1[i] = space.free_index(i);
    }
    Matrix out(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) out(i, j) = diss_part(h0[i], h0[j]) * free_part(h1[i], h1[j]);
    return Operator(space, std::move(out));
}

Operator lift_dissipative(const TensorSpace& space, const Matrix& diss_part) {
    return split_product(space, diss_part, identity_matrix(space.free_dim()));
}

Vector vectorize(const Matrix& m) {
    return Eigen::Map<const Vector>(m.data(), m.size());
}

Matrix unvectorize(const Vector& v, int dim) {
    if (v.size() != static_cast<Eigen::Index>(dim) * dim) {
        throw std::invalid_argument("unvectorize: length is not dim^2");
    }
    return Eigen::Map<const Matrix>(v.data(), dim, dim);
}

} // namespace zenolind::ops
