#include "zenolind/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

namespace zenolind::lme {


using ops::unvectorize;
using ops::vectorize;

namespace {

constexpr int kSuperopGuard = 4096; // largest allowed d² for dense superoperators

double operator_two_norm(const Matrix& a) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(a.adjoint() * a, Eigen::EigenvaluesOnly);
    return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

Complex matrix_trace(const Vector& vec_rho, int d) {
    Complex tr = 0.0;
    for (int i = 0; i < d; ++i) tr += vec_rho(i + static_cast<Eigen::Index>(i) * d);
    return tr;
}

} // namespace

void LindbladModel::validate() const {
    if (gamma <= 0.0) throw std::invalid_argument("LindbladModel: gamma must be positive");
    if (hamiltonian.space != space) throw std::invalid_argument("LindbladModel: Hamiltonian space mismatch");
    if (!ops::is_hermitian(hamiltonian.entries)) {
        throw NumericalContractError("LindbladModel: Hamiltonian is not Hermitian to 1e-10");
    }
    for (const auto& [l, rate] : jumps) {
        if (l.space != space) throw std::invalid_argument("LindbladModel: jump operator space mismatch");
        if (rate < 0.0) throw std::invalid_argument("LindbladModel: negative jump rate");
    }
}

void DensityMatrix::validate(double slack) const {
    const Matrix& m = op.entries;
    if ((m - m.adjoint()).norm() > 1e-9 * slack * std::max(1.0, m.norm())) {
        throw NumericalContractError("DensityMatrix: not Hermitian");
    }
    if (std::abs(m.trace() - Complex(1.0)) > 1e-9 * slack) {
        throw NumericalContractError("DensityMatrix: trace differs from 1");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-8 * slack) {
        throw NumericalContractError("DensityMatrix: negative eigenvalue beyond tolerance");
    }
}

Matrix dissipator_apply(const Matrix& l, const Matrix& x) {
    const Matrix ldl = l.adjoint() * l;
    return l * x * l.adjoint() - 0.5 * (ldl * x + x * ldl);
}

Operator dissipator_apply(const Operator& l, const Operator& x) {
    if (l.space != x.space) throw std::invalid_argument("dissipator_apply: operand spaces differ");
    return Operator(x.space, dissipator_apply(l.entries, x.entries));
}

Operator liouvillian_apply(const LindbladModel& m, const Operator& rho, bool rescaled) {
    if (rho.space != m.space) throw std::invalid_argument("liouvillian_apply: state space mismatch");
    Matrix diss = Matrix::Zero(rho.dim(), rho.dim());
    for (const auto& [l, rate] : m.jumps) diss += rate * dissipator_apply(l.entries, rho.entries);
    const Matrix comm = ops::commutator(m.hamiltonian.entries, rho.entries);
    Matrix out = rescaled ? Matrix(diss - (kImag / m.gamma) * comm)
                          : Matrix(-kImag * comm + m.gamma * diss);
    return Operator(rho.space, std::move(out));
}

Matrix superoperator_matrix(const LindbladModel& m, bool rescaled) {
    const int d = m.space.total_dim();
    if (d * d > kSuperopGuard) {
        throw std::invalid_argument("superoperator_matrix: dimension guard d^2 <= 4096 exceeded");
    }
    const Matrix id = ops::identity_matrix(d);
    const Matrix& h = m.hamiltonian.entries;
    Matrix comm = -kImag * (ops::kron(id, h) - ops::kron(h.transpose(), id));
    Matrix diss = Matrix::Zero(d * d, d * d);
    for (const auto& [jump, rate] : m.jumps) {
        const Matrix& l = jump.entries;
        const Matrix ldl = l.adjoint() * l;
        diss += rate * (ops::kron(l.conjugate(), l) - 0.5 * ops::kron(id, ldl)
                        - 0.5 * ops::kron(ldl.transpose(), id));
    }
    return rescaled ? Matrix(diss + comm / m.gamma) : Matrix(comm + m.gamma * diss);
}

Matrix dissipator_superoperator(const LindbladModel& m) {
    LindbladModel unit = m;
    unit.hamiltonian.entries.setZero();
    unit.gamma = 1.0;
    return superoperator_matrix(unit, false);
}

namespace {

// RK4 applied to the linear autonomous system ρ' = Mρ is the fixed polynomial
// map ρ ← (I + hM + h²M²/2 + h³M³/6 + h⁴M⁴/24) ρ.
Matrix rk4_transfer(const Matrix& m_scaled) {
    const Eigen::Index n = m_scaled.rows();
    Matrix t = Matrix::Identity(n, n) + m_scaled;
    Matrix power = m_scaled;
    double fact = 1.0;
    for (int k = 2; k <= 4; ++k) {
        power = power * m_scaled;
        fact *= k;
        t += power / fact;
    }
    return t;
}

Matrix matrix_power(Matrix base, long long exponent) {
    Matrix result = Matrix::Identity(base.rows(), base.cols());
    while (exponent > 0) {
        if (exponent & 1) result = result * base;
        exponent >>= 1;
        if (exponent > 0) base = base * base;
    }
    return result;
}

struct StepPlan {
    double h = 0.0;             // step inside full recording intervals
    long long per_interval = 0; // steps per full interval
    int intervals = 0;          // number of full intervals
    double tail = 0.0;          // leftover duration after the last full interval
    double h_tail = 0.0;
    long long tail_steps = 0;
};

StepPlan plan_steps(const LindbladModel& m, double t_end, double record_every, int refinement) {
    if (t_end <= 0.0 || record_every <= 0.0) {
        throw std::invalid_argument("evolve: t_end and record_every must be positive");
    }
    if (refinement < 1) throw std::invalid_argument("evolve: step_refinement must be >= 1");
    double gamma_max = 0.0;
    for (const auto& [l, rate] : m.jumps) {
        const double nrm = operator_two_norm(l.entries);
        gamma_max = std::max(gamma_max, rate * nrm * nrm);
    }
    const double scale = m.gamma * gamma_max + m.hamiltonian.entries.norm();
    double h = 0.05;
    if (scale > 0.0) h = std::min(h, 0.1 / scale);
    h /= refinement;

    StepPlan plan;
    plan.per_interval = static_cast<long long>(std::ceil(record_every / h - 1e-12));
    plan.h = record_every / static_cast<double>(plan.per_interval);
    plan.intervals = static_cast<int>(std::floor(t_end / record_every + 1e-9));
    plan.tail = t_end - plan.intervals * record_every;
    if (plan.tail > 1e-9 * record_every) {
        plan.tail_steps = static_cast<long long>(std::ceil(plan.tail / h - 1e-12));
        plan.h_tail = plan.tail / static_cast<double>(plan.tail_steps);
    } else {
        plan.tail = 0.0;
    }
    return plan;
}

void check_recorded_state(const Matrix& rho, int step_index) {
    const double herm = (rho - rho.adjoint()).norm();
    const double tr_err = std::abs(rho.trace() - Complex(1.0));
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (rho + rho.adjoint()), Eigen::EigenvaluesOnly);
    const double min_eig = es.eigenvalues().minCoeff();
    if (herm > 1e-6 || tr_err > 1e-6 || min_eig < -1e-6) {
        throw NumericalContractError("evolve: state invariant violated beyond 1e-6 at step " +
                                     std::to_string(step_index));
    }
}

} // namespace

namespace {

double renormalize_trace(Vector& state, int d, long long step_index) {
    const double tr = matrix_trace(state, d).real();
    if (!(std::abs(tr - 1.0) < 0.5)) {
        throw NumericalContractError("evolve: trace collapsed at step " + std::to_string(step_index));
    }
    state /= tr;
    return std::abs(tr - 1.0);
}

} // namespace

Trajectory evolve(const LindbladModel& m, const DensityMatrix& rho0, double t_end,
                  double record_every, const EvolveOptions& options) {
    m.validate();
    rho0.validate();
    if (rho0.op.space != m.space) throw std::invalid_argument("evolve: initial state space mismatch");

    const StepPlan plan = plan_steps(m, t_end, record_every, options.step_refinement);
    const int d = m.space.total_dim();
    const bool superop_ok = static_cast<long long>(d) * d <= kSuperopGuard;
    const long long total_steps = plan.per_interval * plan.intervals + plan.tail_steps;
    const bool use_powers = superop_ok && !options.force_stepwise && total_steps > 256;

    Trajectory traj;
    traj.times.push_back(0.0);
    traj.states.push_back(rho0);
    traj.trace_corrections.push_back(0.0);

    auto record = [&](Vector& state, double time, double duration, double correction,
                      long long step_index) {
        traj.trace_corrections.push_back(correction);
        traj.max_drift_rate = std::max(traj.max_drift_rate, correction / duration);
        Matrix rho = unvectorize(state, d);
        check_recorded_state(rho, static_cast<int>(step_index));
        traj.times.push_back(time);
        traj.states.push_back(DensityMatrix{Operator(m.space, std::move(rho))});
    };

    if (use_powers) {
        const Matrix superop = superoperator_matrix(m, false);
        const Matrix t_interval = matrix_power(rk4_transfer(plan.h * superop), plan.per_interval);
        Vector state = vectorize(rho0.op.entries);
        long long step = 0;
        for (int j = 1; j <= plan.intervals; ++j) {
            state = t_interval * state;
            step += plan.per_interval;
            const double corr = renormalize_trace(state, d, step);
            record(state, j * record_every, record_every, corr, step);
        }
        if (plan.tail > 0.0) {
            const Matrix t_tail = matrix_power(rk4_transfer(plan.h_tail * superop), plan.tail_steps);
            state = t_tail * state;
            step += plan.tail_steps;
            const double corr = renormalize_trace(state, d, step);
            record(state, t_end, plan.tail, corr, step);
        }
        return traj;
    }

    // Step-by-step path; uses the superoperator matvec when it fits.
    Matrix superop;
    if (superop_ok) superop = superoperator_matrix(m, false);
    auto rhs = [&](const Vector& v) -> Vector {
        if (superop_ok) return superop * v;
        const Matrix rho = unvectorize(v, d);
        return vectorize(liouvillian_apply(m, Operator(m.space, rho), false).entries);
    };
    auto rk4_run = [&](Vector& state, double h, long long steps, long long& step) {
        double corr = 0.0;
        for (long long s = 0; s < steps; ++s, ++step) {
            const Vector k1 = rhs(state);
            const Vector k2 = rhs(state + 0.5 * h * k1);
            const Vector k3 = rhs(state + 0.5 * h * k2);
            const Vector k4 = rhs(state + h * k3);
            state += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            corr += renormalize_trace(state, d, step);
        }
        return corr;
    };

    Vector state = vectorize(rho0.op.entries);
    long long step = 0;
    for (int j = 1; j <= plan.intervals; ++j) {
        const double corr = rk4_run(state, plan.h, plan.per_interval, step);
        record(state, j * record_every, record_every, corr, step);
    }
    if (plan.tail > 0.0) {
        const double corr = rk4_run(state, plan.h_tail, plan.tail_steps, step);
        record(state, t_end, plan.tail, corr, step);
    }
    return traj;
}

DensityMatrix ness_full(const LindbladModel& m) {
    m.validate();
    const Matrix superop = superoperator_matrix(m, true);
    const int d = m.space.total_dim();
    const int n = d * d;

    Eigen::BDCSVD<Matrix> svd(superop, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const RealVector& sigma = svd.singularValues(); // descending
    if (n >= 2 && sigma(n - 2) < 1e-8) {
        throw DegenerateKernelError("ness_full: steady state is not unique (kernel dimension > 1)");
    }

    // Replace the row most responsible for the rank deficiency by the trace
    // functional, then solve for the unit-trace kernel vector.
    Eigen::Index replace_row = 0;
    svd.matrixU().col(n - 1).cwiseAbs().maxCoeff(&replace_row);
    Matrix constrained = superop;
    constrained.row(replace_row).setZero();
    for (int i = 0; i < d; ++i) constrained(replace_row, i + static_cast<Eigen::Index>(i) * d) = 1.0;
    Vector rhs = Vector::Zero(n);
    rhs(replace_row) = 1.0;

    const Vector solution = constrained.partialPivLu().solve(rhs);
    const double residual = (superop * solution).norm();
    if (residual > 1e-10) {
        throw NumericalContractError("ness_full: kernel residual " + std::to_string(residual) +
                                     " above 1e-10");
    }

    Matrix rho = unvectorize(solution, d);
    rho = 0.5 * (rho + Matrix(rho.adjoint()));
    rho /= rho.trace().real();
    DensityMatrix out{Operator(m.space, std::move(rho))};
    out.validate();
    return out;
}

std::vector<RealVector> traced_spectrum_series(const Trajectory& traj) {
    std::vector<RealVector> out;
    out.reserve(traj.states.size());
    for (const auto& st : traj.states) {
        const Operator reduced = ops::trace_out_dissipative(st.op);
        Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (reduced.entries + Matrix(reduced.entries.adjoint())),
                                                 Eigen::EigenvaluesOnly);
        RealVector vals = es.eigenvalues();
        std::reverse(vals.begin(), vals.end());
        out.push_back(std::move(vals));
    }
    return out;
}

std::vector<RealVector> population_series(const Trajectory& traj, const Matrix& basis_vectors) {
    std::vector<RealVector> out;
    out.reserve(traj.states.size());
    for (const auto& st : traj.states) {
        const Operator reduced = ops::trace_out_dissipative(st.op);
        if (reduced.entries.rows() != basis_vectors.rows()) {
            throw std::invalid_argument("population_series: basis dimension mismatch");
        }
        RealVector pops(basis_vectors.cols());
        for (Eigen::Index k = 0; k < basis_vectors.cols(); ++k) {
            pops(k) = (basis_vectors.col(k).adjoint() * reduced.entries * basis_vectors.col(k))(0).real();
        }
        out.push_back(std::move(pops));
    }
    return out;
}

} // namespace zenolind::lme
