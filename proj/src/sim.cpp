#include "qcal/sim.hpp"

#include <cmath>

namespace qcal {

namespace {

void check_hermitian(const Matrix& h, int k)
{
    const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
    if ((h - h.adjoint()).cwiseAbs().maxCoeff() > 1e-9 * scale)
        throw numeric_integrity_error("propagate: generator sample " + std::to_string(k) +
                                      " is not Hermitian");
}

// int_0^dt e^{i*delta*s} ds, series-expanded near delta = 0.
Complex phase_integral(double delta, double dt)
{
    const double x = delta * dt;
    if (std::abs(x) < 1e-6) {
        return dt * Complex(1.0 - x * x / 6.0, 0.5 * x - x * x * x / 24.0);
    }
    return (std::exp(kI * x) - 1.0) / (kI * delta);
}

// Exact within-sample toggling integral of a constant matrix B against the
// sample Hamiltonian given by (eigvals, eigvecs):
//   int_0^dt e^{iHs} B e^{-iHs} ds = V [ (V'BV)_mn * phi(l_m - l_n) ] V'
Matrix sample_toggling_integral(const RealVector& eigvals, const Matrix& eigvecs,
                                const Matrix& b, double dt)
{
    const int d = static_cast<int>(eigvals.size());
    Matrix bt = eigvecs.adjoint() * b * eigvecs;
    for (int m = 0; m < d; ++m)
        for (int n = 0; n < d; ++n)
            bt(m, n) *= phase_integral(eigvals(m) - eigvals(n), dt);
    return eigvecs * bt * eigvecs.adjoint();
}

} // namespace

Matrix PropagatorTrace::midpoint(int k) const
{
    const int d = dim();
    Vector half_phase(d);
    for (int i = 0; i < d; ++i) half_phase(i) = std::exp(-kI * eigvals[k](i) * (0.5 * dt));
    return eigvecs[k] * half_phase.asDiagonal() * eigvecs[k].adjoint() * U[k];
}

PropagatorTrace propagate(const GeneratorSeries& g)
{
    if (g.size() == 0) throw invalid_config_error("propagate: empty generator series");
    const int d = static_cast<int>(g.samples.front().rows());

    PropagatorTrace trace;
    trace.dt = g.dt;
    trace.U.reserve(g.size() + 1);
    trace.eigvals.reserve(g.size());
    trace.eigvecs.reserve(g.size());
    trace.U.push_back(Matrix::Identity(d, d));

    Eigen::SelfAdjointEigenSolver<Matrix> solver;
    Vector phases(d);
    for (int k = 0; k < g.size(); ++k) {
        const Matrix& h = g.samples[k];
        check_hermitian(h, k);
        solver.compute(h);
        if (solver.info() != Eigen::Success)
            throw numeric_integrity_error("propagate: eigendecomposition failed");
        trace.eigvals.push_back(solver.eigenvalues());
        trace.eigvecs.push_back(solver.eigenvectors());
        for (int i = 0; i < d; ++i) phases(i) = std::exp(-kI * solver.eigenvalues()(i) * g.dt);
        trace.U.push_back(solver.eigenvectors() * phases.asDiagonal() *
                          solver.eigenvectors().adjoint() * trace.U.back());
    }
    return trace;
}

Matrix first_order_derivative(const PropagatorTrace& trace, const GeneratorSeries& dv)
{
    if (dv.size() != trace.steps())
        throw invalid_config_error("first_order_derivative: series length mismatch");
    if (std::abs(dv.dt - trace.dt) > 1e-12)
        throw invalid_config_error("first_order_derivative: dt mismatch");

    const int d = trace.dim();
    Matrix acc = Matrix::Zero(d, d);
    for (int k = 0; k < trace.steps(); ++k) {
        const Matrix inner =
            sample_toggling_integral(trace.eigvals[k], trace.eigvecs[k], dv.samples[k], trace.dt);
        acc.noalias() += trace.U[k].adjoint() * inner * trace.U[k];
    }
    return -kI * acc;
}

Matrix toggling_integral(const PropagatorTrace& trace, const Matrix& b,
                         const std::vector<Complex>& weights)
{
    if (static_cast<int>(weights.size()) != trace.steps())
        throw invalid_config_error("toggling_integral: weight count mismatch");
    const int d = trace.dim();
    Matrix acc = Matrix::Zero(d, d);
    for (int k = 0; k < trace.steps(); ++k) {
        if (weights[k] == Complex(0.0, 0.0)) continue;
        const Matrix inner =
            sample_toggling_integral(trace.eigvals[k], trace.eigvecs[k], b, trace.dt);
        acc.noalias() += weights[k] * (trace.U[k].adjoint() * inner * trace.U[k]);
    }
    return acc;
}

double average_occupation(const PropagatorTrace& trace, const Matrix& projector,
                          const Matrix& number_op)
{
    double acc = 0.0;
    for (int k = 0; k < trace.steps(); ++k) {
        const Matrix u_mid = trace.midpoint(k);
        const Matrix m = projector * u_mid.adjoint() * number_op * u_mid * projector;
        acc += m.real().trace() * trace.dt;
    }
    return acc / trace.duration();
}

} // namespace qcal
