#pragma once

#include <vector>

#include "qcal/model.hpp"
#include "qcal/types.hpp"

namespace qcal {

// Cumulative propagators of a piecewise-constant generator. U[k] is the
// propagator at the k-th sample boundary (U[0] = identity, U[n] = U(T)).
// The per-sample eigensystems are kept so that toggling-frame integrals can
// be evaluated exactly within each sample.
struct PropagatorTrace {
    double dt = 0.0;
    std::vector<Matrix> U;
    std::vector<RealVector> eigvals;  // of H_k
    std::vector<Matrix> eigvecs;

    int steps() const { return static_cast<int>(eigvals.size()); }
    int dim() const { return U.empty() ? 0 : static_cast<int>(U.front().rows()); }
    const Matrix& final_unitary() const { return U.back(); }
    double duration() const { return steps() * dt; }
    // exp(-i H_k dt/2) U_k, the propagator at the k-th sample midpoint.
    Matrix midpoint(int k) const;
};

// Exact piecewise-constant propagation via Hermitian eigendecomposition.
PropagatorTrace propagate(const GeneratorSeries& g);

// Toggling-frame first-order derivative
//   D = -i * sum_k U_k' [ int_0^dt e^{i H_k s} dV_k e^{-i H_k s} ds ] U_k,
// with the inner integral evaluated exactly in the eigenbasis of H_k. D is
// the derivative of U0(T)' U_c(T) at c = 0 for the discrete-time system; the
// derivative of U_c(T) itself is U(T) * D.
Matrix first_order_derivative(const PropagatorTrace& trace, const GeneratorSeries& dv);

// sum_k w_k * U_k' [ int_0^dt e^{i H_k s} B e^{-i H_k s} ds ] U_k for a fixed
// base matrix B and per-sample scalar weights (no -i prefactor).
Matrix toggling_integral(const PropagatorTrace& trace, const Matrix& b,
                         const std::vector<Complex>& weights);

// Average occupation weighted by the number operator, Eq.-(A6)-style:
//   (1/T) sum_k Tr(P U_mid,k' Nop U_mid,k P) dt  (midpoint rule).
double average_occupation(const PropagatorTrace& trace, const Matrix& projector,
                          const Matrix& number_op);

} // namespace qcal
