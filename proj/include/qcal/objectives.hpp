#pragma once

#include <map>
#include <string>
#include <vector>

#include "qcal/model.hpp"
#include "qcal/sim.hpp"
#include "qcal/types.hpp"

namespace qcal {

// Isometry embedding the qubit subspace (two lowest levels) into the d-level
// transmon space, with P = A A' the corresponding projector.
struct SubspaceEmbedding {
    Matrix A; // d x 2
    Matrix P; // d x d

    static SubspaceEmbedding lowest_levels(int d);
};

// |Tr(G' A' U A)|^2 / 4
double gate_fidelity(const Matrix& u_final, const Matrix2& target, const SubspaceEmbedding& sub);

// ||(1 - P) U P||_2 (Hilbert-Schmidt)
double final_leakage(const Matrix& u_final, const Matrix& projector);

// ||Phi(dU * A)||_2 with Phi(X A) = X A - Tr(A' X A) A / 2; dU is the model
// derivative dU(T)/dc at c = 0.
double robustness_norm(const Matrix& du, const SubspaceEmbedding& sub);

// Traceless projection on the computational subspace, exposed for tests.
Matrix phi_project(const Matrix& xa, const Matrix& a);

// The six first-order spectator objectives of the two-qubit model, evaluated
// without simulating the spectator: each is ||Phi(integral)||_2 built from the
// 2x2 toggling propagator U(t) of the driven qubit with scalar phases
// e^{+-i*delta*t}. The reverse cross-resonance term shares the amplitude
// term's reduced integrand and the ZZ term shares the frequency term's
// (proportionality constant 1 after dropping the spectator tensor factor).
struct SpectatorObjectives {
    double amplitude = 0.0;
    double cross_resonance = 0.0;
    double reverse_cross_resonance = 0.0;
    double crosstalk = 0.0;
    double zz = 0.0;
    double frequency = 0.0;

    std::map<std::string, double> as_map() const;
};

SpectatorObjectives spectator_objectives(const Waveform& w, const SpectatorParams& params,
                                         const PropagatorTrace& trace2lvl);

// Weighted sum; component 0 of `components` is the infidelity (1 - F).
double scalarize(const std::vector<double>& components, const std::vector<double>& weights);

// Scalar metrics of one design evaluation, serialized with Table-style keys.
struct ObjectiveReport {
    double fidelity = 0.0;
    double final_leakage = 0.0;
    double average_leakage = 0.0;
    double frequency_robustness = 0.0;
    double amplitude_robustness = 0.0;
    bool has_spectator = false;
    SpectatorObjectives spectator;
    double total = 0.0;

    std::vector<double> components(bool with_spectator) const;
    std::map<std::string, double> as_map() const;
};

// Default weights: (infidelity, freq robustness, amp robustness, average
// leakage, final leakage).
inline const std::vector<double> kAmpDetuningWeights{1.0, 5.0, 5.0, 0.1, 1.0};
// (infidelity, CR, reverse CR, crosstalk, ZZ, frequency, avg leak, final leak)
inline const std::vector<double> kSpectatorWeights{1.0, 10.0, 10.0, 1.0, 1.0, 1.0, 0.1, 1.0};

} // namespace qcal
