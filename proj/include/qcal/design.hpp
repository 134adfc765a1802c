#pragma once

#include "qcal/model.hpp"
#include "qcal/objectives.hpp"
#include "qcal/optimize.hpp"
#include "qcal/pulse.hpp"
#include "qcal/sim.hpp"
#include "qcal/types.hpp"

namespace qcal {

Matrix2 x_half_pi_target();
Matrix2 x_pi_target();

// Amplitude- and detuning-robust gate design on the d-level transmon:
// infidelity + first-order robustness norms for the frequency and amplitude
// channels + both leakage metrics, scalarized with the given weights.
struct TransmonDesignProblem {
    TransmonParams model;
    SynthesisConfig synth;
    Matrix2 target = x_half_pi_target();
    std::vector<double> weights = kAmpDetuningWeights;
    bool leakage_only_occupation = false; // Nop - P Nop P variant of Eq. (A6)

    ObjectiveReport evaluate(const PulseParams& p) const;
    ObjectiveFn objective() const; // over flattened parameters
    int m_i = 20, m_q = 20;
};

// Spectator-robust design: transmon fidelity/leakage plus the six two-qubit
// first-order objectives of the driven-qubit toggling frame.
struct SpectatorDesignProblem {
    TransmonParams transmon;
    SpectatorParams spectator;
    SynthesisConfig synth;
    Matrix2 target = x_half_pi_target();
    std::vector<double> weights = kSpectatorWeights;
    bool leakage_only_occupation = false;

    ObjectiveReport evaluate(const PulseParams& p) const;
    ObjectiveFn objective() const;
    int m_i = 20, m_q = 20;
};

// 2x2 toggling-frame propagator of the driven qubit under the RWA drive
// (r/2)(I X + Q Y), shared by the spectator objectives and their tests.
PropagatorTrace driven_qubit_trace(const Waveform& w, double r);

// DRAG X_{pi/2} baseline for a model: amplitude solves the pi/4 rotation-area
// condition for the lifted-Gaussian shape, beta defaults to -1/alpha.
Waveform drag_x90_waveform(const TransmonParams& model, double duration_ns, double dt,
                           double sigma_fraction = 0.25, double beta_override = 0.0,
                           double angle = kPi / 2.0);

} // namespace qcal
