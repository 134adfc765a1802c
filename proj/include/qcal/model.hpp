#pragma once

#include <array>
#include <vector>

#include "qcal/pulse.hpp"
#include "qcal/types.hpp"

namespace qcal {

// All frequencies in rad/ns.
struct TransmonParams {
    double omega = 2.0 * kPi * 5.0;     // qubit frequency (5 GHz)
    double alpha = -2.0 * kPi * 0.330;  // anharmonicity (-330 MHz)
    double r = 2.0 * kPi * 0.030;       // drive coupling (30 MHz)
    int cutoff_dim = 4;
};

// Fractional shifts of the transmon model: c0 scales omega, c1 scales r.
struct PerturbationVector {
    double freq_frac = 0.0;
    double amp_frac = 0.0;
};

enum class TransmonChannel { frequency, amplitude };

struct SpectatorParams {
    double omega1 = 2.0 * kPi * 5.0;
    double omega2 = 2.0 * kPi * 4.92;   // delta/2pi = -80 MHz
    double r = 2.0 * kPi * 0.030;
    double nu_zz = 2.0 * kPi * 50e-6;   // 50 kHz
    std::array<double, 6> c{};          // c0..c5 of the perturbation expansion

    double delta() const { return omega2 - omega1; }
};

enum class SpectatorChannel {
    amplitude,                // c0
    cross_resonance,          // c1
    reverse_cross_resonance,  // c2
    crosstalk,                // c3
    zz,                       // nu
    frequency_active,         // c4
    frequency_spectator,      // c5
};

// Piecewise-constant Hermitian generator, one matrix per waveform sample.
// Explicit time dependence is frozen at sample midpoints.
struct GeneratorSeries {
    double dt = 0.0;
    std::vector<Matrix> samples;

    int size() const { return static_cast<int>(samples.size()); }
    double duration() const { return size() * dt; }
};

// Truncated ladder operators and friends at dimension d.
Matrix lowering_operator(int d);
Matrix number_operator(int d);

// Rotating-frame RWA generator at the carrier:
//   H_k = c0*omega*N + (alpha/2)N(N-1) + (1+c1)(r/2)[I_k(a+a') + Q_k i(a'-a)]
GeneratorSeries transmon_generator(const TransmonParams& params, const Waveform& w,
                                   const PerturbationVector& c = {});

// Derivative series dH/dc for the requested channels, same frame conventions.
std::vector<GeneratorSeries> transmon_perturbation_generators(
    const TransmonParams& params, const Waveform& w,
    const std::vector<TransmonChannel>& channels);

// Two-qubit RWA generator in the rotating frame of both qubits (active tensor
// spectator); cross terms carry e^{+-i*delta*t} phases frozen per sample.
GeneratorSeries spectator_generator(const SpectatorParams& params, const Waveform& w);

// dH/dc for one spectator channel (the generator is affine in every c_i).
GeneratorSeries spectator_perturbation_generator(const SpectatorParams& params,
                                                 const Waveform& w, SpectatorChannel ch);

} // namespace qcal
