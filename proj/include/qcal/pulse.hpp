#pragma once

#include <vector>

#include "qcal/types.hpp"

namespace qcal {

// Unbounded optimization vector: Chebyshev coefficients for the I and Q
// quadratures plus a global IQ phase rotation.
struct PulseParams {
    RealVector a;       // I-quadrature coefficients
    RealVector b;       // Q-quadrature coefficients
    double phase = 0.0; // radians

    int size() const { return static_cast<int>(a.size() + b.size()) + 1; }
    RealVector flatten() const;
    static PulseParams unflatten(const RealVector& v, int m_i, int m_q);
};

struct SynthesisConfig {
    int n_basis_samples = 302;
    int n_pad_left = 9;
    int n_pad_right = 9;
    double filter_sigma = 2.0; // samples
    int filter_radius = 8;     // samples
    double dt = 1.0 / 4.5;     // ns

    int total_samples() const { return n_basis_samples + n_pad_left + n_pad_right; }
    double duration() const { return total_samples() * dt; }

    // 320 samples (71.11 ns): 71 ns is not sample-exact at dt = 1/4.5 ns.
    static SynthesisConfig for_total_samples(int n_total);
};

struct Waveform {
    double dt = 1.0 / 4.5;
    Vector samples;             // I = Re, Q = Im
    double carrier_freq = 0.0;  // rad/ns, bookkeeping only

    int size() const { return static_cast<int>(samples.size()); }
    double duration() const { return size() * dt; }
    // Sample k represents [k*dt, (k+1)*dt); explicit time dependence is
    // evaluated at the midpoint.
    double t_mid(int k) const { return (k + 0.5) * dt; }
    double max_abs_iq() const;
};

// Column k holds the Chebyshev polynomial T_{k-1} sampled on n equispaced
// points over [-1, 1].
RealMatrix chebyshev_basis(int m, int n_samples);

// y_i = arctan(x_i) / (pi/2), mapping R onto (-1, 1) entrywise.
RealVector bound_samples(const RealVector& x);

// Discrete convolution with a unit-sum truncated Gaussian kernel,
// zero-extension at the boundaries, output length = input length.
RealVector gaussian_filter(const RealVector& z, double sigma, int radius);

// Appendix-style four-step synthesis: basis -> bound -> pad -> filter for each
// quadrature independently, then f = (I + iQ) * exp(i*phase).
Waveform synthesize_envelope(const PulseParams& p, const SynthesisConfig& cfg);

// Same pipeline without the post-rotation bound check; returns how far the
// worst quadrature sample exceeds 1 (0 when in bounds). Objective functions
// use the excess as a smooth penalty so line searches see no hard wall.
std::pair<Waveform, double> synthesize_envelope_unchecked(const PulseParams& p,
                                                          const SynthesisConfig& cfg);

// Gaussian I component lifted to zero at the endpoints and normalized so the
// peak equals amp; Q = beta * dI/dt by central finite differences.
Waveform drag_envelope(double amp, double sigma_ns, double beta, double duration_ns, double dt);

} // namespace qcal
