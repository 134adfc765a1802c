#include "qcal/pulse.hpp"

#include <cmath>

namespace qcal {

RealVector PulseParams::flatten() const
{
    RealVector v(size());
    v.head(a.size()) = a;
    v.segment(a.size(), b.size()) = b;
    v(v.size() - 1) = phase;
    return v;
}

PulseParams PulseParams::unflatten(const RealVector& v, int m_i, int m_q)
{
    if (v.size() != m_i + m_q + 1)
        throw invalid_config_error("PulseParams::unflatten: vector length mismatch");
    PulseParams p;
    p.a = v.head(m_i);
    p.b = v.segment(m_i, m_q);
    p.phase = v(v.size() - 1);
    return p;
}

SynthesisConfig SynthesisConfig::for_total_samples(int n_total)
{
    SynthesisConfig cfg;
    if (n_total <= cfg.n_pad_left + cfg.n_pad_right)
        throw invalid_config_error("SynthesisConfig: total sample count too small for padding");
    cfg.n_basis_samples = n_total - cfg.n_pad_left - cfg.n_pad_right;
    return cfg;
}

double Waveform::max_abs_iq() const
{
    double m = 0.0;
    for (int k = 0; k < size(); ++k)
        m = std::max({m, std::abs(samples(k).real()), std::abs(samples(k).imag())});
    return m;
}

RealMatrix chebyshev_basis(int m, int n_samples)
{
    if (m < 1) throw invalid_config_error("chebyshev_basis: M must be >= 1");
    if (m > n_samples)
        throw invalid_config_error("chebyshev_basis: more basis functions than samples");
    RealMatrix basis(n_samples, m);
    for (int i = 0; i < n_samples; ++i) {
        const double x = n_samples == 1 ? -1.0 : -1.0 + 2.0 * i / (n_samples - 1);
        basis(i, 0) = 1.0;
        if (m > 1) basis(i, 1) = x;
        for (int k = 2; k < m; ++k)
            basis(i, k) = 2.0 * x * basis(i, k - 1) - basis(i, k - 2);
    }
    return basis;
}

RealVector bound_samples(const RealVector& x)
{
    return x.unaryExpr([](double v) { return std::atan(v) / (kPi / 2.0); });
}

RealVector gaussian_filter(const RealVector& z, double sigma, int radius)
{
    if (!(sigma > 0.0)) throw invalid_config_error("gaussian_filter: sigma must be positive");
    if (radius < 1) throw invalid_config_error("gaussian_filter: radius must be >= 1");
    RealVector kernel(2 * radius + 1);
    for (int j = -radius; j <= radius; ++j)
        kernel(j + radius) = std::exp(-0.5 * j * j / (sigma * sigma));
    kernel /= kernel.sum();

    const int n = static_cast<int>(z.size());
    RealVector out = RealVector::Zero(n);
    for (int i = 0; i < n; ++i) {
        double acc = 0.0;
        const int lo = std::max(-radius, -i);
        const int hi = std::min(radius, n - 1 - i);
        for (int j = lo; j <= hi; ++j) acc += kernel(j + radius) * z(i + j);
        out(i) = acc;
    }
    return out;
}

namespace {

RealVector synthesize_quadrature(const RealVector& coeffs, const SynthesisConfig& cfg)
{
    const RealMatrix basis = chebyshev_basis(static_cast<int>(coeffs.size()), cfg.n_basis_samples);
    const RealVector bounded = bound_samples(basis * coeffs);
    RealVector padded = RealVector::Zero(cfg.total_samples());
    padded.segment(cfg.n_pad_left, cfg.n_basis_samples) = bounded;
    return gaussian_filter(padded, cfg.filter_sigma, cfg.filter_radius);
}

} // namespace

std::pair<Waveform, double> synthesize_envelope_unchecked(const PulseParams& p,
                                                          const SynthesisConfig& cfg)
{
    if (p.a.size() < 1 || p.b.size() < 1)
        throw invalid_config_error("synthesize_envelope: empty coefficient vector");
    if (static_cast<int>(p.a.size()) > cfg.n_basis_samples ||
        static_cast<int>(p.b.size()) > cfg.n_basis_samples)
        throw invalid_config_error("synthesize_envelope: coefficient count exceeds basis samples");
    if (!p.flatten().allFinite())
        throw invalid_config_error("synthesize_envelope: non-finite parameters");

    const RealVector i_env = synthesize_quadrature(p.a, cfg);
    const RealVector q_env = synthesize_quadrature(p.b, cfg);

    Waveform w;
    w.dt = cfg.dt;
    w.samples.resize(cfg.total_samples());
    const Complex rot = std::exp(kI * p.phase);
    for (int k = 0; k < cfg.total_samples(); ++k)
        w.samples(k) = Complex(i_env(k), q_env(k)) * rot;
    const double excess = std::max(0.0, w.max_abs_iq() - 1.0);
    return {std::move(w), excess};
}

Waveform synthesize_envelope(const PulseParams& p, const SynthesisConfig& cfg)
{
    auto [w, excess] = synthesize_envelope_unchecked(p, cfg);
    // The phase rotation mixes the quadratures; boundedness per quadrature is
    // checked rather than re-normalized.
    if (excess > 0.0)
        throw clipping_error("synthesize_envelope: quadrature exceeds unit bound after phase rotation");
    return std::move(w);
}

Waveform drag_envelope(double amp, double sigma_ns, double beta, double duration_ns, double dt)
{
    if (amp < 0.0 || amp > 1.0) throw invalid_config_error("drag_envelope: amp must lie in [0, 1]");
    if (!(sigma_ns > 0.0)) throw invalid_config_error("drag_envelope: sigma must be positive");
    const double n_real = duration_ns / dt;
    const int n = static_cast<int>(std::lround(n_real));
    if (n < 3 || std::abs(n_real - n) > 1e-9)
        throw invalid_config_error("drag_envelope: duration must be a positive multiple of dt");

    // Lifted Gaussian on a grid symmetric about the midpoint, rescaled so the
    // shape peaks at exactly 1 and vanishes at both ends.
    RealVector shape(n);
    const double t_mid = 0.5 * n * dt;
    for (int k = 0; k < n; ++k) {
        const double t = (k + 0.5) * dt;
        shape(k) = std::exp(-0.5 * (t - t_mid) * (t - t_mid) / (sigma_ns * sigma_ns));
    }
    const double g_min = std::min(shape(0), shape(n - 1));
    const double g_max = shape.maxCoeff();
    shape = (shape.array() - g_min) / (g_max - g_min);

    RealVector i_env = amp * shape;
    RealVector dshape(n);
    for (int k = 0; k < n; ++k) {
        const double prev = k > 0 ? shape(k - 1) : 0.0;
        const double next = k + 1 < n ? shape(k + 1) : 0.0;
        dshape(k) = (next - prev) / (2.0 * dt);
    }
    if (amp * (1.0 + std::abs(beta) * dshape.cwiseAbs().maxCoeff()) > 1.0)
        throw clipping_error("drag_envelope: derivative quadrature exceeds unit bound");

    Waveform w;
    w.dt = dt;
    w.samples.resize(n);
    for (int k = 0; k < n; ++k)
        w.samples(k) = Complex(i_env(k), amp * beta * dshape(k));
    return w;
}

} // namespace qcal
