#include "qcal/design.hpp"

#include <cmath>

namespace qcal {

Matrix2 x_half_pi_target()
{
    const double c = std::cos(kPi / 4.0), s = std::sin(kPi / 4.0);
    return (Matrix2() << c, -kI * s, -kI * s, c).finished();
}

Matrix2 x_pi_target()
{
    return (Matrix2() << 0, -kI, -kI, 0).finished();
}

namespace {

struct TransmonMetrics {
    double fidelity;
    double final_leak;
    double avg_leak;
    double freq_norm;
    double amp_norm;
};

TransmonMetrics transmon_metrics(const TransmonParams& model, const Waveform& w,
                                 const Matrix2& target, bool leakage_only)
{
    const PropagatorTrace trace = propagate(transmon_generator(model, w));
    const SubspaceEmbedding sub = SubspaceEmbedding::lowest_levels(model.cutoff_dim);
    const Matrix& u_final = trace.final_unitary();

    Matrix n_op = number_operator(model.cutoff_dim);
    if (leakage_only) n_op -= sub.P * n_op * sub.P;

    const auto channels = transmon_perturbation_generators(
        model, w, {TransmonChannel::frequency, TransmonChannel::amplitude});
    const Matrix du_freq = u_final * first_order_derivative(trace, channels[0]);
    const Matrix du_amp = u_final * first_order_derivative(trace, channels[1]);

    TransmonMetrics m{};
    m.fidelity = gate_fidelity(u_final, target, sub);
    m.final_leak = final_leakage(u_final, sub.P);
    m.avg_leak = average_occupation(trace, sub.P, n_op);
    m.freq_norm = robustness_norm(du_freq, sub);
    m.amp_norm = robustness_norm(du_amp, sub);
    return m;
}

} // namespace

PropagatorTrace driven_qubit_trace(const Waveform& w, double r)
{
    const Matrix2 x = (Matrix2() << 0, 1, 1, 0).finished();
    const Matrix2 y = (Matrix2() << 0, Complex(0, -1), Complex(0, 1), 0).finished();
    GeneratorSeries g;
    g.dt = w.dt;
    g.samples.reserve(w.size());
    for (int k = 0; k < w.size(); ++k) {
        const Complex f = w.samples(k);
        g.samples.push_back(0.5 * r * (f.real() * x + f.imag() * y));
    }
    return propagate(g);
}

ObjectiveReport TransmonDesignProblem::evaluate(const PulseParams& p) const
{
    const Waveform w = synthesize_envelope(p, synth);
    const TransmonMetrics m = transmon_metrics(model, w, target, leakage_only_occupation);

    ObjectiveReport report;
    report.fidelity = m.fidelity;
    report.final_leakage = m.final_leak;
    report.average_leakage = m.avg_leak;
    report.frequency_robustness = m.freq_norm;
    report.amplitude_robustness = m.amp_norm;
    report.total = scalarize(report.components(false), weights);
    return report;
}

namespace {

// Smooth exterior penalty for the post-rotation quadrature bound, so finite
// differences and line searches never cross a hard wall.
constexpr double kBoundPenalty = 1e4;

} // namespace

ObjectiveFn TransmonDesignProblem::objective() const
{
    return [problem = *this](const RealVector& flat) {
        const PulseParams p = PulseParams::unflatten(flat, problem.m_i, problem.m_q);
        const auto [w, excess] = synthesize_envelope_unchecked(p, problem.synth);
        const TransmonMetrics m =
            transmon_metrics(problem.model, w, problem.target, problem.leakage_only_occupation);
        const std::vector<double> components{1.0 - m.fidelity, m.freq_norm, m.amp_norm,
                                             m.avg_leak, m.final_leak};
        return scalarize(components, problem.weights) + kBoundPenalty * excess * excess;
    };
}

ObjectiveReport SpectatorDesignProblem::evaluate(const PulseParams& p) const
{
    const Waveform w = synthesize_envelope(p, synth);
    const TransmonMetrics m = transmon_metrics(transmon, w, target, leakage_only_occupation);
    const PropagatorTrace trace2 = driven_qubit_trace(w, spectator.r);

    ObjectiveReport report;
    report.fidelity = m.fidelity;
    report.final_leakage = m.final_leak;
    report.average_leakage = m.avg_leak;
    report.frequency_robustness = m.freq_norm;
    report.amplitude_robustness = m.amp_norm;
    report.has_spectator = true;
    report.spectator = spectator_objectives(w, spectator, trace2);
    report.total = scalarize(report.components(true), weights);
    return report;
}

ObjectiveFn SpectatorDesignProblem::objective() const
{
    return [problem = *this](const RealVector& flat) {
        const PulseParams p = PulseParams::unflatten(flat, problem.m_i, problem.m_q);
        const auto [w, excess] = synthesize_envelope_unchecked(p, problem.synth);
        const TransmonMetrics m = transmon_metrics(problem.transmon, w, problem.target,
                                                   problem.leakage_only_occupation);
        const SpectatorObjectives spec =
            spectator_objectives(w, problem.spectator, driven_qubit_trace(w, problem.spectator.r));
        const std::vector<double> components{1.0 - m.fidelity,
                                             spec.cross_resonance,
                                             spec.reverse_cross_resonance,
                                             spec.crosstalk,
                                             spec.zz,
                                             spec.frequency,
                                             m.avg_leak,
                                             m.final_leak};
        return scalarize(components, problem.weights) + kBoundPenalty * excess * excess;
    };
}

Waveform drag_x90_waveform(const TransmonParams& model, double duration_ns, double dt,
                           double sigma_fraction, double beta_override, double angle)
{
    const double sigma = sigma_fraction * duration_ns;
    const double beta = beta_override != 0.0 ? beta_override : -1.0 / model.alpha;

    // Unit-amplitude shape first, then scale so the rotation area gives the
    // requested angle: r * integral(I) = angle.
    const Waveform shape = drag_envelope(1.0, sigma, 0.0, duration_ns, dt);
    double area = 0.0;
    for (int k = 0; k < shape.size(); ++k) area += shape.samples(k).real() * dt;
    const double amp = angle / (model.r * area);
    if (amp > 1.0)
        throw clipping_error("drag_x90_waveform: required amplitude exceeds unit bound");
    return drag_envelope(amp, sigma, beta, duration_ns, dt);
}

} // namespace qcal
