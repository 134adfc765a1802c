#include "qcal/objectives.hpp"

#include <cmath>

namespace qcal {

SubspaceEmbedding SubspaceEmbedding::lowest_levels(int d)
{
    if (d < 2) throw invalid_config_error("SubspaceEmbedding: dimension must be >= 2");
    SubspaceEmbedding sub;
    sub.A = Matrix::Zero(d, 2);
    sub.A(0, 0) = 1.0;
    sub.A(1, 1) = 1.0;
    sub.P = sub.A * sub.A.adjoint();
    return sub;
}

double gate_fidelity(const Matrix& u_final, const Matrix2& target, const SubspaceEmbedding& sub)
{
    const Complex tr = (target.adjoint() * (sub.A.adjoint() * u_final * sub.A)).trace();
    return std::norm(tr) / 4.0;
}

double final_leakage(const Matrix& u_final, const Matrix& projector)
{
    const int d = static_cast<int>(u_final.rows());
    const Matrix leak = (Matrix::Identity(d, d) - projector) * u_final * projector;
    return leak.norm();
}

Matrix phi_project(const Matrix& xa, const Matrix& a)
{
    const Complex tr = (a.adjoint() * xa).trace();
    return xa - 0.5 * tr * a;
}

double robustness_norm(const Matrix& du, const SubspaceEmbedding& sub)
{
    return phi_project(du * sub.A, sub.A).norm();
}

namespace {

const Matrix2 kX = (Matrix2() << 0, 1, 1, 0).finished();
const Matrix2 kY = (Matrix2() << 0, Complex(0, -1), Complex(0, 1), 0).finished();
const Matrix2 kZ = (Matrix2() << 1, 0, 0, -1).finished();

double phi_norm_2lvl(const Matrix& m)
{
    return phi_project(m, Matrix::Identity(2, 2)).norm();
}

} // namespace

std::map<std::string, double> SpectatorObjectives::as_map() const
{
    return {
        {"Amplitude uncertainty", amplitude},
        {"Cross-resonance", cross_resonance},
        {"Reverse cross-resonance", reverse_cross_resonance},
        {"Classical cross-talk", crosstalk},
        {"ZZ coupling", zz},
        {"Frequency uncertainty", frequency},
    };
}

SpectatorObjectives spectator_objectives(const Waveform& w, const SpectatorParams& params,
                                         const PropagatorTrace& trace2lvl)
{
    const int n = w.size();
    if (trace2lvl.steps() != n)
        throw invalid_config_error("spectator_objectives: trace/waveform length mismatch");
    const double delta = params.delta();

    std::vector<Complex> w_i(n), w_q(n), w_plus(n), w_minus(n), ones(n);
    Complex crosstalk_plus(0.0, 0.0);
    for (int k = 0; k < n; ++k) {
        const Complex f = w.samples(k);
        const Complex phase = std::exp(kI * delta * w.t_mid(k));
        w_i[k] = 0.5 * f.real();
        w_q[k] = 0.5 * f.imag();
        w_plus[k] = 0.5 * std::conj(f) * phase;
        w_minus[k] = 0.5 * f * std::conj(phase);
        ones[k] = 1.0;
        crosstalk_plus += w_plus[k] * trace2lvl.dt;
    }

    // RWA of s(t) X1~(t) toggled by U(t): (1/2)(I X + Q Y) in the frame of the
    // drive itself.
    const Matrix drive_integral =
        toggling_integral(trace2lvl, kX, w_i) + toggling_integral(trace2lvl, kY, w_q);
    const Matrix z_plus = toggling_integral(trace2lvl, kZ, w_plus);
    const Matrix z_minus = toggling_integral(trace2lvl, kZ, w_minus);
    const Matrix z_plain = toggling_integral(trace2lvl, kZ, ones);

    // Crosstalk integrand commutes with the drive frame; its integral is the
    // plain phase-weighted envelope integral on the spectator qubit.
    const Matrix2 sigma_plus = (Matrix2() << 0, 1, 0, 0).finished();
    const Matrix crosstalk_integral =
        crosstalk_plus * sigma_plus + std::conj(crosstalk_plus) * sigma_plus.adjoint();

    SpectatorObjectives out;
    out.amplitude = phi_norm_2lvl(drive_integral);
    out.cross_resonance = phi_norm_2lvl(z_plus) + phi_norm_2lvl(z_minus);
    out.reverse_cross_resonance = out.amplitude;
    out.crosstalk = phi_norm_2lvl(crosstalk_integral);
    out.frequency = phi_norm_2lvl(z_plain);
    out.zz = out.frequency;
    return out;
}

double scalarize(const std::vector<double>& components, const std::vector<double>& weights)
{
    if (components.size() != weights.size())
        throw invalid_config_error("scalarize: component/weight count mismatch");
    double total = 0.0;
    for (size_t i = 0; i < components.size(); ++i) {
        if (weights[i] < 0.0) throw invalid_config_error("scalarize: negative weight");
        total += weights[i] * components[i];
    }
    return total;
}

std::vector<double> ObjectiveReport::components(bool with_spectator) const
{
    if (with_spectator) {
        return {1.0 - fidelity,          spectator.cross_resonance,
                spectator.reverse_cross_resonance, spectator.crosstalk,
                spectator.zz,            spectator.frequency,
                average_leakage,         final_leakage};
    }
    return {1.0 - fidelity, frequency_robustness, amplitude_robustness, average_leakage,
            final_leakage};
}

std::map<std::string, double> ObjectiveReport::as_map() const
{
    std::map<std::string, double> m{
        {"Gate Fidelity", fidelity},
        {"Frequency Robustness", frequency_robustness},
        {"Amplitude Robustness", amplitude_robustness},
        {"Average leakage", average_leakage},
        {"Final leakage", final_leakage},
        {"Total", total},
    };
    if (has_spectator) {
        const auto spec = spectator.as_map();
        m.insert(spec.begin(), spec.end());
    }
    return m;
}

} // namespace qcal
