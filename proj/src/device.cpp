#include "qcal/device.hpp"

#include <cmath>

#include "qcal/sim.hpp"

namespace qcal {

namespace {

Vector diag_virtual_z(int d, double theta)
{
    // Carrier phase shift: level n acquires e^{i theta (n - 1/2)}, which is
    // Z_theta on the qubit block up to global phase.
    Vector ph(d);
    for (int n = 0; n < d; ++n) ph(n) = std::exp(kI * theta * (n - 0.5));
    return ph;
}

int sample_binomial(std::mt19937_64& rng, int shots, double p)
{
    p = std::clamp(p, 0.0, 1.0);
    std::binomial_distribution<int> dist(shots, p);
    return dist(rng);
}

double clamp_z_sigma(double z, int shots)
{
    return std::sqrt(std::max(0.0, 1.0 - z * z) / shots);
}

} // namespace

Waveform apply_distortions(const Waveform& w, const DistortionParams& distortion)
{
    Waveform out = w;
    if (distortion.transfer_sigma > 0.0) {
        const int radius = std::max(1, static_cast<int>(std::ceil(4.0 * distortion.transfer_sigma)));
        RealVector i_env(w.size()), q_env(w.size());
        for (int k = 0; k < w.size(); ++k) {
            i_env(k) = w.samples(k).real();
            q_env(k) = w.samples(k).imag();
        }
        i_env = gaussian_filter(i_env, distortion.transfer_sigma, radius);
        q_env = gaussian_filter(q_env, distortion.transfer_sigma, radius);
        for (int k = 0; k < w.size(); ++k) out.samples(k) = Complex(i_env(k), q_env(k));
    }
    out.samples *= distortion.amp_scale;
    if (out.max_abs_iq() > 1.0)
        throw clipping_error("device: waveform exceeds amplitude bound after distortions");
    return out;
}

TransmonDevice::TransmonDevice(const TransmonParams& truth, const DistortionParams& distortion,
                               uint64_t rng_seed, LeakageReadout readout)
    : truth_(truth), distortion_(distortion), rng_seed_(rng_seed), readout_(readout)
{
}

int TransmonDevice::define_pulse(const Waveform& w)
{
    dt_ = w.dt;
    const Waveform distorted = apply_distortions(w, distortion_);
    const PerturbationVector c{distortion_.freq_offset_frac, 0.0};
    const PropagatorTrace trace = propagate(transmon_generator(truth_, distorted, c));
    gate_table_.push_back(trace.final_unitary());
    return static_cast<int>(gate_table_.size()) - 1;
}

int TransmonDevice::define_unitary(const Matrix2& u)
{
    const int d = truth_.cutoff_dim;
    Matrix full = Matrix::Identity(d, d);
    full.topLeftCorner<2, 2>() = u;
    gate_table_.push_back(full);
    return static_cast<int>(gate_table_.size()) - 1;
}

ShotResult TransmonDevice::execute(const Circuit& circuit, int shots) const
{
    if (circuit.init != InitState::ground)
        throw invalid_config_error("TransmonDevice: only ground-state preparation is supported");
    const int d = truth_.cutoff_dim;
    Vector psi = Vector::Zero(d);
    psi(0) = 1.0;
    for (const GateOp& op : circuit.gates) {
        if (op.kind == GateOp::Kind::pulse) {
            if (op.pulse_id < 0 || op.pulse_id >= static_cast<int>(gate_table_.size()))
                throw invalid_config_error("TransmonDevice: unknown pulse id");
            psi = gate_table_[op.pulse_id] * psi;
        } else {
            psi = diag_virtual_z(d, op.theta).cwiseProduct(psi);
        }
    }

    const double p0 = std::norm(psi(0));
    const double p1_qubit = std::norm(psi(1));
    double p1 = readout_ == LeakageReadout::as_one ? 1.0 - p0 : p1_qubit;
    p1 = std::clamp(p1, 0.0, 1.0);

    ShotResult result;
    if (shots <= 0) {
        result.p1_active = p1;
        result.z_active = 1.0 - 2.0 * p1;
        result.shots = 0;
        result.sigma_z = 0.0;
        return result;
    }
    auto rng = stream_rng(rng_seed_, circuit.rng_stream);
    const int ones = sample_binomial(rng, shots, p1);
    result.p1_active = static_cast<double>(ones) / shots;
    result.z_active = 1.0 - 2.0 * result.p1_active;
    result.shots = shots;
    result.sigma_z = clamp_z_sigma(result.z_active, shots);
    return result;
}

SpectatorDevice::SpectatorDevice(const SpectatorParams& truth, const DistortionParams& distortion,
                                 uint64_t rng_seed)
    : truth_(truth), distortion_(distortion), rng_seed_(rng_seed)
{
}

int SpectatorDevice::define_pulse(const Waveform& w)
{
    dt_ = w.dt;
    const Waveform distorted = apply_distortions(w, distortion_);
    const PropagatorTrace trace = propagate(spectator_generator(truth_, distorted));
    gate_table_.push_back(trace.final_unitary());
    return static_cast<int>(gate_table_.size()) - 1;
}

int SpectatorDevice::define_unitary(const Matrix2& u)
{
    Matrix full = Matrix::Zero(4, 4);
    full.block<2, 2>(0, 0) = u(0, 0) * Matrix2::Identity();
    full.block<2, 2>(0, 2) = u(0, 1) * Matrix2::Identity();
    full.block<2, 2>(2, 0) = u(1, 0) * Matrix2::Identity();
    full.block<2, 2>(2, 2) = u(1, 1) * Matrix2::Identity();
    gate_table_.push_back(full);
    return static_cast<int>(gate_table_.size()) - 1;
}

ShotResult SpectatorDevice::execute(const Circuit& circuit, int shots) const
{
    Vector psi = Vector::Zero(4); // basis |active, spectator>
    switch (circuit.init) {
    case InitState::ground: psi(0) = 1.0; break;
    case InitState::plus_x:
        psi(0) = 1.0 / std::sqrt(2.0);
        psi(2) = 1.0 / std::sqrt(2.0);
        break;
    case InitState::minus_x:
        psi(0) = 1.0 / std::sqrt(2.0);
        psi(2) = -1.0 / std::sqrt(2.0);
        break;
    }
    for (const GateOp& op : circuit.gates) {
        if (op.kind == GateOp::Kind::pulse) {
            if (op.pulse_id < 0 || op.pulse_id >= static_cast<int>(gate_table_.size()))
                throw invalid_config_error("SpectatorDevice: unknown pulse id");
            psi = gate_table_[op.pulse_id] * psi;
        } else {
            // Virtual Z on the active qubit only.
            const Complex lo = std::exp(-kI * op.theta * 0.5);
            const Complex hi = std::exp(kI * op.theta * 0.5);
            psi(0) *= lo;
            psi(1) *= lo;
            psi(2) *= hi;
            psi(3) *= hi;
        }
    }

    double prob[4];
    for (int i = 0; i < 4; ++i) prob[i] = std::norm(psi(i));

    ShotResult result;
    if (shots <= 0) {
        result.p1_active = prob[2] + prob[3];
        result.p1_spectator = prob[1] + prob[3];
        result.z_active = 1.0 - 2.0 * result.p1_active;
        return result;
    }

    // Joint multinomial sampling keeps correlated outcomes correlated.
    auto rng = stream_rng(rng_seed_, circuit.rng_stream);
    int counts[4] = {0, 0, 0, 0};
    int remaining = shots;
    double mass = 1.0;
    for (int i = 0; i < 3; ++i) {
        const double p_cond = mass > 0.0 ? std::clamp(prob[i] / mass, 0.0, 1.0) : 0.0;
        counts[i] = sample_binomial(rng, remaining, p_cond);
        remaining -= counts[i];
        mass -= prob[i];
    }
    counts[3] = remaining;

    result.shots = shots;
    result.p1_active = static_cast<double>(counts[2] + counts[3]) / shots;
    result.p1_spectator = static_cast<double>(counts[1] + counts[3]) / shots;
    result.z_active = 1.0 - 2.0 * result.p1_active;
    result.sigma_z = clamp_z_sigma(result.z_active, shots);
    return result;
}

} // namespace qcal
