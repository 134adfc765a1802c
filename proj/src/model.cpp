#include "qcal/model.hpp"

#include <cmath>

#include <unsupported/Eigen/KroneckerProduct>

namespace qcal {

Matrix lowering_operator(int d)
{
    Matrix a = Matrix::Zero(d, d);
    for (int n = 1; n < d; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return a;
}

Matrix number_operator(int d)
{
    Matrix n = Matrix::Zero(d, d);
    for (int k = 0; k < d; ++k) n(k, k) = k;
    return n;
}

namespace {

struct TransmonOps {
    Matrix n_op;
    Matrix anharmonic; // (alpha/2) N(N-1)
    Matrix x_op;       // a + a'
    Matrix y_op;       // i(a' - a)

    explicit TransmonOps(const TransmonParams& p)
    {
        if (p.cutoff_dim < 2) throw invalid_config_error("transmon model: cutoff_dim must be >= 2");
        const int d = p.cutoff_dim;
        const Matrix a = lowering_operator(d);
        const Matrix ad = a.adjoint();
        n_op = number_operator(d);
        anharmonic = 0.5 * p.alpha * n_op * (n_op - Matrix::Identity(d, d));
        x_op = a + ad;
        y_op = kI * (ad - a);
    }

    Matrix drive(Complex f, double r) const
    {
        return 0.5 * r * (f.real() * x_op + f.imag() * y_op);
    }
};

const Matrix2 kPauliX = (Matrix2() << 0, 1, 1, 0).finished();
const Matrix2 kPauliY = (Matrix2() << 0, Complex(0, -1), Complex(0, 1), 0).finished();
const Matrix2 kPauliZ = (Matrix2() << 1, 0, 0, -1).finished();
const Matrix2 kSigmaPlus = (Matrix2() << 0, 1, 0, 0).finished();  // |0><1|

Matrix kron2(const Matrix2& a, const Matrix2& b)
{
    return Eigen::kroneckerProduct(a, b).eval();
}

// RWA factor of s(t)X2~ in the active qubit's rotating frame; reduces to
// cos(dt)X - sin(dt)Y for a real envelope.
Matrix2 spectator_drive_factor(Complex f, double phase)
{
    const Complex g = std::conj(f) * std::exp(kI * phase);
    return (g * kSigmaPlus + std::conj(g) * kSigmaPlus.adjoint()).eval();
}

Matrix2 active_drive_factor(Complex f)
{
    return (f.real() * kPauliX + f.imag() * kPauliY).eval();
}

} // namespace

GeneratorSeries transmon_generator(const TransmonParams& params, const Waveform& w,
                                   const PerturbationVector& c)
{
    const TransmonOps ops(params);
    const Matrix detuning = c.freq_frac * params.omega * ops.n_op;

    GeneratorSeries g;
    g.dt = w.dt;
    g.samples.reserve(w.size());
    for (int k = 0; k < w.size(); ++k)
        g.samples.push_back(ops.anharmonic + detuning +
                            (1.0 + c.amp_frac) * ops.drive(w.samples(k), params.r));
    return g;
}

std::vector<GeneratorSeries> transmon_perturbation_generators(
    const TransmonParams& params, const Waveform& w,
    const std::vector<TransmonChannel>& channels)
{
    const TransmonOps ops(params);
    std::vector<GeneratorSeries> out;
    out.reserve(channels.size());
    for (const TransmonChannel ch : channels) {
        GeneratorSeries g;
        g.dt = w.dt;
        g.samples.reserve(w.size());
        switch (ch) {
        case TransmonChannel::frequency: {
            const Matrix dv = params.omega * ops.n_op;
            for (int k = 0; k < w.size(); ++k) g.samples.push_back(dv);
            break;
        }
        case TransmonChannel::amplitude:
            for (int k = 0; k < w.size(); ++k)
                g.samples.push_back(ops.drive(w.samples(k), params.r));
            break;
        default:
            throw invalid_config_error("transmon_perturbation_generators: unknown channel");
        }
        out.push_back(std::move(g));
    }
    return out;
}

GeneratorSeries spectator_generator(const SpectatorParams& p, const Waveform& w)
{
    const Matrix2 id2 = Matrix2::Identity();
    const Matrix zz = kron2(kPauliZ, kPauliZ);
    const Matrix z1 = kron2(kPauliZ, id2);
    const Matrix z2 = kron2(id2, kPauliZ);
    const double delta = p.delta();

    GeneratorSeries g;
    g.dt = w.dt;
    g.samples.reserve(w.size());
    for (int k = 0; k < w.size(); ++k) {
        const Complex f = w.samples(k);
        const double phase = delta * w.t_mid(k);
        const Matrix2 drive1 = active_drive_factor(f);
        const Matrix2 drive2 = spectator_drive_factor(f, phase);
        Matrix h = 0.5 * p.r * (1.0 + p.c[0]) * kron2(drive1, id2);
        h += 0.5 * p.r * p.c[1] * kron2(kPauliZ, drive2);
        h += 0.5 * p.r * p.c[2] * kron2(drive1, kPauliZ);
        h += 0.5 * p.r * p.c[3] * kron2(id2, drive2);
        h += p.nu_zz * zz;
        h += 0.5 * p.c[4] * p.omega1 * z1;
        h += 0.5 * p.c[5] * p.omega2 * z2;
        g.samples.push_back(std::move(h));
    }
    return g;
}

GeneratorSeries spectator_perturbation_generator(const SpectatorParams& p, const Waveform& w,
                                                 SpectatorChannel ch)
{
    const Matrix2 id2 = Matrix2::Identity();
    const double delta = p.delta();

    GeneratorSeries g;
    g.dt = w.dt;
    g.samples.reserve(w.size());
    for (int k = 0; k < w.size(); ++k) {
        const Complex f = w.samples(k);
        const double phase = delta * w.t_mid(k);
        Matrix dv;
        switch (ch) {
        case SpectatorChannel::amplitude:
            dv = 0.5 * p.r * kron2(active_drive_factor(f), id2);
            break;
        case SpectatorChannel::cross_resonance:
            dv = 0.5 * p.r * kron2(kPauliZ, spectator_drive_factor(f, phase));
            break;
        case SpectatorChannel::reverse_cross_resonance:
            dv = 0.5 * p.r * kron2(active_drive_factor(f), kPauliZ);
            break;
        case SpectatorChannel::crosstalk:
            dv = 0.5 * p.r * kron2(id2, spectator_drive_factor(f, phase));
            break;
        case SpectatorChannel::zz:
            dv = kron2(kPauliZ, kPauliZ);
            break;
        case SpectatorChannel::frequency_active:
            dv = 0.5 * p.omega1 * kron2(kPauliZ, id2);
            break;
        case SpectatorChannel::frequency_spectator:
            dv = 0.5 * p.omega2 * kron2(id2, kPauliZ);
            break;
        default:
            throw invalid_config_error("spectator_perturbation_generator: unknown channel");
        }
        g.samples.push_back(std::move(dv));
    }
    return g;
}

} // namespace qcal
