#include "qcal/rb.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

#include "qcal/parallel.hpp"

namespace qcal {

namespace {

Matrix2 rot_z(double theta)
{
    return (Matrix2() << std::exp(-kI * theta * 0.5), 0, 0, std::exp(kI * theta * 0.5))
        .finished();
}

Matrix2 rot_x90()
{
    const double c = std::cos(kPi / 4.0), s = std::sin(kPi / 4.0);
    return (Matrix2() << c, -kI * s, -kI * s, c).finished();
}

// Phase-insensitive fingerprint for group bookkeeping.
bool same_up_to_phase(const Matrix2& a, const Matrix2& b, double tol = 1e-9)
{
    Complex phase(0.0, 0.0);
    for (int i = 0; i < 2 && phase == Complex(0.0, 0.0); ++i)
        for (int j = 0; j < 2; ++j)
            if (std::abs(b(i, j)) > 0.5) {
                phase = a(i, j) / b(i, j);
                break;
            }
    if (phase == Complex(0.0, 0.0)) return false;
    if (std::abs(std::abs(phase) - 1.0) > tol) return false;
    return (a - phase * b).cwiseAbs().maxCoeff() < tol;
}

struct CliffordGroup {
    std::vector<Matrix2> matrices;
    std::vector<CliffordZXZXZ> table;
    std::vector<std::vector<int>> mult;
    std::vector<int> inverse;

    CliffordGroup()
    {
        // Enumerate the group by closure over {X90, Z90} starting from the
        // identity; index 0 is the identity.
        matrices.push_back(Matrix2::Identity());
        const std::vector<Matrix2> gens{rot_x90(), rot_z(kPi / 2.0)};
        for (size_t i = 0; i < matrices.size(); ++i) {
            for (const Matrix2& g : gens) {
                const Matrix2 cand = g * matrices[i];
                bool known = false;
                for (const Matrix2& m : matrices)
                    if (same_up_to_phase(cand, m)) {
                        known = true;
                        break;
                    }
                if (!known) matrices.push_back(cand);
            }
        }
        if (matrices.size() != 24)
            throw internal_consistency_error("clifford_table: group closure size != 24");

        // Match every element to a Z_{a1} X90 Z_{a2} X90 Z_{a3} word with
        // angles in multiples of pi/2.
        const std::array<double, 4> angles{0.0, kPi / 2.0, kPi, -kPi / 2.0};
        const Matrix2 x90 = rot_x90();
        table.resize(24);
        std::vector<bool> found(24, false);
        for (const double a1 : angles)
            for (const double a2 : angles)
                for (const double a3 : angles) {
                    const Matrix2 u = rot_z(a1) * x90 * rot_z(a2) * x90 * rot_z(a3);
                    for (int idx = 0; idx < 24; ++idx) {
                        if (found[idx]) continue;
                        if (same_up_to_phase(u, matrices[idx])) {
                            table[idx] = {idx, {a1, a2, a3}};
                            found[idx] = true;
                        }
                    }
                }
        if (!std::all_of(found.begin(), found.end(), [](bool f) { return f; }))
            throw internal_consistency_error("clifford_table: ZXZXZ decomposition incomplete");

        mult.assign(24, std::vector<int>(24, -1));
        inverse.assign(24, -1);
        for (int i = 0; i < 24; ++i) {
            for (int j = 0; j < 24; ++j) {
                const Matrix2 prod = matrices[i] * matrices[j];
                for (int k = 0; k < 24; ++k)
                    if (same_up_to_phase(prod, matrices[k])) {
                        mult[i][j] = k;
                        break;
                    }
                if (mult[i][j] < 0)
                    throw internal_consistency_error("clifford_table: group not closed");
                if (mult[i][j] == 0) inverse[i] = j;
            }
            if (inverse[i] < 0)
                throw internal_consistency_error("clifford_table: missing inverse");
        }
    }
};

const CliffordGroup& group()
{
    static const CliffordGroup g;
    return g;
}

} // namespace

const std::vector<CliffordZXZXZ>& clifford_table() { return group().table; }
const std::vector<Matrix2>& clifford_matrices() { return group().matrices; }
int clifford_multiply(int lhs, int rhs) { return group().mult[lhs][rhs]; }
int clifford_inverse(int idx) { return group().inverse[idx]; }

std::vector<RBSequence> rb_sequences(const std::vector<int>& lengths, int n_seeds, uint64_t seed)
{
    for (size_t i = 1; i < lengths.size(); ++i)
        if (lengths[i] <= lengths[i - 1])
            throw invalid_config_error("rb_sequences: lengths must be ascending");

    std::vector<RBSequence> sequences;
    sequences.reserve(lengths.size() * n_seeds);
    for (size_t li = 0; li < lengths.size(); ++li) {
        for (int s = 0; s < n_seeds; ++s) {
            auto rng = stream_rng(seed, (static_cast<uint64_t>(li) << 32) | s);
            std::uniform_int_distribution<int> dist(0, 23);
            RBSequence seq;
            seq.m = lengths[li];
            seq.seed_index = s;
            seq.cliffords.reserve(lengths[li] + 1);
            int prod = 0; // identity
            for (int k = 0; k < lengths[li]; ++k) {
                const int c = dist(rng);
                seq.cliffords.push_back(c);
                prod = clifford_multiply(c, prod);
            }
            seq.cliffords.push_back(clifford_inverse(prod));
            sequences.push_back(std::move(seq));
        }
    }
    return sequences;
}

Circuit rb_circuit(const RBSequence& seq, int x90_id, double pre_z, double post_z,
                   uint64_t stream)
{
    const auto& table = clifford_table();
    Circuit circuit;
    circuit.rng_stream = stream;
    circuit.gates.reserve(seq.cliffords.size() * 5);
    auto push_x90 = [&]() {
        if (pre_z != 0.0) circuit.gates.push_back(GateOp::vz(pre_z));
        circuit.gates.push_back(GateOp::pulse_gate(x90_id));
        if (post_z != 0.0) circuit.gates.push_back(GateOp::vz(post_z));
    };
    for (const int c : seq.cliffords) {
        const auto& [idx, ang] = table[c];
        // U = Z_{a1} X90 Z_{a2} X90 Z_{a3}: rightmost factor is applied first.
        circuit.gates.push_back(GateOp::vz(ang[2]));
        push_x90();
        circuit.gates.push_back(GateOp::vz(ang[1]));
        push_x90();
        circuit.gates.push_back(GateOp::vz(ang[0]));
    }
    return circuit;
}

std::vector<RBPoint> run_rb(ExperimentBackend& dev, const CalibratedPulse& x90,
                            const RBOptions& opts, uint64_t stream_base)
{
    const int gate = dev.define_pulse(x90.waveform);
    const auto sequences = rb_sequences(opts.lengths, opts.n_seeds, opts.sequence_seed);
    std::vector<RBPoint> points(sequences.size());
    parallel_for(static_cast<int>(sequences.size()), opts.threads, [&](int i) {
        const Circuit circuit =
            rb_circuit(sequences[i], gate, x90.pre_z, x90.post_z, stream_base + i);
        const ShotResult res = dev.execute(circuit, opts.shots);
        points[i] = {sequences[i].m, sequences[i].seed_index, res.p1_active};
    });
    return points;
}

namespace {

struct ProfileFit {
    double a = 0.0, b = 0.0, ss = std::numeric_limits<double>::infinity();
};

// Linear least squares for (A, B) at fixed p, with B clamped to [0, 1].
ProfileFit fit_ab(const std::vector<double>& m, const std::vector<double>& p1, double p)
{
    const size_t n = m.size();
    double sxx = 0, sx = 0, sxy = 0, sy = 0;
    for (size_t i = 0; i < n; ++i) {
        const double x = std::pow(p, m[i]);
        sxx += x * x;
        sx += x;
        sxy += x * p1[i];
        sy += p1[i];
    }
    const double det = sxx * n - sx * sx;
    ProfileFit fit;
    if (std::abs(det) < 1e-14) {
        // p ~ 1 makes A and B degenerate; attribute everything to B.
        fit.a = 0.0;
        fit.b = std::clamp(sy / n, 0.0, 1.0);
    } else {
        fit.a = (sxy * n - sx * sy) / det;
        fit.b = (sxx * sy - sx * sxy) / det;
        if (fit.b < 0.0 || fit.b > 1.0) {
            fit.b = std::clamp(fit.b, 0.0, 1.0);
            fit.a = sxx > 0 ? (sxy - fit.b * sx) / sxx : 0.0;
        }
    }
    double ss = 0;
    for (size_t i = 0; i < n; ++i) {
        const double r = fit.a * std::pow(p, m[i]) + fit.b - p1[i];
        ss += r * r;
    }
    fit.ss = ss;
    return fit;
}

} // namespace

RBFit fit_epc(const std::vector<double>& m, const std::vector<double>& p1)
{
    if (m.size() != p1.size() || m.size() < 3)
        throw fit_failure_error("fit_epc: need at least 3 points");
    std::vector<double> distinct = m;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    if (distinct.size() < 3)
        throw fit_failure_error("fit_epc: need at least 3 distinct lengths");

    // Profile likelihood over p: (A, B) are linear at fixed p.
    double best_p = 1.0;
    ProfileFit best = fit_ab(m, p1, 1.0);
    const int grid = 1200;
    for (int i = 0; i <= grid; ++i) {
        // log-spaced in (1 - p) from 1e-7 to 0.7
        const double one_minus = std::exp(std::log(1e-7) +
                                          (std::log(0.7) - std::log(1e-7)) * i / grid);
        const double p = 1.0 - one_minus;
        const ProfileFit fit = fit_ab(m, p1, p);
        if (fit.ss < best.ss) {
            best = fit;
            best_p = p;
        }
    }
    // Golden-section refinement around the best grid point.
    double lo = std::max(0.3, best_p - 0.02), hi = std::min(1.0, best_p + 0.02);
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = fit_ab(m, p1, x1).ss, f2 = fit_ab(m, p1, x2).ss;
    for (int it = 0; it < 80; ++it) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = fit_ab(m, p1, x1).ss;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = fit_ab(m, p1, x2).ss;
        }
    }
    const double p_opt = 0.5 * (lo + hi);
    const ProfileFit fit = fit_ab(m, p1, p_opt);
    if (fit.ss < best.ss || p_opt != best_p) {
        if (fit.ss <= best.ss) {
            best = fit;
            best_p = p_opt;
        }
    }

    RBFit out;
    out.a = best.a;
    out.b = best.b;
    out.p = best_p;
    out.epc = 0.5 * (1.0 - best_p);
    const size_t n = m.size();
    out.residual_rms = std::sqrt(best.ss / n);

    // Linearized 1-sigma uncertainty of p from the residual variance.
    if (n > 3 && best_p > 0.0 && best_p < 1.0) {
        double jtj = 0.0;
        for (size_t i = 0; i < n; ++i) {
            const double dp = best.a * m[i] * std::pow(best_p, m[i] - 1.0);
            jtj += dp * dp;
        }
        if (jtj > 0.0) {
            const double sigma2 = best.ss / (n - 3);
            out.p_stderr = std::sqrt(sigma2 / jtj);
            out.epc_stderr = 0.5 * out.p_stderr;
        }
    }
    return out;
}

RBFit fit_epc(const std::vector<RBPoint>& data)
{
    std::vector<double> m, p1;
    m.reserve(data.size());
    p1.reserve(data.size());
    for (const RBPoint& pt : data) {
        m.push_back(pt.m);
        p1.push_back(pt.p1);
    }
    return fit_epc(m, p1);
}

std::vector<SweepPoint> robustness_sweep(const DeviceFactory& factory, const CalibratedPulse& x90,
                                         const std::vector<double>& c0_grid,
                                         const std::vector<double>& c1_grid,
                                         const RBOptions& opts)
{
    std::vector<SweepPoint> out;
    out.reserve(c0_grid.size() * c1_grid.size());
    for (const double c0 : c0_grid) {
        for (const double c1 : c1_grid) {
            auto dev = factory(c0, c1);
            const auto data = run_rb(*dev, x90, opts, /*stream_base=*/0);
            const RBFit fit = fit_epc(data);
            out.push_back({c0, c1, fit.epc, fit.epc_stderr});
        }
    }
    return out;
}

} // namespace qcal
