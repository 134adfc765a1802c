#include "qcal/calib.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qcal/sim.hpp"

namespace qcal {

namespace {

Waveform scaled(const Waveform& w, double scale)
{
    Waveform out = w;
    out.samples *= scale;
    return out;
}

double interp_curve(const AmpScanCurve& curve, double s)
{
    const auto& xs = curve.scales;
    if (s <= xs.front() || s >= xs.back()) return std::numeric_limits<double>::quiet_NaN();
    const auto it = std::upper_bound(xs.begin(), xs.end(), s);
    const size_t hi = static_cast<size_t>(it - xs.begin());
    const double t = (s - xs[hi - 1]) / (xs[hi] - xs[hi - 1]);
    return (1.0 - t) * curve.p1[hi - 1] + t * curve.p1[hi];
}

// Vertex of the parabola through (x0,y0),(x1,y1),(x2,y2); falls back to x1.
double parabolic_vertex(double x0, double y0, double x1, double y1, double x2, double y2)
{
    const double denom = (x1 - x0) * (y1 - y2) - (x1 - x2) * (y1 - y0);
    if (std::abs(denom) < 1e-30) return x1;
    const double num = (x1 - x0) * (x1 - x0) * (y1 - y2) - (x1 - x2) * (x1 - x2) * (y1 - y0);
    const double v = x1 - 0.5 * num / denom;
    return std::clamp(v, std::min(x0, x2), std::max(x0, x2));
}

} // namespace

AmpScanCurve amplitude_scan(ExperimentBackend& dev, const Waveform& pulse,
                            const std::vector<double>& scales, int shots, uint64_t stream_base,
                            SessionLog* log)
{
    AmpScanCurve curve;
    for (size_t i = 0; i < scales.size(); ++i) {
        double p1 = std::numeric_limits<double>::quiet_NaN();
        try {
            const int gate = dev.define_pulse(scaled(pulse, scales[i]));
            Circuit circuit;
            circuit.gates = {GateOp::pulse_gate(gate)};
            circuit.rng_stream = stream_base + i;
            const ShotResult res = dev.execute(circuit, shots);
            p1 = res.p1_active;
            if (log) {
                RealVector x(1);
                x(0) = scales[i];
                log->append({"amplitude_scan", x, 0.0, 1, res.shots, res.z_active, res.sigma_z});
            }
        } catch (const clipping_error&) {
            // scale rejected by the device; leave the point empty
        }
        curve.scales.push_back(scales[i]);
        curve.p1.push_back(p1);
    }
    return curve;
}

AmpScanCurve amplitude_scan_sim(const TransmonParams& design_model, const Waveform& pulse,
                                const std::vector<double>& scales)
{
    AmpScanCurve curve;
    for (const double s : scales) {
        const PropagatorTrace trace = propagate(transmon_generator(design_model, scaled(pulse, s)));
        const Vector psi = trace.final_unitary().col(0);
        curve.scales.push_back(s);
        curve.p1.push_back(1.0 - std::norm(psi(0)));
    }
    return curve;
}

double align_amplitude(const AmpScanCurve& sim, const AmpScanCurve& dev, bool snap_to_stationary)
{
    // Coarse-to-fine grid search over the relative rescale.
    double best_s = 1.0;
    double best_cost = std::numeric_limits<double>::infinity();
    const double lo = 0.7, hi = 1.4;
    for (int i = 0; i <= 1400; ++i) {
        const double s = lo + (hi - lo) * i / 1400.0;
        double cost = 0.0;
        int used = 0;
        for (size_t j = 0; j < sim.scales.size(); ++j) {
            const double pd = interp_curve(dev, s * sim.scales[j]);
            if (std::isnan(pd) || std::isnan(sim.p1[j])) continue;
            cost += std::abs(pd - sim.p1[j]);
            ++used;
        }
        if (used < static_cast<int>(sim.scales.size()) / 2) continue;
        cost /= used;
        if (cost < best_cost) {
            best_cost = cost;
            best_s = s;
        }
    }
    if (!std::isfinite(best_cost))
        throw calibration_failure_error("align_amplitude: curves do not overlap");
    if (!snap_to_stationary) return best_s;

    // Snap to the flat region of the device curve near P(1) = 0.5.
    int best_idx = -1;
    double best_slope = std::numeric_limits<double>::infinity();
    for (size_t i = 1; i + 1 < dev.scales.size(); ++i) {
        if (std::isnan(dev.p1[i - 1]) || std::isnan(dev.p1[i]) || std::isnan(dev.p1[i + 1]))
            continue;
        if (std::abs(dev.p1[i] - 0.5) > 0.15) continue;
        if (std::abs(dev.scales[i] - best_s) > 0.15 * best_s) continue;
        const double slope =
            std::abs((dev.p1[i + 1] - dev.p1[i - 1]) / (dev.scales[i + 1] - dev.scales[i - 1]));
        if (slope < best_slope) {
            best_slope = slope;
            best_idx = static_cast<int>(i);
        }
    }
    if (best_idx < 0)
        throw calibration_failure_error(
            "align_amplitude: no stationary point near P(1)=0.5 in the scan window");
    return parabolic_vertex(dev.scales[best_idx - 1], dev.p1[best_idx - 1], dev.scales[best_idx],
                            dev.p1[best_idx], dev.scales[best_idx + 1], dev.p1[best_idx + 1]);
}

double angle_scan(ExperimentBackend& dev, int x90_id, const std::vector<double>& thetas,
                  int shots, uint64_t stream_base, SessionLog* log)
{
    std::vector<double> p1(thetas.size());
    for (size_t i = 0; i < thetas.size(); ++i) {
        Circuit circuit;
        circuit.gates = {GateOp::pulse_gate(x90_id), GateOp::vz(thetas[i]),
                         GateOp::pulse_gate(x90_id)};
        circuit.rng_stream = stream_base + i;
        const ShotResult res = dev.execute(circuit, shots);
        p1[i] = res.p1_active;
        if (log)
            log->append({"angle_scan", RealVector::Zero(0), thetas[i], 1, res.shots, res.z_active,
                         res.sigma_z});
    }
    const auto it = std::max_element(p1.begin(), p1.end());
    if (*it < 0.9)
        throw calibration_failure_error("angle_scan: best P(1) below 0.9, gate far from a pi/2 "
                                        "rotation");
    const size_t i = static_cast<size_t>(it - p1.begin());
    if (i == 0 || i + 1 == thetas.size()) return thetas[i];
    return parabolic_vertex(thetas[i - 1], -p1[i - 1], thetas[i], -p1[i], thetas[i + 1],
                            -p1[i + 1]);
}

ShotResult amplification_sequence(ExperimentBackend& dev, int x90_id, double frame_pre_z,
                                  double frame_post_z, const AmpSequenceSpec& spec,
                                  uint64_t stream)
{
    Circuit circuit;
    auto push_gate = [&]() {
        if (frame_pre_z != 0.0) circuit.gates.push_back(GateOp::vz(frame_pre_z));
        circuit.gates.push_back(GateOp::pulse_gate(x90_id));
        if (frame_post_z != 0.0) circuit.gates.push_back(GateOp::vz(frame_post_z));
    };
    push_gate();
    for (int rep = 0; rep < spec.n_reps; ++rep) {
        push_gate();
        push_gate();
        circuit.gates.push_back(GateOp::vz(spec.phi));
    }
    circuit.rng_stream = stream;
    return dev.execute(circuit, spec.shots);
}

std::vector<double> phi_grid(int count)
{
    std::vector<double> phis(count);
    for (int i = 0; i < count; ++i) phis[i] = count == 1 ? 0.0 : kPi * i / (count - 1);
    return phis;
}

double amplification_loss(ExperimentBackend& dev, int gate_id, double pre_z, double post_z,
                          const std::vector<double>& phis, const std::vector<int>& ns, int shots,
                          uint64_t stream_base, double* noise_out)
{
    double ss = 0.0;
    double sigma_ss = 0.0;
    int count = 0;
    uint64_t stream = stream_base;
    for (const double phi : phis) {
        for (const int n : ns) {
            const ShotResult res =
                amplification_sequence(dev, gate_id, pre_z, post_z, {phi, n, shots}, stream++);
            ss += res.z_active * res.z_active;
            sigma_ss += res.sigma_z * res.sigma_z;
            ++count;
        }
    }
    if (noise_out) *noise_out = std::sqrt(sigma_ss) / count; // std error of the RMS estimate
    return std::sqrt(ss / count);
}

std::vector<FineCalRound> FineCalConfig::default_schedule()
{
    return {
        {{1, 2, 4}, 3}, {{2, 4, 10}, 5}, {{10, 20, 40}, 7},
        {{10, 20, 40}, 7}, {{10, 20, 40}, 7}, {{10, 20, 40}, 7},
    };
}

FineCalResult fine_calibrate(ExperimentBackend& dev, const PulseParams& p0,
                             const SynthesisConfig& synth, const CalibrationSubspace& sub,
                             const FineCalConfig& cfg, SessionLog* log)
{
    const std::vector<FineCalRound> schedule =
        cfg.schedule.empty() ? FineCalConfig::default_schedule() : cfg.schedule;
    const int rounds = std::min<int>(cfg.max_rounds, static_cast<int>(schedule.size()));
    const double pre_z = 0.5 * cfg.frame_theta;
    const double post_z = 0.5 * cfg.frame_theta;

    uint64_t stream = 1'000'000;
    auto loss_at = [&](const RealVector& x, const FineCalRound& round, double* noise) {
        const PulseParams p = apply_offset(p0, sub, x);
        const int gate = dev.define_pulse(scaled(synthesize_envelope(p, synth), cfg.amp_scale));
        const auto phis = phi_grid(round.phi_count);
        const double loss = amplification_loss(dev, gate, pre_z, post_z, phis, round.n_set,
                                               cfg.shots, stream, noise);
        stream += phis.size() * round.n_set.size();
        if (log) {
            log->append({"fine_calibration", x, 0.0,
                         round.n_set.empty() ? 0 : round.n_set.back(), cfg.shots, loss, *noise});
        }
        return loss;
    };

    FineCalResult result;
    RealVector x = RealVector::Zero(sub.r);
    double noise = 0.0;
    double loss = loss_at(x, schedule[0], &noise);
    result.initial_loss = loss;

    for (int round = 0; round < rounds; ++round) {
        const FineCalRound& sched = schedule[round];
        // Re-evaluate at the current point when the schedule escalates.
        if (round > 0) loss = loss_at(x, sched, &noise);
        const double round_start_loss = loss;

        for (int dir = 0; dir < sub.r; ++dir) {
            std::vector<double> grid(cfg.points), values(cfg.points);
            int best = -1;
            double best_val = loss;
            for (int gpt = 0; gpt < cfg.points; ++gpt) {
                const double xi =
                    -cfg.range + 2.0 * cfg.range * gpt / std::max(1, cfg.points - 1);
                RealVector cand = x;
                cand(dir) = xi;
                grid[gpt] = xi;
                values[gpt] = loss_at(cand, sched, &noise);
                if (values[gpt] < best_val) {
                    best_val = values[gpt];
                    best = gpt;
                }
            }
            if (best >= 0) {
                double xi_star = grid[best];
                double val_star = values[best];
                if (cfg.parabolic_refine && best > 0 && best + 1 < cfg.points) {
                    const double xi_ref =
                        parabolic_vertex(grid[best - 1], values[best - 1], grid[best],
                                         values[best], grid[best + 1], values[best + 1]);
                    RealVector cand = x;
                    cand(dir) = xi_ref;
                    const double val_ref = loss_at(cand, sched, &noise);
                    if (val_ref < val_star) {
                        xi_star = xi_ref;
                        val_star = val_ref;
                    }
                }
                x(dir) = xi_star;
                loss = val_star;
            }
            result.history.push_back({round, dir, x, loss});
        }

        const double improvement = round_start_loss - loss;
        if (round == 0 && loss > 3.0 * noise && improvement < 2.0 * noise)
            throw calibration_failure_error(
                "fine_calibrate: no improvement beyond shot noise in the first round");
        const bool final_stage = round + 1 >= rounds ||
                                 (sched.n_set == schedule[rounds - 1].n_set &&
                                  sched.phi_count == schedule[rounds - 1].phi_count);
        if (final_stage && round > 0 && improvement < 2.0 * noise) {
            result.converged = true;
            break;
        }
    }

    result.x_star = x;
    result.final_loss = loss;
    result.noise_level = noise;
    if (!result.converged) result.converged = loss <= std::max(3.0 * noise, 0.05);
    return result;
}

SpectroscopyMaps phase_sweep_spectroscopy(ExperimentBackend& dev2q, const CalibratedPulse& x90,
                                          const Waveform& x180, const std::vector<double>& phis,
                                          const std::vector<int>& ns, InitState init, int shots,
                                          uint64_t stream_base)
{
    if (dev2q.num_qubits() != 2)
        throw invalid_config_error("phase_sweep_spectroscopy: needs a two-qubit device");
    const int x90_id = dev2q.define_pulse(x90.waveform);
    const int x180_id = dev2q.define_pulse(x180);

    SpectroscopyMaps maps;
    maps.phis = phis;
    maps.ns = ns;
    maps.active_p1.resize(ns.size(), phis.size());
    maps.spectator_p1.resize(ns.size(), phis.size());

    uint64_t stream = stream_base;
    for (size_t ni = 0; ni < ns.size(); ++ni) {
        for (size_t pi = 0; pi < phis.size(); ++pi) {
            const double phi = phis[pi];
            Circuit circuit;
            circuit.init = init;
            for (int rep = 0; rep < ns[ni]; ++rep) {
                if (x90.pre_z != 0.0) circuit.gates.push_back(GateOp::vz(x90.pre_z));
                circuit.gates.push_back(GateOp::pulse_gate(x90_id));
                if (x90.post_z != 0.0) circuit.gates.push_back(GateOp::vz(x90.post_z));
                circuit.gates.push_back(GateOp::vz(0.5 * phi));
                circuit.gates.push_back(GateOp::pulse_gate(x180_id));
                circuit.gates.push_back(GateOp::vz(0.5 * phi));
            }
            // Rotate the active qubit by Y90 before readout.
            circuit.gates.push_back(GateOp::vz(-0.5 * kPi));
            if (x90.pre_z != 0.0) circuit.gates.push_back(GateOp::vz(x90.pre_z));
            circuit.gates.push_back(GateOp::pulse_gate(x90_id));
            if (x90.post_z != 0.0) circuit.gates.push_back(GateOp::vz(x90.post_z));
            circuit.gates.push_back(GateOp::vz(0.5 * kPi));
            circuit.rng_stream = stream++;

            const ShotResult res = dev2q.execute(circuit, shots);
            maps.active_p1(ni, pi) = res.p1_active;
            maps.spectator_p1(ni, pi) = res.p1_spectator;
        }
    }
    return maps;
}

} // namespace qcal
