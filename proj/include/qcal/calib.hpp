#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qcal/device.hpp"
#include "qcal/dimred.hpp"
#include "qcal/model.hpp"
#include "qcal/pulse.hpp"
#include "qcal/types.hpp"

namespace qcal {

// A pulse together with the virtual-Z frame corrections absorbed during
// calibration; pre_z is applied before the pulse in time, post_z after.
struct CalibratedPulse {
    Waveform waveform;
    double pre_z = 0.0;
    double post_z = 0.0;
};

// One experiment record of a calibration session (JSON-lines serializable).
struct SessionRecord {
    std::string stage;
    RealVector x;
    double phi = 0.0;
    int n = 0;
    int shots = 0;
    double z_est = 0.0;
    double sigma = 0.0;
};

struct SessionLog {
    std::vector<SessionRecord> records;
    void append(SessionRecord rec) { records.push_back(std::move(rec)); }
};

struct AmpScanCurve {
    std::vector<double> scales;
    std::vector<double> p1;
};

// P(1) after a single application of the rescaled pulse, on the device.
AmpScanCurve amplitude_scan(ExperimentBackend& dev, const Waveform& pulse,
                            const std::vector<double>& scales, int shots,
                            uint64_t stream_base = 0, SessionLog* log = nullptr);

// The same curve from the noiseless design model.
AmpScanCurve amplitude_scan_sim(const TransmonParams& design_model, const Waveform& pulse,
                                const std::vector<double>& scales);

// Relative rescale minimizing sum_s' |P_dev(s * s') - P_sim(s')|; when
// `snap_to_stationary` is set the result is moved to the nearest stationary
// point of the device curve near P(1) = 0.5 (the amplitude-robust plateau).
double align_amplitude(const AmpScanCurve& sim, const AmpScanCurve& dev,
                       bool snap_to_stationary);

// Stage 2: theta maximizing P(1) of the circuit X90 . Z_theta . X90.
double angle_scan(ExperimentBackend& dev, int x90_id, const std::vector<double>& thetas,
                  int shots, uint64_t stream_base = 0, SessionLog* log = nullptr);

struct AmpSequenceSpec {
    double phi = 0.0;
    int n_reps = 0;
    int shots = 1024;
};

// Fig.-2 error-amplification sequence: X90, then N repetitions of
// (X90, X90, Z_phi), then measure; returns the <Z> estimate.
ShotResult amplification_sequence(ExperimentBackend& dev, int x90_id, double frame_pre_z,
                                  double frame_post_z, const AmpSequenceSpec& spec,
                                  uint64_t stream);

struct FineCalRound {
    std::vector<int> n_set;
    int phi_count = 7;
};

struct FineCalConfig {
    double range = 0.5;   // line-search half width per direction
    int points = 21;
    int max_rounds = 6;
    int shots = 1024;
    double amp_scale = 1.0;   // stage-1 result applied to every candidate
    double frame_theta = 0.0; // stage-2 result absorbed into the gate
    bool parabolic_refine = true;
    std::vector<FineCalRound> schedule; // empty -> default escalation

    static std::vector<FineCalRound> default_schedule();
};

struct LineSearchStep {
    int round = 0;
    int direction = 0;
    RealVector x;
    double loss = 0.0;
};

struct FineCalResult {
    RealVector x_star;
    std::vector<LineSearchStep> history;
    double initial_loss = 0.0;
    double final_loss = 0.0;
    double noise_level = 0.0;
    bool converged = false;
};

// Stage 3: iterated one-dimensional line searches of the amplification-loss
// RMS along the calibration directions, with an escalating (N, phi) schedule.
FineCalResult fine_calibrate(ExperimentBackend& dev, const PulseParams& p0,
                             const SynthesisConfig& synth, const CalibrationSubspace& sub,
                             const FineCalConfig& cfg, SessionLog* log = nullptr);

// RMS of <Z> over a (phi, N) grid for a fixed uploaded gate.
double amplification_loss(ExperimentBackend& dev, int gate_id, double pre_z, double post_z,
                          const std::vector<double>& phis, const std::vector<int>& ns, int shots,
                          uint64_t stream_base, double* noise_out = nullptr);

std::vector<double> phi_grid(int count); // evenly spread across [0, pi]

struct SpectroscopyMaps {
    std::vector<double> phis;
    std::vector<int> ns;
    RealMatrix active_p1;    // ns x phis
    RealMatrix spectator_p1;
};

// Phase-sweep spectroscopy: prepare |+,0> or |-,0>, apply
// (Z_{phi/2} X Z_{phi/2} X90)^N, rotate the active qubit, measure both.
SpectroscopyMaps phase_sweep_spectroscopy(ExperimentBackend& dev2q, const CalibratedPulse& x90,
                                          const Waveform& x180, const std::vector<double>& phis,
                                          const std::vector<int>& ns, InitState init, int shots,
                                          uint64_t stream_base = 0);

} // namespace qcal
