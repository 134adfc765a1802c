#pragma once

#include <memory>
#include <string>

#include "qcal/config.hpp"
#include "qcal/design.hpp"

namespace qcal {

TransmonDesignProblem transmon_problem(const RunConfig& cfg);
SpectatorDesignProblem spectator_problem(const RunConfig& cfg);
ObjectiveReport evaluate_design(const RunConfig& cfg, const PulseParams& p);

// Virtual device built from the config's device_truth section (transmon or
// two-qubit, depending on the objective kind).
std::unique_ptr<ExperimentBackend> make_device(const RunConfig& cfg);
// Transmon device with explicit true offsets, for robustness sweeps.
DeviceFactory make_sweep_factory(const RunConfig& cfg);

struct OptimizeOutcome {
    PulseParams p_opt;
    Waveform waveform;
    ObjectiveReport report;
    OptResult result;
    double wall_time_s = 0.0;
};

struct CalibrateOutcome {
    double amp_scale = 1.0;
    double frame_theta = 0.0;
    FineCalResult fine;
    SessionLog log;
    PulseParams p_star;
    CalibratedPulse calibrated;
};

struct RBOutcome {
    std::vector<RBPoint> data;
    RBFit fit;
};

struct SpectroscopyOutcome {
    SpectroscopyMaps robust;
    SpectroscopyMaps drag;
};

OptimizeOutcome run_optimize(const RunConfig& cfg, bool write_artifacts = true);
CalibrationSubspace run_reduce(const RunConfig& cfg, const PulseParams& p0,
                               bool write_artifacts = true);
CalibrateOutcome run_calibrate(const RunConfig& cfg, const PulseParams& p0,
                               const CalibrationSubspace& sub, bool write_artifacts = true);
RBOutcome run_rb_study(const RunConfig& cfg, const CalibratedPulse& pulse,
                       bool write_artifacts = true);
std::vector<SweepPoint> run_sweep_study(const RunConfig& cfg, const CalibratedPulse& pulse,
                                        bool write_artifacts = true,
                                        const std::string& tag = "");
SpectroscopyOutcome run_spectator_study(const RunConfig& cfg, const CalibratedPulse& robust,
                                        bool write_artifacts = true);

// DRAG baseline of the config's gate duration, amplitude-aligned against the
// config's virtual device (stage 1 only, no subspace calibration).
CalibrateOutcome run_baseline_drag(const RunConfig& cfg, bool write_artifacts = true);

Waveform drag_baseline_waveform(const RunConfig& cfg, double duration_ns = 0.0,
                                double angle = kPi / 2.0);

// Artifact-chained CLI entry points; each loads its inputs from
// cfg.output_dir and writes fixed-name outputs there.
int cli_run(const std::string& command, const RunConfig& cfg);

// Fixed artifact names under output_dir.
namespace artifact_names {
inline constexpr const char* pulse_params = "pulse_params.json";
inline constexpr const char* waveform = "waveform.csv";
inline constexpr const char* subspace = "subspace.json";
inline constexpr const char* session_log = "calibration_log.jsonl";
inline constexpr const char* calibrated = "calibrated_offsets.json";
inline constexpr const char* calibrated_waveform = "calibrated_waveform.csv";
inline constexpr const char* rb_results = "rb_results.csv";
inline constexpr const char* rb_fit = "rb_fit.json";
inline constexpr const char* sweep = "sweep.csv";
} // namespace artifact_names

} // namespace qcal
