#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qcal/calib.hpp"
#include "qcal/model.hpp"
#include "qcal/objectives.hpp"
#include "qcal/optimize.hpp"
#include "qcal/pulse.hpp"
#include "qcal/rb.hpp"

namespace qcal {

enum class ObjectiveKind { amp_detuning, spectator };

struct DeviceTruthConfig {
    double freq_offset_frac = 0.0;
    double amp_scale = 1.0;
    double transfer_sigma_samples = 0.0;
    int shots = 1024;
    uint64_t rng_seed = 99;
    LeakageReadout leakage_readout = LeakageReadout::as_one;
    std::array<double, 6> spectator_c{}; // used by two-qubit truth models
};

struct CalibrationConfig {
    int scan_points = 41;
    double scan_lo = 0.8;
    double scan_hi = 1.25;
    int shots = 1024;
    bool angle_calibration = false;
    int line_points = 21;
    double line_range = 0.5;
    int max_rounds = 6;
};

struct SpectroscopyConfig {
    int phi_count = 41;
    double phi_lo = -kPi;
    double phi_hi = kPi;
    std::vector<int> ns{1, 25, 50, 75, 100};
    int shots = 1024;
    bool init_minus = true;
    double x_gate_duration_ns = 71.0; // rounded up to whole samples
};

struct SweepConfig {
    std::vector<double> c0_grid;
    std::vector<double> c1_grid;
};

struct DragConfig {
    double sigma_fraction = 0.25;
    double beta = 0.0; // 0 = -1/alpha default
};

struct RunConfig {
    int schema_version = 1;
    uint64_t seed = 1;
    std::string output_dir = "out";
    int threads = 0; // 0 = all cores

    TransmonParams model;
    SpectatorParams spectator;
    SynthesisConfig synth;
    int n_basis_coeffs = 20;

    ObjectiveKind objective_kind = ObjectiveKind::amp_detuning;
    std::vector<double> weights; // empty -> module defaults

    MinimizeOptions optimizer;
    ModelGrid grid = ModelGrid::paper_default();
    int subspace_rank = 4;

    DeviceTruthConfig device_truth;
    CalibrationConfig calibration;
    RBOptions rb;
    SweepConfig sweep;
    SpectroscopyConfig spectroscopy;
    DragConfig drag;

    std::string config_hash; // of the canonical serialized form

    int effective_threads() const;
    std::vector<double> effective_weights() const;
};

RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& json_text);
std::string canonical_config_json(const RunConfig& cfg);

} // namespace qcal
