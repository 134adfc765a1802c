#pragma once

#include <cstdint>
#include <vector>

#include "qcal/model.hpp"
#include "qcal/pulse.hpp"
#include "qcal/types.hpp"

namespace qcal {

struct GateOp {
    enum class Kind { pulse, virtual_z };
    Kind kind = Kind::pulse;
    int pulse_id = -1;
    double theta = 0.0;

    static GateOp pulse_gate(int id) { return {Kind::pulse, id, 0.0}; }
    static GateOp vz(double theta) { return {Kind::virtual_z, -1, theta}; }
};

// Initial state of the (active, spectator) register; single-qubit devices
// accept only `ground`.
enum class InitState { ground, plus_x, minus_x };

struct Circuit {
    std::vector<GateOp> gates;
    InitState init = InitState::ground;
    uint64_t rng_stream = 0;
};

struct ShotResult {
    double z_active = 0.0;
    double p1_active = 0.0;
    double p1_spectator = 0.0;
    int shots = 0;
    double sigma_z = 0.0; // sqrt((1 - z^2)/shots)
};

enum class LeakageReadout { as_one, as_zero };

struct DistortionParams {
    double freq_offset_frac = 0.0; // hidden true c0
    double amp_scale = 1.0;        // hidden true 1 + c1
    double transfer_sigma = 0.0;   // samples; extra smoothing from electronics
};

// Experiment-only interface: calibration code sees uploaded gates and shot
// statistics, never the device's true model parameters.
class ExperimentBackend {
public:
    virtual ~ExperimentBackend() = default;
    virtual int num_qubits() const = 0;
    virtual double dt() const = 0;
    // Uploads a waveform (the device applies its hidden distortions) and
    // returns a gate id for use in circuits.
    virtual int define_pulse(const Waveform& w) = 0;
    // Registers an exact qubit-space unitary (ideal-gate injection).
    virtual int define_unitary(const Matrix2& u) = 0;
    // shots <= 0 returns exact expectation values (no sampling).
    virtual ShotResult execute(const Circuit& circuit, int shots) const = 0;
};

class TransmonDevice final : public ExperimentBackend {
public:
    TransmonDevice(const TransmonParams& truth, const DistortionParams& distortion,
                   uint64_t rng_seed, LeakageReadout readout = LeakageReadout::as_one);

    int num_qubits() const override { return 1; }
    double dt() const override { return dt_; }
    int define_pulse(const Waveform& w) override;
    int define_unitary(const Matrix2& u) override;
    ShotResult execute(const Circuit& circuit, int shots) const override;

private:
    TransmonParams truth_;
    DistortionParams distortion_;
    uint64_t rng_seed_;
    LeakageReadout readout_;
    double dt_ = 1.0 / 4.5;
    std::vector<Matrix> gate_table_;
};

class SpectatorDevice final : public ExperimentBackend {
public:
    SpectatorDevice(const SpectatorParams& truth, const DistortionParams& distortion,
                    uint64_t rng_seed);

    int num_qubits() const override { return 2; }
    double dt() const override { return dt_; }
    int define_pulse(const Waveform& w) override;
    int define_unitary(const Matrix2& u) override;
    ShotResult execute(const Circuit& circuit, int shots) const override;

private:
    SpectatorParams truth_;
    DistortionParams distortion_;
    uint64_t rng_seed_;
    double dt_ = 1.0 / 4.5;
    std::vector<Matrix> gate_table_;
};

// The distortion pipeline shared by both devices: transfer-function smoothing
// followed by amplitude rescaling, with a post-distortion clipping check.
Waveform apply_distortions(const Waveform& w, const DistortionParams& distortion);

} // namespace qcal
