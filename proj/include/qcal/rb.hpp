#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "qcal/calib.hpp"
#include "qcal/device.hpp"
#include "qcal/types.hpp"

namespace qcal {

// One single-qubit Clifford as Z_{a1} X90 Z_{a2} X90 Z_{a3} (angles are
// multiples of pi/2; virtual Zs are exact).
struct CliffordZXZXZ {
    int index = 0;
    std::array<double, 3> angles{};
};

// The 24-element table, generated once and verified against the matrix group
// (distinctness, closure, and reconstruction of every element).
const std::vector<CliffordZXZXZ>& clifford_table();
const std::vector<Matrix2>& clifford_matrices();
int clifford_multiply(int lhs, int rhs); // index of M(lhs) * M(rhs)
int clifford_inverse(int idx);

// Random Clifford words in application order with the exact group inverse
// appended; ideal execution composes to the identity.
struct RBSequence {
    int m = 0;
    int seed_index = 0;
    std::vector<int> cliffords;
};

std::vector<RBSequence> rb_sequences(const std::vector<int>& lengths, int n_seeds, uint64_t seed);

// Expands a sequence into pulses and virtual Zs for an uploaded X90 gate.
Circuit rb_circuit(const RBSequence& seq, int x90_id, double pre_z, double post_z,
                   uint64_t stream);

struct RBPoint {
    int m = 0;
    int seed_index = 0;
    double p1 = 0.0;
};

struct RBOptions {
    std::vector<int> lengths{1, 2, 4, 8, 16, 32, 64, 128, 256};
    int n_seeds = 10;
    int shots = 1024;
    uint64_t sequence_seed = 7;
    int threads = 1;
};

std::vector<RBPoint> run_rb(ExperimentBackend& dev, const CalibratedPulse& x90,
                            const RBOptions& opts, uint64_t stream_base = 0);

struct RBFit {
    double a = 0.0;
    double b = 0.0;
    double p = 1.0;
    double epc = 0.0;
    double p_stderr = 0.0;
    double epc_stderr = 0.0;
    double residual_rms = 0.0;
};

// Least-squares fit of P(1) = A p^m + B with p in (0, 1], B in [0, 1];
// EPC = (1 - p) / 2.
RBFit fit_epc(const std::vector<RBPoint>& data);
RBFit fit_epc(const std::vector<double>& m, const std::vector<double>& p1);

using DeviceFactory = std::function<std::unique_ptr<ExperimentBackend>(double c0, double c1)>;

struct SweepPoint {
    double c0 = 0.0;
    double c1 = 0.0;
    double epc = 0.0;
    double epc_stderr = 0.0;
};

// EPC per (c0, c1) truth offset with the fixed calibrated pulse.
std::vector<SweepPoint> robustness_sweep(const DeviceFactory& factory, const CalibratedPulse& x90,
                                         const std::vector<double>& c0_grid,
                                         const std::vector<double>& c1_grid,
                                         const RBOptions& opts);

} // namespace qcal
