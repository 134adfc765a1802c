#pragma once

#include <vector>

#include "qcal/model.hpp"
#include "qcal/pulse.hpp"
#include "qcal/types.hpp"

namespace qcal {

// Model points over which the stacked Jacobian is built. Contains the nominal
// point c = 0; the default is the 3x3 grid of frequency detunings
// {-0.01%, 0, +0.01%} times drive deviations {-5%, 0, +5%}.
struct ModelGrid {
    std::vector<PerturbationVector> points;

    static ModelGrid paper_default();
    static ModelGrid nominal_only();
    int size() const { return static_cast<int>(points.size()); }
};

struct CalibrationSubspace {
    RealMatrix directions;    // M x r, orthonormal columns v_1..v_r
    RealVector singular_values;
    int r = 0;
    // Trailing singular values (diagnostic for the d^2 - 1 rank picture).
    RealVector spectrum;
};

// Upper-left 2x2 block of U(T) for pulse parameters p at model point c.
Matrix2 qubit_block_map(const PulseParams& p, const PerturbationVector& c,
                        const TransmonParams& model, const SynthesisConfig& cfg);

// Real flattening of the stacked map W(p) = V(p,c_1) + ... + V(p,c_L), order
// "re-im-rowmajor-v1": [Re V(c_1) row-major, Im V(c_1), Re V(c_2), ...].
RealVector stacked_map(const PulseParams& p, const ModelGrid& grid,
                       const TransmonParams& model, const SynthesisConfig& cfg);

// Central-difference Jacobian of the stacked map, shape [8L x M].
RealMatrix stacked_jacobian(const PulseParams& p0, const ModelGrid& grid,
                            const TransmonParams& model, const SynthesisConfig& cfg,
                            double fd_step = 1e-6, int threads = 1);

// Top-r right singular vectors and singular values of J.
CalibrationSubspace calibration_directions(const RealMatrix& jacobian, int r = 4);

// p0 + sum_i x_i v_i
PulseParams apply_offset(const PulseParams& p0, const CalibrationSubspace& sub,
                         const RealVector& x);

} // namespace qcal
