#include "qcal/dimred.hpp"

#include <Eigen/SVD>

#include "qcal/parallel.hpp"
#include "qcal/sim.hpp"

namespace qcal {

ModelGrid ModelGrid::paper_default()
{
    ModelGrid grid;
    for (const double freq : {-1e-4, 0.0, 1e-4})
        for (const double amp : {-0.05, 0.0, 0.05})
            grid.points.push_back({freq, amp});
    return grid;
}

ModelGrid ModelGrid::nominal_only()
{
    ModelGrid grid;
    grid.points.push_back({0.0, 0.0});
    return grid;
}

Matrix2 qubit_block_map(const PulseParams& p, const PerturbationVector& c,
                        const TransmonParams& model, const SynthesisConfig& cfg)
{
    const Waveform w = synthesize_envelope(p, cfg);
    const PropagatorTrace trace = propagate(transmon_generator(model, w, c));
    return trace.final_unitary().topLeftCorner<2, 2>();
}

RealVector stacked_map(const PulseParams& p, const ModelGrid& grid,
                       const TransmonParams& model, const SynthesisConfig& cfg)
{
    if (grid.size() == 0) throw invalid_config_error("stacked_map: empty model grid");
    RealVector out(8 * grid.size());
    for (int j = 0; j < grid.size(); ++j) {
        const Matrix2 v = qubit_block_map(p, grid.points[j], model, cfg);
        int idx = 8 * j;
        for (int row = 0; row < 2; ++row)
            for (int col = 0; col < 2; ++col) out(idx++) = v(row, col).real();
        for (int row = 0; row < 2; ++row)
            for (int col = 0; col < 2; ++col) out(idx++) = v(row, col).imag();
    }
    return out;
}

RealMatrix stacked_jacobian(const PulseParams& p0, const ModelGrid& grid,
                            const TransmonParams& model, const SynthesisConfig& cfg,
                            double fd_step, int threads)
{
    const RealVector flat0 = p0.flatten();
    const int m = static_cast<int>(flat0.size());
    const int m_i = static_cast<int>(p0.a.size());
    const int m_q = static_cast<int>(p0.b.size());
    if (!flat0.allFinite()) throw numeric_integrity_error("stacked_jacobian: non-finite p0");

    RealMatrix jac(8 * grid.size(), m);
    parallel_for(m, threads, [&](int col) {
        RealVector plus = flat0, minus = flat0;
        plus(col) += fd_step;
        minus(col) -= fd_step;
        const RealVector w_plus =
            stacked_map(PulseParams::unflatten(plus, m_i, m_q), grid, model, cfg);
        const RealVector w_minus =
            stacked_map(PulseParams::unflatten(minus, m_i, m_q), grid, model, cfg);
        jac.col(col) = (w_plus - w_minus) / (2.0 * fd_step);
    });
    if (!jac.allFinite()) throw numeric_integrity_error("stacked_jacobian: non-finite entries");
    return jac;
}

CalibrationSubspace calibration_directions(const RealMatrix& jacobian, int r)
{
    const int max_rank = static_cast<int>(std::min(jacobian.rows(), jacobian.cols()));
    if (r < 1 || r > max_rank)
        throw invalid_config_error("calibration_directions: rank out of range");

    Eigen::JacobiSVD<RealMatrix> svd(jacobian, Eigen::ComputeThinV);
    CalibrationSubspace sub;
    sub.r = r;
    sub.spectrum = svd.singularValues();
    sub.singular_values = svd.singularValues().head(r);
    sub.directions = svd.matrixV().leftCols(r);
    return sub;
}

PulseParams apply_offset(const PulseParams& p0, const CalibrationSubspace& sub,
                         const RealVector& x)
{
    if (x.size() != sub.r) throw invalid_config_error("apply_offset: offset length mismatch");
    if (!x.allFinite()) throw invalid_config_error("apply_offset: non-finite offset");
    const RealVector flat = p0.flatten() + sub.directions * x;
    return PulseParams::unflatten(flat, static_cast<int>(p0.a.size()),
                                  static_cast<int>(p0.b.size()));
}

} // namespace qcal
