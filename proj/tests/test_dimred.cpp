#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qcal/dimred.hpp"
#include "qcal/sim.hpp"

using namespace qcal;

namespace {

SynthesisConfig tiny_synth()
{
    SynthesisConfig cfg;
    cfg.n_basis_samples = 62; // 80 samples total
    return cfg;
}

PulseParams tiny_params(uint64_t seed, int m = 6, double scale = 0.4)
{
    auto rng = stream_rng(seed, 0);
    std::normal_distribution<double> dist(0.0, scale);
    PulseParams p;
    p.a.resize(m);
    p.b.resize(m);
    for (int i = 0; i < m; ++i) {
        p.a(i) = dist(rng);
        p.b(i) = dist(rng);
    }
    p.phase = 0.1 * dist(rng);
    return p;
}

} // namespace

TEST_CASE("qubit block of the zero pulse is the identity")
{
    TransmonParams model;
    PulseParams zeros;
    zeros.a = RealVector::Zero(6);
    zeros.b = RealVector::Zero(6);
    const Matrix2 block = qubit_block_map(zeros, {}, model, tiny_synth());
    CHECK((block - Matrix2::Identity()).norm() < 1e-12);
}

TEST_CASE("qubit block is a contraction")
{
    TransmonParams model;
    for (uint64_t seed = 0; seed < 4; ++seed) {
        const Matrix2 block = qubit_block_map(tiny_params(seed), {}, model, tiny_synth());
        Eigen::JacobiSVD<Matrix2> svd(block);
        CHECK(svd.singularValues()(0) <= 1.0 + 1e-12);
    }
}

TEST_CASE("stacked jacobian shape and duplicate grid points")
{
    TransmonParams model;
    const PulseParams p0 = tiny_params(3);
    ModelGrid grid = ModelGrid::paper_default();
    grid.points.push_back(grid.points[4]); // duplicate the nominal point

    const RealMatrix jac = stacked_jacobian(p0, grid, model, tiny_synth(), 1e-6, 2);
    CHECK(jac.rows() == 8 * 10);
    CHECK(jac.cols() == 13);
    CHECK((jac.middleRows(8 * 4, 8) - jac.middleRows(8 * 9, 8)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("jacobian predicts the stacked map to second order")
{
    TransmonParams model;
    const SynthesisConfig cfg = tiny_synth();
    const PulseParams p0 = tiny_params(5);
    const ModelGrid grid = ModelGrid::paper_default();
    const RealMatrix jac = stacked_jacobian(p0, grid, model, cfg, 1e-6, 2);
    const CalibrationSubspace sub = calibration_directions(jac, 4);
    const RealVector w0 = stacked_map(p0, grid, model, cfg);
    const int m_i = 6, m_q = 6;

    for (int i = 0; i < 4; ++i) {
        auto residual = [&](double eps) {
            const RealVector flat = p0.flatten() + eps * sub.directions.col(i);
            const RealVector w = stacked_map(PulseParams::unflatten(flat, m_i, m_q), grid,
                                             model, cfg);
            return (w - w0 - eps * (jac * sub.directions.col(i))).norm();
        };
        const double r1 = residual(1e-3);
        const double r2 = residual(5e-4);
        CHECK(r1 / r2 == doctest::Approx(4.0).epsilon(0.13)); // within [3.5, 4.5]
    }
}

TEST_CASE("calibration directions of a diagonal matrix")
{
    RealMatrix jac = RealMatrix::Zero(6, 5);
    jac(0, 0) = 3.0;
    jac(1, 1) = 2.0;
    jac(2, 2) = 1.0;
    const CalibrationSubspace sub = calibration_directions(jac, 2);
    CHECK(sub.singular_values(0) == doctest::Approx(3.0));
    CHECK(sub.singular_values(1) == doctest::Approx(2.0));
    CHECK(std::abs(sub.directions(0, 0)) == doctest::Approx(1.0));
    CHECK(std::abs(sub.directions(1, 1)) == doctest::Approx(1.0));

    CHECK_THROWS_AS(calibration_directions(jac, 6), invalid_config_error);
    CHECK_THROWS_AS(calibration_directions(jac, 0), invalid_config_error);
}

TEST_CASE("eckart-young reconstruction bound and orthonormality")
{
    auto rng = stream_rng(8, 0);
    std::normal_distribution<double> dist(0.0, 1.0);
    RealMatrix jac(12, 9);
    for (int i = 0; i < 12; ++i)
        for (int j = 0; j < 9; ++j) jac(i, j) = dist(rng);

    const int r = 4;
    const CalibrationSubspace sub = calibration_directions(jac, r);
    CHECK((sub.directions.transpose() * sub.directions - RealMatrix::Identity(r, r))
              .cwiseAbs()
              .maxCoeff() < 1e-10);
    for (int i = 1; i < r; ++i)
        CHECK(sub.singular_values(i) <= sub.singular_values(i - 1) + 1e-14);

    // Rank-r truncation error is bounded by the tail singular values.
    Eigen::JacobiSVD<RealMatrix> svd(jac, Eigen::ComputeThinU | Eigen::ComputeThinV);
    RealMatrix approx = RealMatrix::Zero(12, 9);
    for (int i = 0; i < r; ++i)
        approx += svd.singularValues()(i) * svd.matrixU().col(i) *
                  svd.matrixV().col(i).transpose();
    const double tail = sub.spectrum.tail(sub.spectrum.size() - r).norm();
    CHECK((jac - approx).norm() <= tail + 1e-10);
}

TEST_CASE("apply_offset is affine")
{
    const PulseParams p0 = tiny_params(2);
    RealMatrix jac = RealMatrix::Random(16, 13);
    const CalibrationSubspace sub = calibration_directions(jac, 4);

    const PulseParams same = apply_offset(p0, sub, RealVector::Zero(4));
    CHECK((same.flatten() - p0.flatten()).cwiseAbs().maxCoeff() == doctest::Approx(0.0));

    RealVector x(4), y(4);
    x << 0.1, -0.2, 0.05, 0.0;
    y << -0.3, 0.1, 0.0, 0.2;
    const PulseParams p_xy = apply_offset(apply_offset(p0, sub, x), sub, y);
    const PulseParams p_sum = apply_offset(p0, sub, x + y);
    CHECK((p_xy.flatten() - p_sum.flatten()).cwiseAbs().maxCoeff() < 1e-14);

    RealVector bad(3);
    bad << 1, 2, 3;
    CHECK_THROWS_AS(apply_offset(p0, sub, bad), invalid_config_error);
}
