#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qcal/optimize.hpp"

using namespace qcal;

TEST_CASE("finite-difference gradient on analytic functions")
{
    const ObjectiveFn quad = [](const RealVector& p) { return 0.5 * p.squaredNorm(); };
    RealVector p(3);
    p << 1.0, -2.0, 0.5;
    const RealVector g = gradient(quad, p, 1e-6);
    CHECK((g - p).cwiseAbs().maxCoeff() < 1e-9);

    const ObjectiveFn constant = [](const RealVector&) { return 3.0; };
    CHECK(gradient(constant, p, 1e-6).cwiseAbs().maxCoeff() == doctest::Approx(0.0));

    const ObjectiveFn bad = [](const RealVector& q) {
        return q(0) > 1.0 ? std::numeric_limits<double>::quiet_NaN() : 0.0;
    };
    RealVector edge(1);
    edge << 1.0;
    CHECK_THROWS_AS(gradient(bad, edge, 1e-3), numeric_integrity_error);
    CHECK_THROWS_AS(gradient(quad, p, 0.0), invalid_config_error);
}

TEST_CASE("gradient is independent of the thread count")
{
    const ObjectiveFn f = [](const RealVector& p) {
        double acc = 0.0;
        for (int i = 0; i < p.size(); ++i) acc += std::sin(1.3 * p(i)) * std::cos(0.7 * p(0));
        return acc;
    };
    RealVector p = RealVector::LinSpaced(12, -1.0, 2.0);
    const RealVector g1 = gradient(f, p, 1e-6, 1);
    const RealVector g4 = gradient(f, p, 1e-6, 4);
    for (int i = 0; i < p.size(); ++i) CHECK(g1(i) == g4(i));
}

TEST_CASE("quadratic bowl converges to the center")
{
    RealVector target(5);
    target << 0.3, -1.2, 2.0, 0.0, -0.4;
    const ObjectiveFn f = [&](const RealVector& p) { return 0.5 * (p - target).squaredNorm(); };
    auto rng = stream_rng(1, 0);
    std::normal_distribution<double> dist(0.0, 1.0);
    RealVector p0(5);
    for (int i = 0; i < 5; ++i) p0(i) = dist(rng);

    MinimizeOptions opts;
    opts.grad_tol = 1e-10;
    const OptResult res = minimize(f, p0, opts);
    CHECK(res.converged);
    CHECK((res.p_opt - target).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("rosenbrock valley from the classic start")
{
    const ObjectiveFn f = [](const RealVector& p) {
        const double a = 1.0 - p(0);
        const double b = p(1) - p(0) * p(0);
        return a * a + 100.0 * b * b;
    };
    RealVector p0(2);
    p0 << -1.2, 1.0;
    MinimizeOptions opts;
    opts.grad_tol = 1e-9;
    opts.max_iters = 5000;
    const OptResult res = minimize(f, p0, opts);
    CHECK(res.p_opt(0) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(res.p_opt(1) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("accepted objective values never increase")
{
    const ObjectiveFn f = [](const RealVector& p) {
        double acc = 0.0;
        for (int i = 0; i < p.size(); ++i)
            acc += std::cos(2.0 * p(i)) + 0.3 * p(i) * p(i) + 0.05 * p(i) * p((i + 1) % p.size());
        return acc;
    };
    auto rng = stream_rng(3, 0);
    std::normal_distribution<double> dist(0.0, 1.5);
    RealVector p0(8);
    for (int i = 0; i < 8; ++i) p0(i) = dist(rng);
    const OptResult res = minimize(f, p0, MinimizeOptions{});
    for (size_t i = 1; i < res.objective_trace.size(); ++i)
        CHECK(res.objective_trace[i] <= res.objective_trace[i - 1] + 1e-14);
}

TEST_CASE("identical seed and options give identical results")
{
    const ObjectiveFn f = [](const RealVector& p) {
        double acc = 0.0;
        for (int i = 0; i < p.size(); ++i) acc += std::cos(2.0 * p(i)) + 0.2 * p(i) * p(i);
        return acc;
    };
    RealVector p0 = RealVector::Zero(6);
    MinimizeOptions opts;
    opts.restarts = 3;
    opts.seed = 42;
    const OptResult r1 = minimize(f, p0, opts);
    const OptResult r2 = minimize(f, p0, opts);
    REQUIRE(r1.p_opt.size() == r2.p_opt.size());
    for (int i = 0; i < r1.p_opt.size(); ++i) CHECK(r1.p_opt(i) == r2.p_opt(i));
    CHECK(r1.evaluations == r2.evaluations);
    CHECK(r1.objective_trace == r2.objective_trace);
}

TEST_CASE("directional derivatives agree with the assembled gradient")
{
    const ObjectiveFn f = [](const RealVector& p) {
        double acc = 0.0;
        for (int i = 0; i < p.size(); ++i)
            acc += std::exp(-0.5 * p(i) * p(i)) + 0.1 * std::sin(p((i + 2) % p.size()));
        return acc;
    };
    auto rng = stream_rng(17, 0);
    std::normal_distribution<double> dist(0.0, 0.5);
    RealVector p(10);
    for (int i = 0; i < 10; ++i) p(i) = dist(rng);
    const RealVector g = gradient(f, p, 1e-6);

    for (uint64_t s = 0; s < 5; ++s) {
        auto rng_dir = stream_rng(100 + s, 0);
        RealVector dir(10);
        for (int i = 0; i < 10; ++i) dir(i) = dist(rng_dir);
        dir.normalize();
        const double h = 1e-6;
        const double directional =
            (f(p + h * dir) - f(p - h * dir)) / (2.0 * h);
        CHECK(directional == doctest::Approx(g.dot(dir)).epsilon(1e-3));
    }
}

TEST_CASE("all-restart failure raises optimization failure")
{
    const ObjectiveFn nan_fn = [](const RealVector&) {
        return std::numeric_limits<double>::quiet_NaN();
    };
    MinimizeOptions opts;
    opts.restarts = 2;
    CHECK_THROWS_AS(minimize(nan_fn, RealVector::Zero(2), opts),
                    optimization_failure_error);
}
