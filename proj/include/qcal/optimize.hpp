#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "qcal/types.hpp"

namespace qcal {

using ObjectiveFn = std::function<double(const RealVector&)>;

struct MinimizeOptions {
    int max_iters = 2000;
    double grad_tol = 1e-6;    // on the gradient inf-norm
    int restarts = 1;
    uint64_t seed = 0;
    double fd_step = 1e-6;
    double init_std = 0.1;     // for Gaussian restarts
    int threads = 1;
    double armijo_c = 1e-4;
};

struct OptResult {
    RealVector p_opt;
    std::vector<double> objective_trace; // accepted objective values, non-increasing
    double gradient_norm_final = 0.0;
    long evaluations = 0;
    bool converged = false;
};

// Central finite differences, g_i = [f(p + h e_i) - f(p - h e_i)] / 2h.
// Component evaluations may run in parallel; f must be pure.
RealVector gradient(const ObjectiveFn& f, const RealVector& p, double h, int threads = 1,
                    long* eval_count = nullptr);

// BFGS with Armijo backtracking line search and seeded Gaussian multi-start.
// Attempt 0 starts from p_init; attempts k >= 1 draw p ~ N(0, init_std^2).
OptResult minimize(const ObjectiveFn& f, const RealVector& p_init, const MinimizeOptions& opts);

} // namespace qcal
