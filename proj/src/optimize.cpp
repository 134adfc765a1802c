#include "qcal/optimize.hpp"

#include <cmath>
#include <limits>

#include "qcal/parallel.hpp"

namespace qcal {

namespace {

double safe_eval(const ObjectiveFn& f, const RealVector& p)
{
    // Out-of-domain points (e.g. clipped waveforms) act as +inf barriers so
    // the line search backtracks instead of aborting.
    try {
        const double v = f(p);
        return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
    } catch (const clipping_error&) {
        return std::numeric_limits<double>::infinity();
    }
}

struct SingleRun {
    RealVector p;
    std::vector<double> trace;
    double grad_norm = 0.0;
    long evals = 0;
    bool converged = false;
    double f_final = std::numeric_limits<double>::infinity();
};

SingleRun bfgs_run(const ObjectiveFn& f, RealVector p, const MinimizeOptions& opts)
{
    const int n = static_cast<int>(p.size());
    SingleRun run;

    double fp = safe_eval(f, p);
    run.evals += 1;
    if (!std::isfinite(fp))
        throw optimization_failure_error("minimize: objective not finite at the initial point");
    run.trace.push_back(fp);

    RealMatrix h_inv = RealMatrix::Identity(n, n);
    RealVector g = gradient(f, p, opts.fd_step, opts.threads, &run.evals);
    if (!g.allFinite())
        throw numeric_integrity_error("minimize: non-finite gradient");

    bool fresh_model = true;
    for (int iter = 0; iter < opts.max_iters; ++iter) {
        run.grad_norm = g.cwiseAbs().maxCoeff();
        if (run.grad_norm <= opts.grad_tol) {
            run.converged = true;
            break;
        }

        RealVector direction = -(h_inv * g);
        double slope = g.dot(direction);
        if (slope >= 0.0) { // reset on loss of descent
            h_inv = RealMatrix::Identity(n, n);
            fresh_model = true;
            direction = -g;
            slope = -g.squaredNorm();
        }

        auto backtrack = [&](const RealVector& dir, double dir_slope, double step0,
                             RealVector& p_out, double& f_out) {
            double step = step0;
            while (step > 1e-14) {
                p_out = p + step * dir;
                f_out = safe_eval(f, p_out);
                run.evals += 1;
                if (f_out <= fp + opts.armijo_c * step * dir_slope) return true;
                step *= 0.5;
            }
            return false;
        };

        // A fresh quadratic model knows nothing about scale; start the first
        // step at ~unit displacement instead of a full gradient step.
        const double step0 = fresh_model ? std::min(1.0, 1.0 / run.grad_norm) : 1.0;
        double f_next = std::numeric_limits<double>::infinity();
        RealVector p_next;
        bool accepted = backtrack(direction, slope, step0, p_next, f_next);
        if (!accepted && !fresh_model) {
            // Retry once along steepest descent with a reset model before
            // declaring the search direction exhausted.
            h_inv = RealMatrix::Identity(n, n);
            fresh_model = true;
            direction = -g;
            slope = -g.squaredNorm();
            accepted = backtrack(direction, slope, std::min(1.0, 1.0 / run.grad_norm), p_next,
                                 f_next);
        }
        if (!accepted) break; // flat to machine precision along the search direction

        RealVector g_next = gradient(f, p_next, opts.fd_step, opts.threads, &run.evals);
        if (!g_next.allFinite())
            throw numeric_integrity_error("minimize: non-finite gradient");

        const RealVector s = p_next - p;
        const RealVector y = g_next - g;
        const double sy = s.dot(y);
        if (sy > 1e-12 * s.norm() * y.norm()) {
            // Shanno scaling of a freshly reset model before its first update.
            if (fresh_model) h_inv *= sy / y.squaredNorm();
            const double rho = 1.0 / sy;
            const RealMatrix eye = RealMatrix::Identity(n, n);
            const RealMatrix left = eye - rho * s * y.transpose();
            h_inv = left * h_inv * left.transpose() + rho * s * s.transpose();
            fresh_model = false;
        }

        p = p_next;
        fp = f_next;
        g = g_next;
        run.trace.push_back(fp);
    }

    run.grad_norm = g.cwiseAbs().maxCoeff();
    run.p = p;
    run.f_final = fp;
    return run;
}

} // namespace

RealVector gradient(const ObjectiveFn& f, const RealVector& p, double h, int threads,
                    long* eval_count)
{
    if (!(h > 0.0)) throw invalid_config_error("gradient: step must be positive");
    const int n = static_cast<int>(p.size());
    RealVector g(n);
    std::vector<double> plus(n), minus(n);
    parallel_for(2 * n, threads, [&](int idx) {
        const int i = idx / 2;
        const double sign = (idx % 2 == 0) ? 1.0 : -1.0;
        RealVector q = p;
        q(i) += sign * h;
        const double v = f(q);
        if (!std::isfinite(v))
            throw numeric_integrity_error("gradient: non-finite objective value");
        (sign > 0 ? plus : minus)[i] = v;
    });
    for (int i = 0; i < n; ++i) g(i) = (plus[i] - minus[i]) / (2.0 * h);
    if (eval_count) *eval_count += 2 * n;
    return g;
}

OptResult minimize(const ObjectiveFn& f, const RealVector& p_init, const MinimizeOptions& opts)
{
    if (opts.restarts < 1) throw invalid_config_error("minimize: restarts must be >= 1");

    OptResult best;
    double best_f = std::numeric_limits<double>::infinity();
    long total_evals = 0;
    int failures = 0;
    std::string last_error;

    for (int attempt = 0; attempt < opts.restarts; ++attempt) {
        RealVector p0 = p_init;
        if (attempt > 0) {
            auto rng = stream_rng(opts.seed, static_cast<uint64_t>(attempt));
            std::normal_distribution<double> dist(0.0, opts.init_std);
            for (int i = 0; i < p0.size(); ++i) p0(i) = dist(rng);
        }
        try {
            SingleRun run = bfgs_run(f, p0, opts);
            total_evals += run.evals;
            if (run.f_final < best_f) {
                best_f = run.f_final;
                best.p_opt = run.p;
                best.objective_trace = std::move(run.trace);
                best.gradient_norm_final = run.grad_norm;
                best.converged = run.converged;
            }
        } catch (const std::exception& e) {
            ++failures;
            last_error = e.what();
        }
    }

    if (failures == opts.restarts)
        throw optimization_failure_error("minimize: all restarts failed (" + last_error + ")");
    best.evaluations = total_evals;
    return best;
}

} // namespace qcal
