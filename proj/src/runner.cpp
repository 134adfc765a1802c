#include "qcal/runner.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <json.hpp>

#include "qcal/artifacts.hpp"

namespace qcal {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

double now_seconds()
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

std::string out_path(const RunConfig& cfg, const char* name)
{
    return (fs::path(cfg.output_dir) / name).string();
}

void write_manifest(const RunConfig& cfg, const std::string& command, json summary,
                    double wall_time_s)
{
    json j;
    j["command"] = command;
    j["seed"] = cfg.seed;
    j["wall_time_s"] = wall_time_s;
    j["timestamp_unix"] =
        std::chrono::duration_cast<std::chrono::seconds>(
            std::chrono::system_clock::now().time_since_epoch())
            .count();
    j["summary"] = std::move(summary);
    write_json_file(out_path(cfg, (command + "_manifest.json").c_str()), std::move(j),
                    cfg.config_hash);
}

json report_to_json(const ObjectiveReport& report)
{
    json j;
    for (const auto& [key, value] : report.as_map()) j[key] = value;
    return j;
}

std::vector<double> linspace(double lo, double hi, int n)
{
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
    return v;
}

Waveform read_waveform_csv(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::string line;
    std::vector<double> ts;
    std::vector<Complex> samples;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || line[0] == 't') continue;
        double t, i_val, q_val;
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &t, &i_val, &q_val) != 3)
            throw std::runtime_error("malformed waveform row in " + path);
        ts.push_back(t);
        samples.emplace_back(i_val, q_val);
    }
    if (samples.size() < 2) throw std::runtime_error("waveform too short in " + path);
    Waveform w;
    w.dt = ts[1] - ts[0];
    w.samples.resize(samples.size());
    for (size_t k = 0; k < samples.size(); ++k) w.samples(k) = samples[k];
    return w;
}

} // namespace

TransmonDesignProblem transmon_problem(const RunConfig& cfg)
{
    TransmonDesignProblem prob;
    prob.model = cfg.model;
    prob.synth = cfg.synth;
    prob.weights = cfg.effective_weights();
    prob.m_i = cfg.n_basis_coeffs;
    prob.m_q = cfg.n_basis_coeffs;
    return prob;
}

SpectatorDesignProblem spectator_problem(const RunConfig& cfg)
{
    SpectatorDesignProblem prob;
    prob.transmon = cfg.model;
    prob.spectator = cfg.spectator;
    prob.spectator.c = {}; // design model is the unperturbed one
    prob.synth = cfg.synth;
    prob.weights = cfg.effective_weights();
    prob.m_i = cfg.n_basis_coeffs;
    prob.m_q = cfg.n_basis_coeffs;
    return prob;
}

ObjectiveReport evaluate_design(const RunConfig& cfg, const PulseParams& p)
{
    if (cfg.objective_kind == ObjectiveKind::spectator)
        return spectator_problem(cfg).evaluate(p);
    return transmon_problem(cfg).evaluate(p);
}

std::unique_ptr<ExperimentBackend> make_device(const RunConfig& cfg)
{
    DistortionParams dist;
    dist.freq_offset_frac = cfg.device_truth.freq_offset_frac;
    dist.amp_scale = cfg.device_truth.amp_scale;
    dist.transfer_sigma = cfg.device_truth.transfer_sigma_samples;
    if (cfg.objective_kind == ObjectiveKind::spectator) {
        SpectatorParams truth = cfg.spectator;
        truth.c = cfg.device_truth.spectator_c;
        return std::make_unique<SpectatorDevice>(truth, dist, cfg.device_truth.rng_seed);
    }
    return std::make_unique<TransmonDevice>(cfg.model, dist, cfg.device_truth.rng_seed,
                                            cfg.device_truth.leakage_readout);
}

DeviceFactory make_sweep_factory(const RunConfig& cfg)
{
    if (cfg.objective_kind != ObjectiveKind::amp_detuning)
        throw invalid_config_error("sweep: only defined for the amp/detuning study");
    // Swept offsets compose with the device's hidden operating point, the way
    // intentional detuning/rescaling sweeps run on top of a calibrated setup.
    const TransmonParams model = cfg.model;
    const DistortionParams base{cfg.device_truth.freq_offset_frac, cfg.device_truth.amp_scale,
                                cfg.device_truth.transfer_sigma_samples};
    const LeakageReadout readout = cfg.device_truth.leakage_readout;
    const uint64_t base_seed = cfg.device_truth.rng_seed;
    return [model, base, readout, base_seed](double c0, double c1) {
        DistortionParams dist = base;
        dist.freq_offset_frac += c0;
        dist.amp_scale *= 1.0 + c1;
        uint64_t seed = base_seed;
        seed = splitmix64(seed ^ std::hash<double>{}(c0));
        seed = splitmix64(seed ^ splitmix64(std::hash<double>{}(c1)));
        return std::make_unique<TransmonDevice>(model, dist, seed, readout);
    };
}

namespace {

// The frequency-robustness term carries an omega-scale prefactor that makes
// the scalarized landscape extremely stiff (curvature ratios ~1e7 against the
// infidelity term); a cold quasi-Newton run spends its whole budget crawling
// along that wall. Each restart therefore walks a short homotopy in the stiff
// weight, warm-starting every stage, and the final stage runs with the exact
// configured weights.
ObjectiveFn staged_objective(const RunConfig& cfg, double freq_scale)
{
    if (cfg.objective_kind == ObjectiveKind::spectator) {
        SpectatorDesignProblem prob = spectator_problem(cfg);
        return prob.objective();
    }
    TransmonDesignProblem prob = transmon_problem(cfg);
    prob.weights[1] *= freq_scale;
    return prob.objective();
}

} // namespace

OptimizeOutcome run_optimize(const RunConfig& cfg, bool write_artifacts)
{
    const double t0 = now_seconds();
    MinimizeOptions opts = cfg.optimizer;
    opts.threads = cfg.effective_threads();

    const int m = cfg.n_basis_coeffs;
    const bool staged = cfg.objective_kind == ObjectiveKind::amp_detuning;
    const std::vector<double> stages =
        staged ? std::vector<double>{0.0, 1e-3, 1e-2, 1e-1, 1.0} : std::vector<double>{1.0};

    const ObjectiveFn final_fn = staged_objective(cfg, 1.0);
    OptResult best;
    double best_f = std::numeric_limits<double>::infinity();
    long total_evals = 0;

    for (int attempt = 0; attempt < opts.restarts; ++attempt) {
        RealVector p(2 * m + 1);
        auto rng = stream_rng(cfg.seed, static_cast<uint64_t>(attempt));
        std::normal_distribution<double> dist(0.0, opts.init_std);
        for (int i = 0; i < p.size(); ++i) p(i) = dist(rng);

        MinimizeOptions stage_opts = opts;
        stage_opts.restarts = 1;
        OptResult result;
        for (size_t s = 0; s < stages.size(); ++s) {
            const bool final_stage = s + 1 == stages.size();
            stage_opts.max_iters = final_stage
                                       ? opts.max_iters
                                       : std::max(50, opts.max_iters / 4);
            stage_opts.grad_tol = final_stage ? opts.grad_tol : std::max(opts.grad_tol, 1e-5);
            result = minimize(staged_objective(cfg, stages[s]), p, stage_opts);
            p = result.p_opt;
            total_evals += result.evaluations;
        }
        const double f_final = final_fn(p);
        if (f_final < best_f) {
            best_f = f_final;
            best = std::move(result);
        }
    }
    best.evaluations = total_evals;

    OptimizeOutcome outcome;
    const OptResult& result = best;
    outcome.p_opt = PulseParams::unflatten(result.p_opt, m, m);
    outcome.waveform = synthesize_envelope(outcome.p_opt, cfg.synth);
    outcome.report = evaluate_design(cfg, outcome.p_opt);
    outcome.result = result;
    outcome.wall_time_s = now_seconds() - t0;

    if (write_artifacts) {
        write_pulse_params(out_path(cfg, artifact_names::pulse_params), outcome.p_opt,
                           cfg.config_hash);
        write_waveform_csv(out_path(cfg, artifact_names::waveform), outcome.waveform,
                           cfg.config_hash);
        json summary;
        summary["objective"] = report_to_json(outcome.report);
        summary["infidelity"] = 1.0 - outcome.report.fidelity;
        summary["weights"] = cfg.effective_weights();
        summary["evaluations"] = outcome.result.evaluations;
        summary["converged"] = outcome.result.converged;
        summary["gradient_norm_final"] = outcome.result.gradient_norm_final;
        summary["final_objective"] = outcome.result.objective_trace.empty()
                                         ? 0.0
                                         : outcome.result.objective_trace.back();
        write_manifest(cfg, "optimize", std::move(summary), outcome.wall_time_s);
    }
    return outcome;
}

CalibrationSubspace run_reduce(const RunConfig& cfg, const PulseParams& p0, bool write_artifacts)
{
    const double t0 = now_seconds();
    const RealMatrix jac = stacked_jacobian(p0, cfg.grid, cfg.model, cfg.synth, 1e-6,
                                            cfg.effective_threads());
    CalibrationSubspace sub = calibration_directions(jac, cfg.subspace_rank);
    if (write_artifacts) {
        write_subspace(out_path(cfg, artifact_names::subspace), sub, cfg.grid, cfg.config_hash);
        json summary;
        summary["jacobian_rows"] = jac.rows();
        summary["jacobian_cols"] = jac.cols();
        summary["singular_values"] = std::vector<double>(
            sub.spectrum.data(), sub.spectrum.data() + std::min<int>(8, sub.spectrum.size()));
        write_manifest(cfg, "reduce", std::move(summary), now_seconds() - t0);
    }
    return sub;
}

CalibrateOutcome run_calibrate(const RunConfig& cfg, const PulseParams& p0,
                               const CalibrationSubspace& sub, bool write_artifacts)
{
    const double t0 = now_seconds();
    auto dev = make_device(cfg);
    CalibrateOutcome outcome;

    const Waveform w0 = synthesize_envelope(p0, cfg.synth);

    // Stage 1: amplitude alignment against the design-model curve.
    const double max_iq = std::max(w0.max_abs_iq(), 1e-9);
    const double hi = std::min(cfg.calibration.scan_hi, 0.98 / max_iq);
    const auto scales = linspace(cfg.calibration.scan_lo, hi, cfg.calibration.scan_points);
    const AmpScanCurve dev_curve =
        amplitude_scan(*dev, w0, scales, cfg.calibration.shots, 10'000, &outcome.log);
    const AmpScanCurve sim_curve = amplitude_scan_sim(cfg.model, w0, scales);
    const bool snap = cfg.objective_kind == ObjectiveKind::amp_detuning;
    outcome.amp_scale = align_amplitude(sim_curve, dev_curve, snap);

    // Stage 2 (optional): put the rotation axis in the X-Y plane.
    if (cfg.calibration.angle_calibration) {
        Waveform scaled_w = w0;
        scaled_w.samples *= outcome.amp_scale;
        const int gate = dev->define_pulse(scaled_w);
        outcome.frame_theta =
            angle_scan(*dev, gate, linspace(-kPi, kPi, 73), cfg.calibration.shots, 20'000,
                       &outcome.log);
    }

    // Stage 3: line searches along the calibration directions.
    FineCalConfig fine_cfg;
    fine_cfg.range = cfg.calibration.line_range;
    fine_cfg.points = cfg.calibration.line_points;
    fine_cfg.max_rounds = cfg.calibration.max_rounds;
    fine_cfg.shots = cfg.calibration.shots;
    fine_cfg.amp_scale = outcome.amp_scale;
    fine_cfg.frame_theta = outcome.frame_theta;
    outcome.fine = fine_calibrate(*dev, p0, cfg.synth, sub, fine_cfg, &outcome.log);

    const int m_i = static_cast<int>(p0.a.size());
    const int m_q = static_cast<int>(p0.b.size());
    (void)m_i;
    (void)m_q;
    outcome.p_star = apply_offset(p0, sub, outcome.fine.x_star);
    Waveform final_w = synthesize_envelope(outcome.p_star, cfg.synth);
    final_w.samples *= outcome.amp_scale;
    outcome.calibrated = {final_w, 0.5 * outcome.frame_theta, 0.5 * outcome.frame_theta};

    if (write_artifacts) {
        write_session_log(out_path(cfg, artifact_names::session_log), outcome.log,
                          cfg.config_hash);
        json j;
        j["x_star"] = std::vector<double>(outcome.fine.x_star.data(),
                                          outcome.fine.x_star.data() + outcome.fine.x_star.size());
        j["amp_scale"] = outcome.amp_scale;
        j["frame_theta"] = outcome.frame_theta;
        j["pre_z"] = outcome.calibrated.pre_z;
        j["post_z"] = outcome.calibrated.post_z;
        j["initial_loss"] = outcome.fine.initial_loss;
        j["final_loss"] = outcome.fine.final_loss;
        j["noise_level"] = outcome.fine.noise_level;
        j["converged"] = outcome.fine.converged;
        write_json_file(out_path(cfg, artifact_names::calibrated), std::move(j), cfg.config_hash);
        write_waveform_csv(out_path(cfg, artifact_names::calibrated_waveform),
                           outcome.calibrated.waveform, cfg.config_hash);
        json summary;
        summary["amp_scale"] = outcome.amp_scale;
        summary["frame_theta"] = outcome.frame_theta;
        summary["initial_loss"] = outcome.fine.initial_loss;
        summary["final_loss"] = outcome.fine.final_loss;
        summary["experiments"] = outcome.log.records.size();
        write_manifest(cfg, "calibrate", std::move(summary), now_seconds() - t0);
    }
    return outcome;
}

RBOutcome run_rb_study(const RunConfig& cfg, const CalibratedPulse& pulse, bool write_artifacts)
{
    const double t0 = now_seconds();
    auto dev = make_device(cfg);
    RBOptions opts = cfg.rb;
    opts.threads = cfg.effective_threads();
    RBOutcome outcome;
    outcome.data = run_rb(*dev, pulse, opts, 5'000'000);
    outcome.fit = fit_epc(outcome.data);
    if (write_artifacts) {
        std::vector<std::vector<double>> rows;
        rows.reserve(outcome.data.size());
        for (const RBPoint& pt : outcome.data)
            rows.push_back({static_cast<double>(pt.m), static_cast<double>(pt.seed_index), pt.p1});
        write_csv(out_path(cfg, artifact_names::rb_results), cfg.config_hash, "m,seed,p1", rows);
        json fit;
        fit["A"] = outcome.fit.a;
        fit["B"] = outcome.fit.b;
        fit["p"] = outcome.fit.p;
        fit["epc"] = outcome.fit.epc;
        fit["epc_stderr"] = outcome.fit.epc_stderr;
        fit["residual_rms"] = outcome.fit.residual_rms;
        write_json_file(out_path(cfg, artifact_names::rb_fit), fit, cfg.config_hash);
        json summary;
        summary["epc"] = outcome.fit.epc;
        summary["p"] = outcome.fit.p;
        write_manifest(cfg, "rb", std::move(summary), now_seconds() - t0);
    }
    return outcome;
}

std::vector<SweepPoint> run_sweep_study(const RunConfig& cfg, const CalibratedPulse& pulse,
                                        bool write_artifacts, const std::string& tag)
{
    const double t0 = now_seconds();
    RBOptions opts = cfg.rb;
    opts.threads = cfg.effective_threads();
    const auto factory = make_sweep_factory(cfg);
    std::vector<double> c0s = cfg.sweep.c0_grid.empty() ? std::vector<double>{0.0}
                                                        : cfg.sweep.c0_grid;
    std::vector<double> c1s = cfg.sweep.c1_grid.empty() ? std::vector<double>{0.0}
                                                        : cfg.sweep.c1_grid;
    const auto points = robustness_sweep(factory, pulse, c0s, c1s, opts);
    if (write_artifacts) {
        std::vector<std::vector<double>> rows;
        rows.reserve(points.size());
        for (const SweepPoint& pt : points)
            rows.push_back({pt.c0, pt.c1, pt.epc, pt.epc_stderr});
        const std::string name =
            tag.empty() ? std::string(artifact_names::sweep) : "sweep_" + tag + ".csv";
        write_csv(out_path(cfg, name.c_str()), cfg.config_hash, "c0,c1,epc,epc_stderr", rows);
        json summary;
        summary["points"] = points.size();
        write_manifest(cfg, tag.empty() ? "sweep" : "sweep_" + tag, std::move(summary),
                       now_seconds() - t0);
    }
    return points;
}

Waveform drag_baseline_waveform(const RunConfig& cfg, double duration_ns, double angle)
{
    const double duration =
        duration_ns > 0.0 ? duration_ns : cfg.synth.total_samples() * cfg.synth.dt;
    const int n = static_cast<int>(std::lround(duration / cfg.synth.dt));
    return drag_x90_waveform(cfg.model, n * cfg.synth.dt, cfg.synth.dt, cfg.drag.sigma_fraction,
                             cfg.drag.beta, angle);
}

CalibrateOutcome run_baseline_drag(const RunConfig& cfg, bool write_artifacts)
{
    const double t0 = now_seconds();
    auto dev = make_device(cfg);
    CalibrateOutcome outcome;
    const Waveform w0 = drag_baseline_waveform(cfg);

    const double max_iq = std::max(w0.max_abs_iq(), 1e-9);
    const double hi = std::min(cfg.calibration.scan_hi, 0.98 / max_iq);
    const auto scales = linspace(cfg.calibration.scan_lo, hi, cfg.calibration.scan_points);
    const AmpScanCurve dev_curve =
        amplitude_scan(*dev, w0, scales, cfg.calibration.shots, 30'000, &outcome.log);
    const AmpScanCurve sim_curve = amplitude_scan_sim(cfg.model, w0, scales);
    outcome.amp_scale = align_amplitude(sim_curve, dev_curve, /*snap_to_stationary=*/false);

    Waveform final_w = w0;
    final_w.samples *= outcome.amp_scale;
    outcome.calibrated = {final_w, 0.0, 0.0};
    outcome.fine.x_star = RealVector::Zero(cfg.subspace_rank);

    if (write_artifacts) {
        write_session_log(out_path(cfg, artifact_names::session_log), outcome.log,
                          cfg.config_hash);
        json j;
        j["x_star"] = std::vector<double>(outcome.fine.x_star.data(),
                                          outcome.fine.x_star.data() + outcome.fine.x_star.size());
        j["amp_scale"] = outcome.amp_scale;
        j["frame_theta"] = 0.0;
        j["pre_z"] = 0.0;
        j["post_z"] = 0.0;
        write_json_file(out_path(cfg, artifact_names::calibrated), std::move(j), cfg.config_hash);
        write_waveform_csv(out_path(cfg, artifact_names::calibrated_waveform),
                           outcome.calibrated.waveform, cfg.config_hash);
        json summary;
        summary["amp_scale"] = outcome.amp_scale;
        write_manifest(cfg, "baseline-drag", std::move(summary), now_seconds() - t0);
    }
    return outcome;
}

SpectroscopyOutcome run_spectator_study(const RunConfig& cfg, const CalibratedPulse& robust,
                                        bool write_artifacts)
{
    const double t0 = now_seconds();
    if (cfg.objective_kind != ObjectiveKind::spectator)
        throw invalid_config_error("spectator study: config must use the spectator objective");

    const auto phis = linspace(cfg.spectroscopy.phi_lo, cfg.spectroscopy.phi_hi,
                               cfg.spectroscopy.phi_count);
    const Waveform x180 =
        drag_baseline_waveform(cfg, cfg.spectroscopy.x_gate_duration_ns, kPi);
    const Waveform drag90 = drag_baseline_waveform(cfg);
    const InitState init =
        cfg.spectroscopy.init_minus ? InitState::minus_x : InitState::plus_x;

    SpectroscopyOutcome outcome;
    {
        auto dev = make_device(cfg);
        outcome.robust = phase_sweep_spectroscopy(*dev, robust, x180, phis, cfg.spectroscopy.ns,
                                                  init, cfg.spectroscopy.shots, 100'000);
    }
    {
        auto dev = make_device(cfg);
        outcome.drag = phase_sweep_spectroscopy(*dev, {drag90, 0.0, 0.0}, x180, phis,
                                                cfg.spectroscopy.ns, init,
                                                cfg.spectroscopy.shots, 200'000);
    }

    if (write_artifacts) {
        auto dump = [&](const SpectroscopyMaps& maps, const std::string& stem) {
            std::vector<std::vector<double>> active_rows, spec_rows;
            for (size_t ni = 0; ni < maps.ns.size(); ++ni)
                for (size_t pi = 0; pi < maps.phis.size(); ++pi) {
                    active_rows.push_back({static_cast<double>(maps.ns[ni]), maps.phis[pi],
                                           maps.active_p1(ni, pi)});
                    spec_rows.push_back({static_cast<double>(maps.ns[ni]), maps.phis[pi],
                                         maps.spectator_p1(ni, pi)});
                }
            write_csv(out_path(cfg, ("spectroscopy_" + stem + "_active.csv").c_str()),
                      cfg.config_hash, "N,phi,p1", active_rows);
            write_csv(out_path(cfg, ("spectroscopy_" + stem + "_spectator.csv").c_str()),
                      cfg.config_hash, "N,phi,p1", spec_rows);
        };
        dump(outcome.robust, "robust");
        dump(outcome.drag, "drag");
        write_manifest(cfg, "spectator", json::object(), now_seconds() - t0);
    }
    return outcome;
}

namespace {

CalibratedPulse load_calibrated_pulse(const RunConfig& cfg)
{
    const json j = read_json_file(out_path(cfg, artifact_names::calibrated));
    CalibratedPulse pulse;
    pulse.waveform = read_waveform_csv(out_path(cfg, artifact_names::calibrated_waveform));
    pulse.pre_z = j.at("pre_z").get<double>();
    pulse.post_z = j.at("post_z").get<double>();
    return pulse;
}

} // namespace

int cli_run(const std::string& command, const RunConfig& cfg)
{
    if (command == "optimize") {
        const auto outcome = run_optimize(cfg);
        std::cout << "optimize: infidelity=" << format_g17(1.0 - outcome.report.fidelity)
                  << " objective=" << format_g17(outcome.report.total) << "\n";
        return 0;
    }
    if (command == "baseline-drag") {
        const auto outcome = run_baseline_drag(cfg);
        std::cout << "baseline-drag: amp_scale=" << format_g17(outcome.amp_scale) << "\n";
        return 0;
    }
    if (command == "reduce") {
        const PulseParams p0 = read_pulse_params(out_path(cfg, artifact_names::pulse_params));
        const auto sub = run_reduce(cfg, p0);
        std::cout << "reduce: singular_values=";
        for (int i = 0; i < sub.r; ++i) std::cout << (i ? "," : "") << sub.singular_values(i);
        std::cout << "\n";
        return 0;
    }
    if (command == "calibrate") {
        const PulseParams p0 = read_pulse_params(out_path(cfg, artifact_names::pulse_params));
        const CalibrationSubspace sub = read_subspace(out_path(cfg, artifact_names::subspace));
        const auto outcome = run_calibrate(cfg, p0, sub);
        std::cout << "calibrate: initial_loss=" << format_g17(outcome.fine.initial_loss)
                  << " final_loss=" << format_g17(outcome.fine.final_loss) << "\n";
        return 0;
    }
    if (command == "rb") {
        const auto outcome = run_rb_study(cfg, load_calibrated_pulse(cfg));
        std::cout << "rb: epc=" << format_g17(outcome.fit.epc) << "\n";
        return 0;
    }
    if (command == "sweep") {
        const auto points = run_sweep_study(cfg, load_calibrated_pulse(cfg));
        std::cout << "sweep: points=" << points.size() << "\n";
        return 0;
    }
    if (command == "spectator") {
        run_spectator_study(cfg, load_calibrated_pulse(cfg));
        std::cout << "spectator: spectroscopy maps written\n";
        return 0;
    }
    if (command == "pipeline") {
        const auto opt = run_optimize(cfg);
        const auto sub = run_reduce(cfg, opt.p_opt);
        const auto cal = run_calibrate(cfg, opt.p_opt, sub);
        if (cfg.objective_kind == ObjectiveKind::spectator) {
            run_spectator_study(cfg, cal.calibrated);
        } else {
            run_rb_study(cfg, cal.calibrated);
            if (!cfg.sweep.c0_grid.empty() || !cfg.sweep.c1_grid.empty())
                run_sweep_study(cfg, cal.calibrated);
        }
        std::cout << "pipeline: complete\n";
        return 0;
    }
    throw invalid_config_error("unknown command: " + command);
}

} // namespace qcal
