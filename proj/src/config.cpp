#include "qcal/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qcal/artifacts.hpp"
#include "qcal/parallel.hpp"

namespace qcal {

using nlohmann::json;

namespace {

constexpr double kTwoPi = 2.0 * kPi;

template <typename T>
T get_or(const json& j, const char* key, T fallback)
{
    if (!j.contains(key)) return fallback;
    return j.at(key).get<T>();
}

void reject_unknown_keys(const json& j, std::initializer_list<const char*> known,
                         const std::string& section)
{
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : known)
            if (it.key() == k) {
                ok = true;
                break;
            }
        if (!ok)
            throw invalid_config_error("config: unknown key '" + it.key() + "' in " + section);
    }
}

} // namespace

int RunConfig::effective_threads() const
{
    return threads > 0 ? threads : default_thread_count();
}

std::vector<double> RunConfig::effective_weights() const
{
    if (!weights.empty()) return weights;
    return objective_kind == ObjectiveKind::spectator ? kSpectatorWeights : kAmpDetuningWeights;
}

RunConfig parse_config(const std::string& json_text)
{
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw invalid_config_error(std::string("config: JSON parse error: ") + e.what());
    }

    RunConfig cfg;
    reject_unknown_keys(j,
                        {"schema_version", "seed", "output_dir", "threads", "model", "pulse",
                         "objective", "optimizer", "grid", "device_truth", "calibration", "rb",
                         "sweep", "spectroscopy", "drag"},
                        "top level");

    cfg.schema_version = get_or(j, "schema_version", 1);
    if (cfg.schema_version != 1)
        throw invalid_config_error("config: unsupported schema_version");
    cfg.seed = get_or<uint64_t>(j, "seed", 1);
    cfg.output_dir = get_or<std::string>(j, "output_dir", "out");
    cfg.threads = get_or(j, "threads", 0);

    if (j.contains("model")) {
        const json& m = j.at("model");
        reject_unknown_keys(m,
                            {"omega_ghz", "alpha_ghz", "r_ghz", "cutoff_dim", "delta_ghz",
                             "nu_zz_khz"},
                            "model");
        cfg.model.omega = kTwoPi * get_or(m, "omega_ghz", 5.0);
        cfg.model.alpha = kTwoPi * get_or(m, "alpha_ghz", -0.330);
        cfg.model.r = kTwoPi * get_or(m, "r_ghz", 0.030);
        cfg.model.cutoff_dim = get_or(m, "cutoff_dim", 4);
        if (cfg.model.cutoff_dim < 3)
            throw invalid_config_error("config: cutoff_dim must be >= 3");
        if (cfg.model.alpha >= 0.0)
            throw invalid_config_error("config: alpha must be negative for a transmon");
        cfg.spectator.omega1 = cfg.model.omega;
        cfg.spectator.omega2 = cfg.model.omega + kTwoPi * get_or(m, "delta_ghz", -0.080);
        cfg.spectator.r = cfg.model.r;
        cfg.spectator.nu_zz = kTwoPi * 1e-6 * get_or(m, "nu_zz_khz", 50.0);
    }

    if (j.contains("pulse")) {
        const json& p = j.at("pulse");
        reject_unknown_keys(p,
                            {"n_total_samples", "n_basis_coeffs", "filter_sigma_samples",
                             "filter_radius_samples", "pad_left", "pad_right", "dt_ns"},
                            "pulse");
        SynthesisConfig synth;
        synth.dt = get_or(p, "dt_ns", 1.0 / 4.5);
        synth.filter_sigma = get_or(p, "filter_sigma_samples", 2.0);
        synth.filter_radius = get_or(p, "filter_radius_samples", 8);
        synth.n_pad_left = get_or(p, "pad_left", synth.filter_radius + 1);
        synth.n_pad_right = get_or(p, "pad_right", synth.filter_radius + 1);
        const int n_total = get_or(p, "n_total_samples", 320);
        synth.n_basis_samples = n_total - synth.n_pad_left - synth.n_pad_right;
        if (synth.n_basis_samples < 1)
            throw invalid_config_error("config: pulse padding exceeds total samples");
        cfg.synth = synth;
        cfg.n_basis_coeffs = get_or(p, "n_basis_coeffs", 20);
        if (cfg.n_basis_coeffs < 1 || cfg.n_basis_coeffs > synth.n_basis_samples)
            throw invalid_config_error("config: n_basis_coeffs out of range");
    }

    if (j.contains("objective")) {
        const json& o = j.at("objective");
        reject_unknown_keys(o, {"kind", "weights"}, "objective");
        const std::string kind = get_or<std::string>(o, "kind", "amp_detuning");
        if (kind == "amp_detuning")
            cfg.objective_kind = ObjectiveKind::amp_detuning;
        else if (kind == "spectator")
            cfg.objective_kind = ObjectiveKind::spectator;
        else
            throw invalid_config_error("config: objective.kind must be amp_detuning or spectator");
        if (o.contains("weights")) {
            cfg.weights = o.at("weights").get<std::vector<double>>();
            const size_t expected = cfg.objective_kind == ObjectiveKind::spectator ? 8 : 5;
            if (cfg.weights.size() != expected)
                throw invalid_config_error("config: objective.weights has the wrong length");
            for (const double w : cfg.weights)
                if (w < 0.0) throw invalid_config_error("config: negative objective weight");
        }
    }

    if (j.contains("optimizer")) {
        const json& o = j.at("optimizer");
        reject_unknown_keys(o, {"max_iters", "grad_tol", "restarts", "fd_step", "init_std"},
                            "optimizer");
        cfg.optimizer.max_iters = get_or(o, "max_iters", 2000);
        cfg.optimizer.grad_tol = get_or(o, "grad_tol", 1e-6);
        cfg.optimizer.restarts = get_or(o, "restarts", 1);
        cfg.optimizer.fd_step = get_or(o, "fd_step", 1e-6);
        cfg.optimizer.init_std = get_or(o, "init_std", 0.1);
        if (cfg.optimizer.max_iters < 1 || cfg.optimizer.restarts < 1)
            throw invalid_config_error("config: optimizer budgets must be positive");
    }
    cfg.optimizer.seed = cfg.seed;

    if (j.contains("grid")) {
        const json& g = j.at("grid");
        reject_unknown_keys(g, {"freq_fracs", "amp_fracs", "rank"}, "grid");
        const auto freqs = get_or(g, "freq_fracs", std::vector<double>{-1e-4, 0.0, 1e-4});
        const auto amps = get_or(g, "amp_fracs", std::vector<double>{-0.05, 0.0, 0.05});
        cfg.grid.points.clear();
        for (const double f : freqs)
            for (const double a : amps) cfg.grid.points.push_back({f, a});
        bool has_nominal = false;
        for (const auto& c : cfg.grid.points)
            if (c.freq_frac == 0.0 && c.amp_frac == 0.0) has_nominal = true;
        if (!has_nominal)
            throw invalid_config_error("config: model grid must contain the nominal point");
        cfg.subspace_rank = get_or(g, "rank", 4);
        if (cfg.subspace_rank < 1)
            throw invalid_config_error("config: subspace rank must be >= 1");
    }

    if (j.contains("device_truth")) {
        const json& d = j.at("device_truth");
        reject_unknown_keys(d,
                            {"freq_offset_frac", "amp_scale", "transfer_sigma_samples", "shots",
                             "rng_seed", "leakage_readout", "spectator_c"},
                            "device_truth");
        cfg.device_truth.freq_offset_frac = get_or(d, "freq_offset_frac", 0.0);
        cfg.device_truth.amp_scale = get_or(d, "amp_scale", 1.0);
        cfg.device_truth.transfer_sigma_samples = get_or(d, "transfer_sigma_samples", 0.0);
        cfg.device_truth.shots = get_or(d, "shots", 1024);
        cfg.device_truth.rng_seed = get_or<uint64_t>(d, "rng_seed", 99);
        const std::string readout = get_or<std::string>(d, "leakage_readout", "as_one");
        if (readout == "as_one")
            cfg.device_truth.leakage_readout = LeakageReadout::as_one;
        else if (readout == "as_zero")
            cfg.device_truth.leakage_readout = LeakageReadout::as_zero;
        else
            throw invalid_config_error("config: leakage_readout must be as_one or as_zero");
        if (d.contains("spectator_c")) {
            const auto c = d.at("spectator_c").get<std::vector<double>>();
            if (c.size() != 6)
                throw invalid_config_error("config: spectator_c must have 6 entries");
            for (size_t i = 0; i < 6; ++i) cfg.device_truth.spectator_c[i] = c[i];
        }
    }

    // Stage 2 runs by default for the spectator pulse only.
    cfg.calibration.angle_calibration = cfg.objective_kind == ObjectiveKind::spectator;
    if (j.contains("calibration")) {
        const json& c = j.at("calibration");
        reject_unknown_keys(c,
                            {"scan_points", "scan_lo", "scan_hi", "shots", "angle_calibration",
                             "line_points", "line_range", "max_rounds"},
                            "calibration");
        cfg.calibration.scan_points = get_or(c, "scan_points", 41);
        cfg.calibration.scan_lo = get_or(c, "scan_lo", 0.8);
        cfg.calibration.scan_hi = get_or(c, "scan_hi", 1.25);
        cfg.calibration.shots = get_or(c, "shots", 1024);
        cfg.calibration.angle_calibration =
            get_or(c, "angle_calibration", cfg.calibration.angle_calibration);
        cfg.calibration.line_points = get_or(c, "line_points", 21);
        cfg.calibration.line_range = get_or(c, "line_range", 0.5);
        cfg.calibration.max_rounds = get_or(c, "max_rounds", 6);
        if (cfg.calibration.scan_points < 5 || cfg.calibration.line_points < 3)
            throw invalid_config_error("config: calibration grids too small");
    }

    if (j.contains("rb")) {
        const json& r = j.at("rb");
        reject_unknown_keys(r, {"lengths", "n_seeds", "shots", "sequence_seed"}, "rb");
        cfg.rb.lengths = get_or(r, "lengths", cfg.rb.lengths);
        cfg.rb.n_seeds = get_or(r, "n_seeds", 10);
        cfg.rb.shots = get_or(r, "shots", 1024);
        cfg.rb.sequence_seed = get_or<uint64_t>(r, "sequence_seed", 7);
        if (cfg.rb.lengths.size() < 3)
            throw invalid_config_error("config: rb.lengths needs at least 3 entries");
    }

    if (j.contains("sweep")) {
        const json& s = j.at("sweep");
        reject_unknown_keys(s, {"c0_grid", "c1_grid"}, "sweep");
        cfg.sweep.c0_grid = get_or(s, "c0_grid", std::vector<double>{0.0});
        cfg.sweep.c1_grid = get_or(s, "c1_grid", std::vector<double>{0.0});
    }

    if (j.contains("spectroscopy")) {
        const json& s = j.at("spectroscopy");
        reject_unknown_keys(s,
                            {"phi_count", "phi_lo", "phi_hi", "ns", "shots", "init",
                             "x_gate_duration_ns"},
                            "spectroscopy");
        cfg.spectroscopy.phi_count = get_or(s, "phi_count", 41);
        cfg.spectroscopy.phi_lo = get_or(s, "phi_lo", -kPi);
        cfg.spectroscopy.phi_hi = get_or(s, "phi_hi", kPi);
        cfg.spectroscopy.ns = get_or(s, "ns", cfg.spectroscopy.ns);
        cfg.spectroscopy.shots = get_or(s, "shots", 1024);
        const std::string init = get_or<std::string>(s, "init", "minus");
        if (init == "minus")
            cfg.spectroscopy.init_minus = true;
        else if (init == "plus")
            cfg.spectroscopy.init_minus = false;
        else
            throw invalid_config_error("config: spectroscopy.init must be plus or minus");
        cfg.spectroscopy.x_gate_duration_ns = get_or(s, "x_gate_duration_ns", 71.0);
    }

    if (j.contains("drag")) {
        const json& d = j.at("drag");
        reject_unknown_keys(d, {"sigma_fraction", "beta"}, "drag");
        cfg.drag.sigma_fraction = get_or(d, "sigma_fraction", 0.25);
        cfg.drag.beta = get_or(d, "beta", 0.0);
    }

    cfg.config_hash = fnv1a_hex(canonical_config_json(cfg));
    return cfg;
}

RunConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw invalid_config_error("config: cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string canonical_config_json(const RunConfig& cfg)
{
    json j;
    j["schema_version"] = cfg.schema_version;
    j["seed"] = cfg.seed;
    j["output_dir"] = cfg.output_dir;
    j["model"] = {{"omega_ghz", cfg.model.omega / kTwoPi},
                  {"alpha_ghz", cfg.model.alpha / kTwoPi},
                  {"r_ghz", cfg.model.r / kTwoPi},
                  {"cutoff_dim", cfg.model.cutoff_dim},
                  {"delta_ghz", cfg.spectator.delta() / kTwoPi},
                  {"nu_zz_khz", cfg.spectator.nu_zz / (kTwoPi * 1e-6)}};
    j["pulse"] = {{"n_total_samples", cfg.synth.total_samples()},
                  {"n_basis_coeffs", cfg.n_basis_coeffs},
                  {"filter_sigma_samples", cfg.synth.filter_sigma},
                  {"filter_radius_samples", cfg.synth.filter_radius},
                  {"pad_left", cfg.synth.n_pad_left},
                  {"pad_right", cfg.synth.n_pad_right},
                  {"dt_ns", cfg.synth.dt}};
    j["objective"] = {{"kind", cfg.objective_kind == ObjectiveKind::spectator ? "spectator"
                                                                              : "amp_detuning"},
                      {"weights", cfg.effective_weights()}};
    j["optimizer"] = {{"max_iters", cfg.optimizer.max_iters},
                      {"grad_tol", cfg.optimizer.grad_tol},
                      {"restarts", cfg.optimizer.restarts},
                      {"fd_step", cfg.optimizer.fd_step},
                      {"init_std", cfg.optimizer.init_std}};
    json grid = json::array();
    for (const auto& c : cfg.grid.points) grid.push_back({c.freq_frac, c.amp_frac});
    j["grid"] = {{"points", grid}, {"rank", cfg.subspace_rank}};
    j["device_truth"] = {{"freq_offset_frac", cfg.device_truth.freq_offset_frac},
                         {"amp_scale", cfg.device_truth.amp_scale},
                         {"transfer_sigma_samples", cfg.device_truth.transfer_sigma_samples},
                         {"shots", cfg.device_truth.shots},
                         {"rng_seed", cfg.device_truth.rng_seed},
                         {"leakage_readout", cfg.device_truth.leakage_readout ==
                                                     LeakageReadout::as_one
                                                 ? "as_one"
                                                 : "as_zero"},
                         {"spectator_c", cfg.device_truth.spectator_c}};
    j["calibration"] = {{"scan_points", cfg.calibration.scan_points},
                        {"scan_lo", cfg.calibration.scan_lo},
                        {"scan_hi", cfg.calibration.scan_hi},
                        {"shots", cfg.calibration.shots},
                        {"angle_calibration", cfg.calibration.angle_calibration},
                        {"line_points", cfg.calibration.line_points},
                        {"line_range", cfg.calibration.line_range},
                        {"max_rounds", cfg.calibration.max_rounds}};
    j["rb"] = {{"lengths", cfg.rb.lengths},
               {"n_seeds", cfg.rb.n_seeds},
               {"shots", cfg.rb.shots},
               {"sequence_seed", cfg.rb.sequence_seed}};
    j["sweep"] = {{"c0_grid", cfg.sweep.c0_grid}, {"c1_grid", cfg.sweep.c1_grid}};
    j["spectroscopy"] = {{"phi_count", cfg.spectroscopy.phi_count},
                         {"phi_lo", cfg.spectroscopy.phi_lo},
                         {"phi_hi", cfg.spectroscopy.phi_hi},
                         {"ns", cfg.spectroscopy.ns},
                         {"shots", cfg.spectroscopy.shots},
                         {"init", cfg.spectroscopy.init_minus ? "minus" : "plus"},
                         {"x_gate_duration_ns", cfg.spectroscopy.x_gate_duration_ns}};
    j["drag"] = {{"sigma_fraction", cfg.drag.sigma_fraction}, {"beta", cfg.drag.beta}};
    return j.dump();
}

} // namespace qcal
