#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "qcal/artifacts.hpp"
#include "qcal/config.hpp"
#include "qcal/runner.hpp"

namespace {

void print_error(const std::string& kind, const std::string& message)
{
    nlohmann::json err;
    err["error"] = kind;
    err["message"] = message;
    std::cerr << err.dump() << std::endl;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Robust single-qubit gate design, dimensionality-reduced calibration, and "
                 "benchmarking on a simulated device"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_override;
    int64_t seed_override = -1;
    int threads_override = -1;
    int shots_override = -1;

    app.add_option("--config", config_path, "Path to the run configuration (JSON)")
        ->required();
    app.add_option("--seed", seed_override, "Override the config seed");
    app.add_option("--out", out_override, "Override the output directory");
    app.add_option("--threads", threads_override, "Worker threads (default: all cores)");
    app.add_option("--shots-override", shots_override,
                   "Override every shots setting in the config");

    for (const char* name :
         {"optimize", "reduce", "calibrate", "rb", "sweep", "spectator", "baseline-drag",
          "pipeline"})
        app.add_subcommand(name)->fallthrough();

    CLI11_PARSE(app, argc, argv);
    const std::string command = app.get_subcommands().front()->get_name();

    try {
        qcal::RunConfig cfg = qcal::load_config(config_path);
        if (seed_override >= 0) {
            cfg.seed = static_cast<uint64_t>(seed_override);
            cfg.optimizer.seed = cfg.seed;
        }
        if (!out_override.empty()) cfg.output_dir = out_override;
        if (threads_override > 0) cfg.threads = threads_override;
        if (shots_override > 0) {
            cfg.device_truth.shots = shots_override;
            cfg.calibration.shots = shots_override;
            cfg.rb.shots = shots_override;
            cfg.spectroscopy.shots = shots_override;
        }
        cfg.config_hash = qcal::fnv1a_hex(qcal::canonical_config_json(cfg));
        return qcal::cli_run(command, cfg);
    } catch (const qcal::invalid_config_error& e) {
        print_error("invalid_config", e.what());
        return 1;
    } catch (const qcal::optimization_failure_error& e) {
        print_error("optimization_failure", e.what());
        return 2;
    } catch (const qcal::calibration_failure_error& e) {
        print_error("calibration_failure", e.what());
        return 3;
    } catch (const std::exception& e) {
        print_error("internal", e.what());
        return 10;
    }
}
