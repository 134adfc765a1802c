#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "qcal/calib.hpp"
#include "qcal/dimred.hpp"
#include "qcal/pulse.hpp"
#include "qcal/types.hpp"

namespace qcal {

std::string fnv1a_hex(const std::string& text);
std::string format_g17(double v);

// Every CSV artifact starts with a "# config_hash=<hex>" comment line
// followed by the header row.
void write_csv(const std::string& path, const std::string& config_hash,
               const std::string& header, const std::vector<std::vector<double>>& rows);

void write_json_file(const std::string& path, nlohmann::json j, const std::string& config_hash);
nlohmann::json read_json_file(const std::string& path);

void write_waveform_csv(const std::string& path, const Waveform& w,
                        const std::string& config_hash);

void write_pulse_params(const std::string& path, const PulseParams& p,
                        const std::string& config_hash);
PulseParams read_pulse_params(const std::string& path);

void write_subspace(const std::string& path, const CalibrationSubspace& sub,
                    const ModelGrid& grid, const std::string& config_hash);
CalibrationSubspace read_subspace(const std::string& path);

void write_session_log(const std::string& path, const SessionLog& log,
                       const std::string& config_hash);

} // namespace qcal
