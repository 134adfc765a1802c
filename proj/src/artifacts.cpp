#include "qcal/artifacts.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

namespace qcal {

using nlohmann::json;

std::string fnv1a_hex(const std::string& text)
{
    uint64_t h = 0xcbf29ce484222325ULL;
    for (const unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string format_g17(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

std::ofstream open_out(const std::string& path)
{
    const auto parent = std::filesystem::path(path).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    return out;
}

} // namespace

void write_csv(const std::string& path, const std::string& config_hash,
               const std::string& header, const std::vector<std::vector<double>>& rows)
{
    std::ofstream out = open_out(path);
    out << "# config_hash=" << config_hash << "\n" << header << "\n";
    for (const auto& row : rows) {
        for (size_t i = 0; i < row.size(); ++i) {
            if (i) out << ",";
            out << format_g17(row[i]);
        }
        out << "\n";
    }
}

void write_json_file(const std::string& path, json j, const std::string& config_hash)
{
    if (!config_hash.empty()) j["config_hash"] = config_hash;
    std::ofstream out = open_out(path);
    out << j.dump(2) << "\n";
}

json read_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    json j;
    in >> j;
    return j;
}

void write_waveform_csv(const std::string& path, const Waveform& w,
                        const std::string& config_hash)
{
    std::vector<std::vector<double>> rows;
    rows.reserve(w.size());
    for (int k = 0; k < w.size(); ++k)
        rows.push_back({k * w.dt, w.samples(k).real(), w.samples(k).imag()});
    write_csv(path, config_hash, "t_ns,I,Q", rows);
}

void write_pulse_params(const std::string& path, const PulseParams& p,
                        const std::string& config_hash)
{
    json j;
    j["a"] = std::vector<double>(p.a.data(), p.a.data() + p.a.size());
    j["b"] = std::vector<double>(p.b.data(), p.b.data() + p.b.size());
    j["phase"] = p.phase;
    write_json_file(path, std::move(j), config_hash);
}

PulseParams read_pulse_params(const std::string& path)
{
    const json j = read_json_file(path);
    PulseParams p;
    const auto a = j.at("a").get<std::vector<double>>();
    const auto b = j.at("b").get<std::vector<double>>();
    p.a = Eigen::Map<const RealVector>(a.data(), a.size());
    p.b = Eigen::Map<const RealVector>(b.data(), b.size());
    p.phase = j.at("phase").get<double>();
    return p;
}

void write_subspace(const std::string& path, const CalibrationSubspace& sub,
                    const ModelGrid& grid, const std::string& config_hash)
{
    json j;
    j["flatten_order"] = "re-im-rowmajor-v1";
    j["singular_values"] = std::vector<double>(sub.singular_values.data(),
                                               sub.singular_values.data() +
                                                   sub.singular_values.size());
    j["spectrum"] =
        std::vector<double>(sub.spectrum.data(), sub.spectrum.data() + sub.spectrum.size());
    json dirs = json::array();
    for (int c = 0; c < sub.r; ++c) {
        json col = json::array();
        for (int i = 0; i < sub.directions.rows(); ++i) col.push_back(sub.directions(i, c));
        dirs.push_back(col);
    }
    j["directions"] = dirs;
    json g = json::array();
    for (const auto& pt : grid.points)
        g.push_back({{"freq_frac", pt.freq_frac}, {"amp_frac", pt.amp_frac}});
    j["grid"] = g;
    write_json_file(path, std::move(j), config_hash);
}

CalibrationSubspace read_subspace(const std::string& path)
{
    const json j = read_json_file(path);
    CalibrationSubspace sub;
    const auto sv = j.at("singular_values").get<std::vector<double>>();
    sub.singular_values = Eigen::Map<const RealVector>(sv.data(), sv.size());
    const auto spectrum = j.at("spectrum").get<std::vector<double>>();
    sub.spectrum = Eigen::Map<const RealVector>(spectrum.data(), spectrum.size());
    const auto dirs = j.at("directions").get<std::vector<std::vector<double>>>();
    sub.r = static_cast<int>(dirs.size());
    if (sub.r == 0) throw invalid_config_error("subspace file: no directions");
    sub.directions.resize(dirs[0].size(), sub.r);
    for (int c = 0; c < sub.r; ++c)
        for (size_t i = 0; i < dirs[c].size(); ++i) sub.directions(i, c) = dirs[c][i];
    return sub;
}

void write_session_log(const std::string& path, const SessionLog& log,
                       const std::string& config_hash)
{
    std::ofstream out = open_out(path);
    for (const SessionRecord& rec : log.records) {
        json j;
        j["stage"] = rec.stage;
        j["x"] = std::vector<double>(rec.x.data(), rec.x.data() + rec.x.size());
        j["phi"] = rec.phi;
        j["N"] = rec.n;
        j["shots"] = rec.shots;
        j["z_est"] = rec.z_est;
        j["sigma"] = rec.sigma;
        j["config_hash"] = config_hash;
        out << j.dump() << "\n";
    }
}

} // namespace qcal
