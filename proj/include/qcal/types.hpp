#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace qcal {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using Matrix2 = Eigen::Matrix2cd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr Complex kI{0.0, 1.0};

// Error taxonomy. The CLI maps these onto exit codes.
struct invalid_config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct numeric_integrity_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct optimization_failure_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct calibration_failure_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct clipping_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct fit_failure_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct internal_consistency_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline uint64_t splitmix64(uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Deterministic per-stream engine: the result depends only on (seed, stream),
// never on which thread or in which order the stream is consumed.
inline std::mt19937_64 stream_rng(uint64_t seed, uint64_t stream)
{
    const uint64_t s = splitmix64(seed ^ splitmix64(stream + 0x51ed2701a1b2c3d4ULL));
    return std::mt19937_64(s);
}

} // namespace qcal
