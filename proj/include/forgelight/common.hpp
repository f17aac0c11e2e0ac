#ifndef FORGELIGHT_COMMON_HPP
#define FORGELIGHT_COMMON_HPP

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace forgelight {

using VecX = Eigen::VectorXd;
using MatX = Eigen::MatrixXd;
using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Mat6 = Eigen::Matrix<double, 6, 6>;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using SpMat = Eigen::SparseMatrix<double>;

// Base of everything we throw on purpose.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Bad config / schema / file contents. CLI exit code 1.
class ConfigError : public Error {
public:
  using Error::Error;
};

// Problem is well-formed but has no solution (e.g. fully solid model
// already fails). CLI exit code 2.
class InfeasibleError : public Error {
public:
  using Error::Error;
};

// Solver breakdown: singular system, non-convergence, stale
// factorization. CLI exit code 3.
class NumericError : public Error {
public:
  using Error::Error;
};

enum class LogLevel { Error = 0, Warn = 1, Info = 2, Debug = 3 };

// Level comes from FORGELIGHT_LOG (error|warn|info|debug), default warn.
LogLevel log_level();
void log_message(LogLevel level, const std::string& msg);

inline void log_error(const std::string& m) { log_message(LogLevel::Error, m); }
inline void log_warn(const std::string& m) { log_message(LogLevel::Warn, m); }
inline void log_info(const std::string& m) { log_message(LogLevel::Info, m); }
inline void log_debug(const std::string& m) { log_message(LogLevel::Debug, m); }

// FNV-1a over a byte string; used for config digests in run manifests.
std::uint64_t fnv1a64(const std::string& bytes);
std::string fnv1a64_hex(const std::string& bytes);

}  // namespace forgelight

#endif
