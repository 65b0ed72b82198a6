#ifndef WILLOOP_TYPES_HPP
#define WILLOOP_TYPES_HPP

#include <complex>
#include <stdexcept>
#include <string>
#include <Eigen/Dense>

namespace willoop {

using Cx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

inline constexpr Cx I_UNIT{0.0, 1.0};
inline constexpr double PI = 3.14159265358979323846;

struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct DimensionMismatch : Error {
  explicit DimensionMismatch(const std::string& w) : Error(w) {}
};

struct NotImmersed : Error {
  explicit NotImmersed(const std::string& w) : Error(w) {}
};

struct NotInBigCell : Error {
  explicit NotInBigCell(const std::string& w) : Error(w) {}
};

struct TruncationLoss : Error {
  explicit TruncationLoss(const std::string& w) : Error(w) {}
};

struct PoleOnPath : Error {
  explicit PoleOnPath(const std::string& w) : Error(w) {}
};

struct NotASurface : Error {
  explicit NotASurface(const std::string& w) : Error(w) {}
};

struct NullConditionViolated : Error {
  explicit NullConditionViolated(const std::string& w) : Error(w) {}
};

}  // namespace willoop

#endif
