#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Dense>

namespace ptsim {

using Cplx = std::complex<double>;
// All dense operators use a fixed row-major layout so that tensor reshapes
// are plain reinterpretations of the same buffer.
using CMat = Eigen::Matrix<Cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using CVec = Eigen::Matrix<Cplx, Eigen::Dynamic, 1>;
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;

// hbar in meV*ps, used only by model builders that convert physical units;
// everything downstream works with hbar = 1.
inline constexpr double kHbarMeVps = 0.6582119569;

// Invalid call-site arguments (bad indices, non-square input, ...). Exit code 2.
struct ArgumentError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Malformed configuration files. Exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Work refused because it would exceed a configured resource cap. Exit code 3.
struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Algorithmic failure (non-converged decomposition, ...). Exit code 4.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitResource = 3;
inline constexpr int kExitNumerical = 4;

}  // namespace ptsim
