#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace clab {

using cd = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;
using SpMat = Eigen::SparseMatrix<cd>;

// Numerical thresholds shared by every solver.
namespace tol {
inline constexpr double herm = 1e-10;      // max-norm deviation from hermiticity
inline constexpr double rank = 1e-9;       // relative singular-value cutoff
inline constexpr double eig = 1e-7;        // eigenvalue merging after unit HS normalization
inline constexpr double angle = 1e-8;      // cos(theta) >= 1 - angle counts as shared direction
inline constexpr double null = 1e-9;       // nullspace cutoff relative to the largest eigenvalue
inline constexpr double cluster = 1e-9;    // eigen-cluster merging relative to spectral radius
}  // namespace tol

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when a requested solve exceeds the configured dimension limit.
class SizeLimitError : public Error {
 public:
  using Error::Error;
};

// splitmix64 finalizer, used to derive independent seeds.
inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b = 0) {
  std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace clab
