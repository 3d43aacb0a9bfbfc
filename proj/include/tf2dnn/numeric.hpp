// Copyright 2026 the tf2dnn authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TF2DNN_NUMERIC_HPP
#define TF2DNN_NUMERIC_HPP

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace tf2dnn {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Thrown by ridge_solve and the estimators built on it when the
/// regularized system is not positive definite within tolerance.
class SingularSystemError : public std::runtime_error {
 public:
  explicit SingularSystemError(const std::string& what)
      : std::runtime_error(what) {}
};

/// ln(1 + e^x), overflow-safe for any finite x.
double softplus(double x);

/// d/dx softplus(x), i.e. the logistic sigmoid 1 / (1 + e^-x).
double softplus_deriv(double x);

/// Log density of x under a diagonal Gaussian N(mean, diag(psi)).
/// psi holds per-dimension variances and must be strictly positive.
double logpdf_diag_gaussian(const Vector& x, const Vector& mean,
                            const Vector& psi);

/// Solves (A + lambda*I) X = rhs for symmetric positive definite
/// A + lambda*I via Cholesky. Throws SingularSystemError if the
/// factorization fails or the residual exceeds
/// 1e-8 * (1 + max|rhs|) in max norm.
Matrix ridge_solve(const Matrix& a, double lambda, const Matrix& rhs);

/// Mixes (seed, stream) into a new seed; used to fork independent
/// generators deterministically.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// Deterministic, platform-independent random generator.
///
/// Algorithm (fixed, part of the file-format/reproducibility contract):
/// state seeded by four successive splitmix64 outputs of the seed,
/// uniforms from xoshiro256++, gaussians by the Box-Muller transform.
/// Each gaussian() consumes exactly two 64-bit words.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();
  /// Uniform double in [0, 1), 53-bit resolution.
  double next_double();
  /// One standard normal draw.
  double gaussian();
  /// n i.i.d. N(0, stddev^2) draws. stddev == 0 yields exact zeros.
  Vector gaussian_vector(Index n, double stddev);

  /// Child generator for an independent stream; the parent state is
  /// not advanced.
  Rng fork(std::uint64_t stream) const;

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::array<std::uint64_t, 4> state_;
};

}  // namespace tf2dnn

#endif  // TF2DNN_NUMERIC_HPP
