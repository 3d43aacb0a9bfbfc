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

#include "tf2dnn/numeric.hpp"

#include <cmath>

namespace tf2dnn {

double softplus(double x) {
  if (x > 0.0) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

double softplus_deriv(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double logpdf_diag_gaussian(const Vector& x, const Vector& mean,
                            const Vector& psi) {
  if (x.size() != mean.size() || x.size() != psi.size()) {
    throw std::invalid_argument(
        "logpdf_diag_gaussian: dimension mismatch (x " +
        std::to_string(x.size()) + ", mean " + std::to_string(mean.size()) +
        ", psi " + std::to_string(psi.size()) + ")");
  }
  constexpr double kLog2Pi = 1.8378770664093454835606594728112;
  double total = 0.0;
  for (Index d = 0; d < x.size(); ++d) {
    const double v = psi[d];
    if (!(v > 0.0)) {
      throw std::invalid_argument(
          "logpdf_diag_gaussian: non-positive variance at dim " +
          std::to_string(d));
    }
    const double r = x[d] - mean[d];
    total += -0.5 * (kLog2Pi + std::log(v)) - r * r / (2.0 * v);
  }
  return total;
}

Matrix ridge_solve(const Matrix& a, double lambda, const Matrix& rhs) {
  if (a.rows() != a.cols()) {
    throw std::invalid_argument("ridge_solve: A must be square");
  }
  if (rhs.rows() != a.rows()) {
    throw std::invalid_argument("ridge_solve: rhs row count " +
                                std::to_string(rhs.rows()) +
                                " does not match A order " +
                                std::to_string(a.rows()));
  }
  if (!(lambda >= 0.0)) {
    throw std::invalid_argument("ridge_solve: lambda must be >= 0");
  }
  Matrix reg = a;
  if (lambda != 0.0) reg.diagonal().array() += lambda;

  Eigen::LLT<Matrix> llt(reg);
  if (llt.info() != Eigen::Success) {
    throw SingularSystemError(
        "ridge_solve: system not positive definite (Cholesky failed); "
        "the statistics are rank deficient, add ridge or use MAP");
  }
  Matrix x = llt.solve(rhs);
  if (!x.allFinite()) {
    throw SingularSystemError("ridge_solve: solve produced non-finite values");
  }
  const double scale = 1.0 + (rhs.size() > 0 ? rhs.cwiseAbs().maxCoeff() : 0.0);
  const double residual =
      rhs.size() > 0 ? (reg * x - rhs).cwiseAbs().maxCoeff() : 0.0;
  if (residual > 1e-8 * scale) {
    throw SingularSystemError(
        "ridge_solve: residual " + std::to_string(residual) +
        " exceeds tolerance; system is numerically singular");
  }
  return x;
}

namespace {

inline std::uint64_t splitmix64_mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline std::uint64_t rotl64(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t s = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  s = splitmix64_mix(s);
  s = splitmix64_mix(s + 0x9E3779B97F4A7C15ULL);
  return s;
}

Rng::Rng(std::uint64_t seed) : seed_(seed) {
  std::uint64_t s = seed;
  for (auto& word : state_) {
    s += 0x9E3779B97F4A7C15ULL;
    word = splitmix64_mix(s);
  }
  if (state_[0] == 0 && state_[1] == 0 && state_[2] == 0 && state_[3] == 0) {
    state_[0] = 1;
  }
}

std::uint64_t Rng::next_u64() {
  const std::uint64_t result = rotl64(state_[0] + state_[3], 23) + state_[0];
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl64(state_[3], 45);
  return result;
}

double Rng::next_double() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::gaussian() {
  // u1 in (0, 1] so the log is finite; u2 in [0, 1).
  const double u1 =
      static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  const double u2 = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  constexpr double kTwoPi = 6.283185307179586476925286766559;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

Vector Rng::gaussian_vector(Index n, double stddev) {
  if (!(stddev >= 0.0)) {
    throw std::invalid_argument("gaussian_vector: stddev must be >= 0");
  }
  Vector v(n);
  for (Index i = 0; i < n; ++i) v[i] = stddev * gaussian();
  return v;
}

Rng Rng::fork(std::uint64_t stream) const {
  return Rng(derive_seed(seed_, stream));
}

}  // namespace tf2dnn
