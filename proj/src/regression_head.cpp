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

#include "tf2dnn/regression_head.hpp"

#include <string>

namespace tf2dnn {

SufficientStats SufficientStats::zeros(Index m, Index d) {
  SufficientStats s;
  s.s_yy = Matrix::Zero(m, m);
  s.s_yx = Matrix::Zero(m, d);
  s.count = 0;
  return s;
}

void SufficientStats::add(const Vector& y_aug, const Vector& x) {
  if (y_aug.size() != s_yy.rows() || x.size() != s_yx.cols()) {
    throw std::invalid_argument("sufficient stats: dimension mismatch");
  }
  s_yy.noalias() += y_aug * y_aug.transpose();
  s_yx.noalias() += y_aug * x.transpose();
  count += 1;
}

SufficientStats& SufficientStats::operator+=(const SufficientStats& other) {
  if (other.s_yy.rows() != s_yy.rows() || other.s_yx.cols() != s_yx.cols()) {
    throw std::invalid_argument("sufficient stats: merge shape mismatch");
  }
  s_yy += other.s_yy;
  s_yx += other.s_yx;
  count += other.count;
  return *this;
}

void SufficientStats::validate() const {
  if (s_yy.rows() != s_yy.cols() || s_yy.rows() != s_yx.rows()) {
    throw std::invalid_argument("sufficient stats: inconsistent shapes");
  }
  if (count < 0) {
    throw std::invalid_argument("sufficient stats: negative count");
  }
  if (!s_yy.allFinite() || !s_yx.allFinite()) {
    throw std::invalid_argument("sufficient stats: non-finite entries");
  }
}

Vector augment_bias(const Vector& y) {
  Vector y_aug(y.size() + 1);
  y_aug.head(y.size()) = y;
  y_aug[y.size()] = 1.0;
  return y_aug;
}

SufficientStats accumulate_stats(const std::vector<Vector>& ys_aug,
                                 const std::vector<Vector>& xs) {
  if (ys_aug.size() != xs.size()) {
    throw std::invalid_argument(
        "accumulate_stats: regressor/target count mismatch (" +
        std::to_string(ys_aug.size()) + " vs " + std::to_string(xs.size()) +
        ")");
  }
  if (ys_aug.empty()) return SufficientStats::zeros(0, 0);
  SufficientStats stats =
      SufficientStats::zeros(ys_aug.front().size(), xs.front().size());
  for (std::size_t t = 0; t < ys_aug.size(); ++t) {
    stats.add(ys_aug[t], xs[t]);
  }
  return stats;
}

Matrix estimate_ml(const SufficientStats& stats) {
  stats.validate();
  try {
    return ridge_solve(stats.s_yy, 0.0, stats.s_yx);
  } catch (const SingularSystemError&) {
    throw SingularSystemError(
        "estimate_ml: S_yy is singular; use the MAP estimator (lambda0 > 0)");
  }
}

Matrix estimate_map(const SufficientStats& stats, double lambda0,
                    double beta) {
  stats.validate();
  if (!(lambda0 >= 0.0)) {
    throw std::invalid_argument("estimate_map: lambda0 must be >= 0");
  }
  if (!(beta > 0.0)) {
    throw std::invalid_argument("estimate_map: beta must be > 0");
  }
  return ridge_solve(stats.s_yy, lambda0 / beta, stats.s_yx);
}

Matrix estimate_map(const SufficientStats& stats, double lambda0, double beta,
                    const Matrix& b0) {
  stats.validate();
  if (!(lambda0 >= 0.0)) {
    throw std::invalid_argument("estimate_map: lambda0 must be >= 0");
  }
  if (!(beta > 0.0)) {
    throw std::invalid_argument("estimate_map: beta must be > 0");
  }
  if (b0.rows() != stats.s_yx.rows() || b0.cols() != stats.s_yx.cols()) {
    throw std::invalid_argument("estimate_map: prior mean shape mismatch");
  }
  const double lam = lambda0 / beta;
  return ridge_solve(stats.s_yy, lam, stats.s_yx + lam * b0);
}

PosteriorParams posterior(const SufficientStats& stats, double lambda0,
                          double beta, const Matrix& b0) {
  PosteriorParams post;
  post.mean = estimate_map(stats, lambda0, beta, b0);
  post.precision = beta * stats.s_yy;
  post.precision.diagonal().array() += lambda0;
  return post;
}

Vector estimate_psi(const Vector& residual_sq_sums, std::int64_t count,
                    double floor) {
  if (count < 1) {
    throw std::invalid_argument("estimate_psi: needs at least one frame");
  }
  Vector psi = residual_sq_sums / static_cast<double>(count);
  for (Index d = 0; d < psi.size(); ++d) {
    if (psi[d] < floor) psi[d] = floor;
  }
  return psi;
}

Vector residual_sq_sums_from_stats(const SufficientStats& stats,
                                   const Vector& sxx_diag, const Matrix& b) {
  stats.validate();
  if (sxx_diag.size() != stats.s_yx.cols() || b.rows() != stats.s_yy.rows() ||
      b.cols() != stats.s_yx.cols()) {
    throw std::invalid_argument("residual_sq_sums_from_stats: shape mismatch");
  }
  // sum_t (x_td - b_d.y_t)^2
  //   = sxx_d - 2 b_d . s_yx_d + b_d . S_yy b_d   per output dim d.
  Vector sums(sxx_diag.size());
  for (Index d = 0; d < sums.size(); ++d) {
    const auto bd = b.col(d);
    const double quad = bd.dot(stats.s_yy * bd);
    const double cross = bd.dot(stats.s_yx.col(d));
    double v = sxx_diag[d] - 2.0 * cross + quad;
    if (v < 0.0) v = 0.0;
    sums[d] = v;
  }
  return sums;
}

Vector RegressionHead::predict(const Vector& y) const {
  if (y.size() + 1 != b.rows()) {
    throw std::invalid_argument("regression head: regressor dim mismatch");
  }
  return b.transpose() * augment_bias(y);
}

double RegressionHead::loglik(const Vector& y, const Vector& x) const {
  return logpdf_diag_gaussian(x, predict(y), psi);
}

void RegressionHead::validate() const {
  if (b.rows() < 1 || b.cols() != psi.size()) {
    throw std::invalid_argument("regression head: inconsistent shapes");
  }
  if (!(beta > 0.0) || !(lambda0 >= 0.0)) {
    throw std::invalid_argument("regression head: invalid beta/lambda0");
  }
  for (Index d = 0; d < psi.size(); ++d) {
    if (!(psi[d] > 0.0)) {
      throw std::invalid_argument("regression head: non-positive variance");
    }
  }
}

RegressionHead fit_head(const SufficientStats& stats, const Vector& sxx_diag,
                        double lambda0, double psi_floor) {
  stats.validate();
  if (stats.count < 1) {
    throw std::invalid_argument("fit_head: empty statistics");
  }
  if (!(lambda0 >= 0.0)) {
    throw std::invalid_argument("fit_head: lambda0 must be >= 0");
  }

  Matrix b = estimate_map(stats, lambda0, 1.0);
  Vector psi = estimate_psi(residual_sq_sums_from_stats(stats, sxx_diag, b),
                            stats.count, psi_floor);
  double beta = 1.0 / psi.mean();

  b = estimate_map(stats, lambda0, beta);
  psi = estimate_psi(residual_sq_sums_from_stats(stats, sxx_diag, b),
                     stats.count, psi_floor);
  beta = 1.0 / psi.mean();

  RegressionHead head;
  head.b = estimate_map(stats, lambda0, beta);
  head.psi = std::move(psi);
  head.beta = beta;
  head.lambda0 = lambda0;
  head.validate();
  return head;
}

}  // namespace tf2dnn
