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

#ifndef TF2DNN_REGRESSION_HEAD_HPP
#define TF2DNN_REGRESSION_HEAD_HPP

#include <cstdint>
#include <vector>

#include "tf2dnn/numeric.hpp"

namespace tf2dnn {

/// Accumulated second moments of bias-augmented regressors y against
/// targets x. Additive across data subsets, so enrollment never has to
/// revisit the background data.
struct SufficientStats {
  Matrix s_yy;  // M x M, sum of y y^T
  Matrix s_yx;  // M x D, sum of y x^T
  std::int64_t count = 0;

  static SufficientStats zeros(Index m, Index d);
  /// Rank-1 update with one (already augmented) regressor.
  void add(const Vector& y_aug, const Vector& x);
  SufficientStats& operator+=(const SufficientStats& other);
  void validate() const;
};

/// Appends the constant-1 bias entry.
Vector augment_bias(const Vector& y);

/// Exact outer-product sums over a frame sequence; the y vectors must
/// already be bias-augmented.
SufficientStats accumulate_stats(const std::vector<Vector>& ys_aug,
                                 const std::vector<Vector>& xs);

/// Least squares from the stats: solves S_yy B = S_yx. Throws
/// SingularSystemError (pointing at the MAP estimator) when S_yy is
/// rank deficient.
Matrix estimate_ml(const SufficientStats& stats);

/// Zero-mean-prior MAP: (S_yy + (lambda0/beta) I)^-1 S_yx. This exact
/// expression is the canonical solve shared by the posterior mean, the
/// background-model fit and the interpolated enrollment, so their
/// algebraic reductions hold bitwise.
Matrix estimate_map(const SufficientStats& stats, double lambda0, double beta);

/// General MAP with prior mean b0:
/// (S_yy + (lambda0/beta) I)^-1 (S_yx + (lambda0/beta) B0).
Matrix estimate_map(const SufficientStats& stats, double lambda0, double beta,
                    const Matrix& b0);

struct PosteriorParams {
  Matrix mean;       // B_N, M x D
  Matrix precision;  // Sigma_N^-1 = beta S_yy + lambda0 I
};

/// Gaussian posterior of the regression weights; the mean is computed
/// by the same call as estimate_map, so the two agree bit-identically.
PosteriorParams posterior(const SufficientStats& stats, double lambda0,
                          double beta, const Matrix& b0);

/// Per-dimension noise variances from residual square sums:
/// psi_d = max(residual_sq_sums_d / count, floor).
Vector estimate_psi(const Vector& residual_sq_sums, std::int64_t count,
                    double floor = 1e-6);

/// Sum_t (x_td - [B^T y_t]_d)^2 from the stats and the diagonal of
/// Sum_t x_t x_t^T, without touching the raw frames. Cancellation can
/// leave tiny negative values; they are clamped to zero.
Vector residual_sq_sums_from_stats(const SufficientStats& stats,
                                   const Vector& sxx_diag, const Matrix& b);

/// The probabilistic last layer: x ~ N(B^T y_aug, diag(psi)). The
/// isotropic precision beta = 1/mean(psi) drives the MAP and posterior
/// algebra; the diagonal psi drives likelihood evaluation.
struct RegressionHead {
  Matrix b;      // M x D, bias row included
  Vector psi;    // D
  double beta = 1.0;
  double lambda0 = 1.0;

  Index input_dim() const { return b.rows() - 1; }
  Index output_dim() const { return b.cols(); }

  /// Predicted Gaussian mean for an unaugmented regressor y.
  Vector predict(const Vector& y) const;
  /// log N(x; B^T y_aug, diag(psi)).
  double loglik(const Vector& y, const Vector& x) const;
  void validate() const;
};

constexpr double kPsiFloor = 1e-6;

/// Fits B, psi and beta from the stats. beta and psi are coupled, so the
/// fit runs a short fixed-point: solve with beta = 1, estimate psi from
/// the residuals, re-solve, re-estimate, and solve once more with the
/// final beta. The stored head satisfies
/// b == estimate_map(stats, lambda0, beta) exactly.
RegressionHead fit_head(const SufficientStats& stats, const Vector& sxx_diag,
                        double lambda0, double psi_floor = kPsiFloor);

}  // namespace tf2dnn

#endif  // TF2DNN_REGRESSION_HEAD_HPP
