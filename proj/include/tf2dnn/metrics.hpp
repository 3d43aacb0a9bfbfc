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

#ifndef TF2DNN_METRICS_HPP
#define TF2DNN_METRICS_HPP

#include <vector>

namespace tf2dnn {

struct ScoreSet {
  std::vector<double> target;
  std::vector<double> nontarget;
};

struct CostParams {
  double c_miss = 1.0;
  double c_fa = 1.0;
  double p_target = 0.5;
};

// NIST SRE operating points.
inline constexpr CostParams kDcf08{10.0, 1.0, 0.01};
inline constexpr CostParams kDcf10{1.0, 1.0, 0.001};

struct OperatingPoint {
  double threshold;  // accept iff score >= threshold
  double p_fa;
  double p_miss;
};

/// The full detection staircase: the accept-all point, one point per
/// distinct score value and the reject-all point, in ascending threshold
/// order. P_fa is non-increasing, P_miss non-decreasing.
std::vector<OperatingPoint> operating_points(const ScoreSet& scores);

/// Equal error rate with linear interpolation between the two bracketing
/// operating points. The decision rule is accept iff score >= threshold.
double eer(const ScoreSet& scores);

/// Minimum normalized detection cost over all operating points:
/// min over thresholds of C_miss P_tar P_miss + C_fa (1-P_tar) P_fa,
/// divided by min(C_miss P_tar, C_fa (1-P_tar)). Always in [0, 1].
double min_dcf(const ScoreSet& scores, const CostParams& cost);

/// (P_fa, P_miss) pairs of the detection staircase, for plotting.
std::vector<std::pair<double, double>> det_points(const ScoreSet& scores);

}  // namespace tf2dnn

#endif  // TF2DNN_METRICS_HPP
