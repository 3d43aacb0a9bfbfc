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

#include "tf2dnn/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace tf2dnn {

namespace {

void check_scores(const ScoreSet& scores) {
  if (scores.target.empty() || scores.nontarget.empty()) {
    throw std::invalid_argument(
        "metrics: both target and nontarget scores are required");
  }
  for (double s : scores.target) {
    if (!std::isfinite(s)) {
      throw std::invalid_argument("metrics: non-finite target score");
    }
  }
  for (double s : scores.nontarget) {
    if (!std::isfinite(s)) {
      throw std::invalid_argument("metrics: non-finite nontarget score");
    }
  }
}

}  // namespace

std::vector<OperatingPoint> operating_points(const ScoreSet& scores) {
  check_scores(scores);
  std::vector<double> tgt = scores.target;
  std::vector<double> non = scores.nontarget;
  std::sort(tgt.begin(), tgt.end());
  std::sort(non.begin(), non.end());

  std::vector<double> thresholds;
  thresholds.reserve(tgt.size() + non.size());
  thresholds.insert(thresholds.end(), tgt.begin(), tgt.end());
  thresholds.insert(thresholds.end(), non.begin(), non.end());
  std::sort(thresholds.begin(), thresholds.end());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()),
                   thresholds.end());

  const double nt = static_cast<double>(tgt.size());
  const double nn = static_cast<double>(non.size());

  std::vector<OperatingPoint> points;
  points.reserve(thresholds.size() + 2);
  // Accept-all sentinel.
  points.push_back({-std::numeric_limits<double>::infinity(), 1.0, 0.0});
  for (double th : thresholds) {
    // accept iff score >= th: misses are targets below th, false accepts
    // are nontargets at or above th.
    const auto tgt_below =
        std::lower_bound(tgt.begin(), tgt.end(), th) - tgt.begin();
    const auto non_below =
        std::lower_bound(non.begin(), non.end(), th) - non.begin();
    points.push_back({th, static_cast<double>(non.size() - non_below) / nn,
                      static_cast<double>(tgt_below) / nt});
  }
  // Reject-all sentinel.
  points.push_back({std::numeric_limits<double>::infinity(), 0.0, 1.0});
  return points;
}

double eer(const ScoreSet& scores) {
  const std::vector<OperatingPoint> points = operating_points(scores);
  // diff = P_miss - P_fa runs from -1 (accept all) to +1 (reject all).
  for (std::size_t k = 1; k < points.size(); ++k) {
    const double db = points[k].p_miss - points[k].p_fa;
    if (db < 0.0) continue;
    const double da = points[k - 1].p_miss - points[k - 1].p_fa;
    if (db == 0.0 && da < 0.0) return points[k].p_miss;
    const double t = -da / (db - da);
    return points[k - 1].p_miss +
           t * (points[k].p_miss - points[k - 1].p_miss);
  }
  return points.back().p_miss;  // unreachable: the sentinel has diff = 1
}

double min_dcf(const ScoreSet& scores, const CostParams& cost) {
  if (!(cost.c_miss > 0.0) || !(cost.c_fa > 0.0) ||
      !(cost.p_target > 0.0 && cost.p_target < 1.0)) {
    throw std::invalid_argument("min_dcf: invalid cost parameters");
  }
  const std::vector<OperatingPoint> points = operating_points(scores);
  const double w_miss = cost.c_miss * cost.p_target;
  const double w_fa = cost.c_fa * (1.0 - cost.p_target);
  double best = std::numeric_limits<double>::infinity();
  for (const OperatingPoint& pt : points) {
    best = std::min(best, w_miss * pt.p_miss + w_fa * pt.p_fa);
  }
  return best / std::min(w_miss, w_fa);
}

std::vector<std::pair<double, double>> det_points(const ScoreSet& scores) {
  const std::vector<OperatingPoint> points = operating_points(scores);
  std::vector<std::pair<double, double>> out;
  out.reserve(points.size());
  for (const OperatingPoint& pt : points) {
    out.emplace_back(pt.p_fa, pt.p_miss);
  }
  return out;
}

}  // namespace tf2dnn
