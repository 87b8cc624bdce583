// Copyright 2026 The monosde Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MONOSDE_METRICS_H_
#define MONOSDE_METRICS_H_

#include <array>
#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "monosde/linalg.h"
#include "monosde/operators.h"

namespace monosde {

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Neumaier compensated summation.
class CompensatedSum {
 public:
  void Add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double Value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// Running mean of a vector-valued sequence with per-component compensation.
class StreamingVectorMean {
 public:
  explicit StreamingVectorMean(Eigen::Index n = 0)
      : sum_(Vector::Zero(n)), comp_(Vector::Zero(n)) {}
  void Add(const Vector& v);
  std::int64_t count() const { return count_; }
  Vector Mean() const;

 private:
  Vector sum_;
  Vector comp_;
  std::int64_t count_ = 0;
};

enum class Metric {
  kNormMSq = 0,
  kGap,
  kDistSq,
  kErgodicNormMSq,
  kErgodicGap,
  kMinNormMSq,
};
inline constexpr int kNumMetrics = 6;
const char* MetricName(Metric m);
Metric ParseMetric(const std::string& name);

// Per-record-step metric trace. `index` is the iteration k for the discrete
// methods and the time t for the SDE.
struct RunRecord {
  std::vector<double> index;
  std::array<std::vector<double>, kNumMetrics> values;

  std::size_t size() const { return index.size(); }
  const std::vector<double>& operator[](Metric m) const {
    return values[static_cast<int>(m)];
  }
  std::vector<double>& operator[](Metric m) {
    return values[static_cast<int>(m)];
  }
  void Reserve(std::size_t n);
  void Append(double idx, const std::array<double, kNumMetrics>& row);
};

// Streaming ergodic averages over the index windows the discrete bounds use:
// the squared-norm average runs over k >= sqnorm_start, the gap average over
// k >= gap_start. Averages are NaN until their window has started. The
// running minimum is taken over the squared-norm window.
class ErgodicTracker {
 public:
  ErgodicTracker(std::int64_t sqnorm_start, std::int64_t gap_start)
      : sq_start_(sqnorm_start), gap_start_(gap_start) {}

  void Add(std::int64_t k, double norm_m_sq, double gap);
  double ErgodicNormMSq() const;
  double ErgodicGap() const;
  double MinNormMSq() const;

 private:
  std::int64_t sq_start_;
  std::int64_t gap_start_;
  CompensatedSum sq_sum_;
  CompensatedSum gap_sum_;
  std::int64_t sq_count_ = 0;
  std::int64_t gap_count_ = 0;
  double min_sq_ = std::numeric_limits<double>::infinity();
};

// Which iterations (or time steps) get a row: every `stride`-th, the last
// one, and any explicitly listed extra indices.
class RecordPlan {
 public:
  RecordPlan() = default;
  RecordPlan(std::int64_t stride, std::int64_t last,
             std::vector<std::int64_t> extra = {});
  bool ShouldRecord(std::int64_t k) const;
  std::int64_t stride() const { return stride_; }

 private:
  std::int64_t stride_ = 1;
  std::int64_t last_ = 0;
  std::vector<std::int64_t> extra_;  // sorted
};

// Phi(x_bar, y*) - Phi(x*, y_bar) for the bilinear-quadratic saddle function.
double PrimalDualGap(const BilinearProblem& problem, const Vector& x_bar,
                     const Vector& y_bar, const Vector& x_star,
                     const Vector& y_star);
// Convenience overload splitting a stacked (x, y) vector and using the
// problem's certified saddle point.
double PrimalDualGap(const BilinearProblem& problem, const Vector& xy_bar);

struct MetricSummary {
  std::vector<double> mean;
  std::vector<double> stderr_;
  std::vector<double> min;
  std::vector<double> max;
};

struct EnsembleSummary {
  std::size_t replicas = 0;
  std::vector<double> index;
  std::array<MetricSummary, kNumMetrics> metrics;

  const MetricSummary& operator[](Metric m) const {
    return metrics[static_cast<int>(m)];
  }
};

// Pointwise mean, standard error (sample std / sqrt(R)), min and max across
// replicas. All traces must share one recording grid.
EnsembleSummary Aggregate(std::span<const RunRecord> traces);

// CSV I/O. Floats use 17 significant digits; NaN is written as "nan".
std::string FormatDouble(double v);
// Columns: <index_name>, norm_M_sq, gap, dist_sq, ergodic_norm_M_sq,
// ergodic_gap[, min_norm_M_sq_so_far].
void WriteTraceCsv(std::ostream& out, const RunRecord& record,
                   const std::string& index_name, bool with_min);
// Long format: step, metric, mean, stderr, min, max.
void WriteEnsembleCsv(std::ostream& out, const EnsembleSummary& summary);
EnsembleSummary ReadEnsembleCsv(std::istream& in);

}  // namespace monosde

#endif  // MONOSDE_METRICS_H_
