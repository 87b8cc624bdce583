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

#include "monosde/metrics.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "monosde/error.h"

namespace monosde {

void StreamingVectorMean::Add(const Vector& v) {
  if (count_ == 0 && sum_.size() == 0) {
    sum_ = Vector::Zero(v.size());
    comp_ = Vector::Zero(v.size());
  }
  if (v.size() != sum_.size()) {
    throw DimensionError("streaming mean", sum_.size(), v.size());
  }
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double t = sum_[i] + v[i];
    if (std::abs(sum_[i]) >= std::abs(v[i])) {
      comp_[i] += (sum_[i] - t) + v[i];
    } else {
      comp_[i] += (v[i] - t) + sum_[i];
    }
    sum_[i] = t;
  }
  ++count_;
}

Vector StreamingVectorMean::Mean() const {
  if (count_ == 0) return sum_;
  return (sum_ + comp_) / static_cast<double>(count_);
}

const char* MetricName(Metric m) {
  switch (m) {
    case Metric::kNormMSq:
      return "norm_M_sq";
    case Metric::kGap:
      return "gap";
    case Metric::kDistSq:
      return "dist_sq";
    case Metric::kErgodicNormMSq:
      return "ergodic_norm_M_sq";
    case Metric::kErgodicGap:
      return "ergodic_gap";
    case Metric::kMinNormMSq:
      return "min_norm_M_sq";
  }
  return "?";
}

Metric ParseMetric(const std::string& name) {
  for (int i = 0; i < kNumMetrics; ++i) {
    const auto m = static_cast<Metric>(i);
    if (name == MetricName(m)) return m;
  }
  if (name == "min_norm_M_sq_so_far") return Metric::kMinNormMSq;
  throw ParameterError("unknown metric '" + name + "'");
}

void RunRecord::Reserve(std::size_t n) {
  index.reserve(n);
  for (auto& v : values) v.reserve(n);
}

void RunRecord::Append(double idx, const std::array<double, kNumMetrics>& row) {
  index.push_back(idx);
  for (int i = 0; i < kNumMetrics; ++i) values[i].push_back(row[i]);
}

void ErgodicTracker::Add(std::int64_t k, double norm_m_sq, double gap) {
  if (k >= sq_start_) {
    sq_sum_.Add(norm_m_sq);
    ++sq_count_;
    min_sq_ = std::min(min_sq_, norm_m_sq);
  }
  if (k >= gap_start_) {
    gap_sum_.Add(gap);
    ++gap_count_;
  }
}

double ErgodicTracker::ErgodicNormMSq() const {
  return sq_count_ == 0 ? kNaN
                        : sq_sum_.Value() / static_cast<double>(sq_count_);
}

double ErgodicTracker::ErgodicGap() const {
  return gap_count_ == 0 ? kNaN
                         : gap_sum_.Value() / static_cast<double>(gap_count_);
}

double ErgodicTracker::MinNormMSq() const {
  return sq_count_ == 0 ? kNaN : min_sq_;
}

RecordPlan::RecordPlan(std::int64_t stride, std::int64_t last,
                       std::vector<std::int64_t> extra)
    : stride_(stride), last_(last), extra_(std::move(extra)) {
  if (stride_ < 1) throw ParameterError("record stride must be >= 1");
  std::sort(extra_.begin(), extra_.end());
}

bool RecordPlan::ShouldRecord(std::int64_t k) const {
  if (k % stride_ == 0 || k == last_) return true;
  return std::binary_search(extra_.begin(), extra_.end(), k);
}

double PrimalDualGap(const BilinearProblem& problem, const Vector& x_bar,
                     const Vector& y_bar, const Vector& x_star,
                     const Vector& y_star) {
  return problem.Phi(x_bar, y_star) - problem.Phi(x_star, y_bar);
}

double PrimalDualGap(const BilinearProblem& problem, const Vector& xy_bar) {
  const int n = problem.n;
  if (xy_bar.size() != 2 * n) {
    throw DimensionError("primal-dual gap argument", 2 * n, xy_bar.size());
  }
  const Vector& z = problem.zero.x_star;
  return PrimalDualGap(problem, xy_bar.head(n), xy_bar.tail(n), z.head(n),
                       z.tail(n));
}

EnsembleSummary Aggregate(std::span<const RunRecord> traces) {
  if (traces.empty()) throw ParameterError("aggregate: no traces");
  EnsembleSummary s;
  s.replicas = traces.size();
  s.index = traces.front().index;
  const std::size_t steps = s.index.size();
  for (const RunRecord& t : traces) {
    if (t.index != s.index) {
      throw ParameterError("aggregate: traces do not share a recording grid");
    }
  }
  const double r = static_cast<double>(traces.size());
  for (int m = 0; m < kNumMetrics; ++m) {
    MetricSummary& out = s.metrics[m];
    out.mean.assign(steps, 0.0);
    out.stderr_.assign(steps, 0.0);
    out.min.assign(steps, 0.0);
    out.max.assign(steps, 0.0);
    for (std::size_t i = 0; i < steps; ++i) {
      CompensatedSum sum;
      double lo = std::numeric_limits<double>::infinity();
      double hi = -lo;
      bool nan = false;
      for (const RunRecord& t : traces) {
        const double v = t.values[m][i];
        if (std::isnan(v)) nan = true;
        sum.Add(v);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      if (nan) {
        out.mean[i] = out.stderr_[i] = out.min[i] = out.max[i] = kNaN;
        continue;
      }
      const double mean = sum.Value() / r;
      double se = 0.0;
      if (traces.size() > 1) {
        CompensatedSum ss;
        for (const RunRecord& t : traces) {
          const double d = t.values[m][i] - mean;
          ss.Add(d * d);
        }
        se = std::sqrt(ss.Value() / (r - 1.0)) / std::sqrt(r);
      }
      // Keep min <= mean <= max exact under rounding.
      out.mean[i] = std::clamp(mean, lo, hi);
      out.stderr_[i] = se;
      out.min[i] = lo;
      out.max[i] = hi;
    }
  }
  return s;
}

std::string FormatDouble(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void WriteTraceCsv(std::ostream& out, const RunRecord& record,
                   const std::string& index_name, bool with_min) {
  out << index_name
      << ",norm_M_sq,gap,dist_sq,ergodic_norm_M_sq,ergodic_gap";
  if (with_min) out << ",min_norm_M_sq_so_far";
  out << '\n';
  const int cols = with_min ? kNumMetrics : kNumMetrics - 1;
  for (std::size_t i = 0; i < record.size(); ++i) {
    out << FormatDouble(record.index[i]);
    for (int m = 0; m < cols; ++m) out << ',' << FormatDouble(record.values[m][i]);
    out << '\n';
  }
}

void WriteEnsembleCsv(std::ostream& out, const EnsembleSummary& summary) {
  out << "step,metric,mean,stderr,min,max\n";
  for (std::size_t i = 0; i < summary.index.size(); ++i) {
    for (int m = 0; m < kNumMetrics; ++m) {
      const MetricSummary& ms = summary.metrics[m];
      out << FormatDouble(summary.index[i]) << ','
          << MetricName(static_cast<Metric>(m)) << ','
          << FormatDouble(ms.mean[i]) << ',' << FormatDouble(ms.stderr_[i])
          << ',' << FormatDouble(ms.min[i]) << ',' << FormatDouble(ms.max[i])
          << '\n';
    }
  }
}

EnsembleSummary ReadEnsembleCsv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParameterError("ensemble CSV is empty");
  if (line.rfind("step,metric,mean,stderr,min,max", 0) != 0) {
    throw ParameterError("ensemble CSV has an unexpected header: " + line);
  }
  EnsembleSummary s;
  std::array<std::vector<double>, kNumMetrics> steps_seen;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell[6];
    for (auto& c : cell) {
      if (!std::getline(ss, c, ',')) {
        throw ParameterError("ensemble CSV line " + std::to_string(line_no) +
                             ": expected 6 columns");
      }
    }
    const int m = static_cast<int>(ParseMetric(cell[1]));
    steps_seen[m].push_back(std::strtod(cell[0].c_str(), nullptr));
    MetricSummary& ms = s.metrics[m];
    ms.mean.push_back(std::strtod(cell[2].c_str(), nullptr));
    ms.stderr_.push_back(std::strtod(cell[3].c_str(), nullptr));
    ms.min.push_back(std::strtod(cell[4].c_str(), nullptr));
    ms.max.push_back(std::strtod(cell[5].c_str(), nullptr));
  }
  s.index = steps_seen[0];
  if (s.index.empty()) throw ParameterError("ensemble CSV has no data rows");
  for (const auto& st : steps_seen) {
    if (st != s.index) {
      throw ParameterError("ensemble CSV metrics do not share one step grid");
    }
  }
  return s;
}

}  // namespace monosde
