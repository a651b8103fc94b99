// Copyright 2026 The Unseen Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Domain types shared by every module: frequency profiles, horizons,
// linear weight sequences and prediction reports.

#ifndef UNSEEN_TYPES_H_
#define UNSEEN_TYPES_H_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace unseen {

// Error categories map onto CLI exit codes (1, 2, 3).
enum class ErrorKind {
  kInvalidArgument,
  kData,
  kNumericGuard,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void ThrowInvalid(const std::string& what);
[[noreturn]] void ThrowData(const std::string& what);
[[noreturn]] void ThrowNumeric(const std::string& what);

// phi_i = number of species observed exactly i times. Stored sparsely;
// absent multiplicities mean phi_i = 0.
class FrequencyProfile {
 public:
  using Counts = std::map<std::int64_t, std::int64_t>;

  FrequencyProfile() = default;

  // Zero counts are dropped. n_events defaults to sum_i i * phi_i (the
  // classical sample size); incidence data passes the number of sets.
  static FrequencyProfile FromCounts(
      std::span<const std::pair<std::int64_t, std::int64_t>> pairs,
      std::optional<std::int64_t> n_events = std::nullopt);

  // Builds the profile of per-species observation counts (zeros ignored).
  static FrequencyProfile FromSpeciesCounts(
      std::span<const std::int64_t> per_species, std::int64_t n_events);

  std::int64_t phi(std::int64_t i) const;
  const Counts& counts() const { return counts_; }
  std::int64_t distinct() const { return distinct_; }
  std::int64_t n_events() const { return n_events_; }
  std::int64_t max_multiplicity() const;
  bool empty() const { return counts_.empty(); }

  // k * phi, the profile of k disjoint copies of the same sample.
  FrequencyProfile Scaled(std::int64_t k) const;

  friend FrequencyProfile operator+(const FrequencyProfile& a,
                                    const FrequencyProfile& b);
  friend bool operator==(const FrequencyProfile& a,
                         const FrequencyProfile& b) = default;

 private:
  Counts counts_;
  std::int64_t distinct_ = 0;
  std::int64_t n_events_ = 0;
};

// Thin free-function spellings used across the code base.
FrequencyProfile profile_from_counts(
    std::span<const std::pair<std::int64_t, std::int64_t>> pairs);

// Number of species seen at least i times; s_at_least(p, 1) = S_t.
std::int64_t s_at_least(const FrequencyProfile& profile, std::int64_t i);

// Past duration t and future-to-past ratio r; T = (1 + r) t.
class Horizon {
 public:
  Horizon(double t, double r);

  double t() const { return t_; }
  double r() const { return r_; }
  double future() const { return r_ * t_; }
  double total() const { return (1.0 + r_) * t_; }

 private:
  double t_;
  double r_;
};

// Truncated coefficient sequence H_1..H_D of a linear estimator
// sum_s H(N_s). H_0 = 0 and H_i = 0 for i > D.
class LinearWeights {
 public:
  explicit LinearWeights(std::vector<double> coeffs);

  static LinearWeights Zeros(int depth);

  double operator()(std::int64_t i) const {
    return (i >= 1 && i <= depth()) ? coeffs_[static_cast<std::size_t>(i - 1)]
                                    : 0.0;
  }
  int depth() const { return static_cast<int>(coeffs_.size()); }
  std::span<const double> coeffs() const { return coeffs_; }
  double SupNorm() const;

  friend bool operator==(const LinearWeights&,
                         const LinearWeights&) = default;

 private:
  std::vector<double> coeffs_;
};

enum class MethodKind {
  kGoodToulmin,
  kSmoothedGoodToulmin,
  kLinear,
  kHStar,
  kRatioAlpha,
  kPade,
  kNull,
};

// CLI / config spellings: gt | sgt | linear | hstar | ratio-alpha | pade | null.
std::string MethodName(MethodKind kind);
MethodKind ParseMethodName(const std::string& name);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

struct PredictionReport {
  MethodKind method = MethodKind::kNull;
  double point = 0.0;
  std::optional<double> variance_proxy;
  std::optional<Interval> interval;
  std::optional<double> nominal_level;
  // Set when a linear variance proxy was negative and clamped to zero.
  bool variance_clamped = false;
  std::vector<std::string> notes;
};

}  // namespace unseen

#endif  // UNSEEN_TYPES_H_
