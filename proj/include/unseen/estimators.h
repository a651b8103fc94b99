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

// Point estimators of the number of new species S_{t,T}.

#ifndef UNSEEN_ESTIMATORS_H_
#define UNSEEN_ESTIMATORS_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>

#include "unseen/types.h"

namespace unseen {

// Distribution of the random truncation point L of a smoothed
// Good-Toulmin estimator, described through its tail P(L >= i).
class SmoothingDistribution {
 public:
  struct Degenerate {
    std::optional<std::int64_t> k;  // nullopt means L = infinity
  };
  struct Binomial {
    std::int64_t k;
    double q;
  };
  struct Poisson {
    double lambda;
  };
  struct Custom {
    std::function<double(std::int64_t)> tail;
    std::string label = "custom";
  };

  static SmoothingDistribution MakeDegenerate(std::optional<std::int64_t> k);
  static SmoothingDistribution MakeBinomial(std::int64_t k, double q);
  static SmoothingDistribution MakePoisson(double lambda);
  static SmoothingDistribution MakeCustom(std::function<double(std::int64_t)> tail,
                                          std::string label = "custom");

  // P(L >= i); tail(0) = 1.
  double tail(std::int64_t i) const;
  std::string Describe() const;
  const auto& spec() const { return spec_; }

 private:
  using Spec = std::variant<Degenerate, Binomial, Poisson, Custom>;
  explicit SmoothingDistribution(Spec spec) : spec_(std::move(spec)) {}
  Spec spec_;
};

// Binomial smoothing parameters with the best rate guarantee from the
// smoothed Good-Toulmin literature: q = 2/(r+2), k = ceil(log_3(t r^2/(r-1))/2).
struct SgtParams {
  std::int64_t k = 0;
  double q = 0.0;
  bool untruncated = false;  // r <= 1: plain Good-Toulmin
};
SgtParams DefaultSgtParams(const Horizon& h);
SmoothingDistribution DefaultSgtSmoothing(const Horizon& h);

struct AlphaEstimate {
  enum class Source { kRatioPhi1, kFixed };
  double alpha_hat = 0.0;
  Source source = Source::kRatioPhi1;

  static AlphaEstimate Fixed(double value);
};

// -sum_i phi_i (-r)^i over the full sparse profile.
double good_toulmin(const FrequencyProfile& profile, const Horizon& h);

// sum_i H(i) phi_i, with H(i) = 0 beyond the truncation depth.
double linear_estimate(const FrequencyProfile& profile,
                       const LinearWeights& weights);

// H_i = -(-r)^i for i = 1..depth.
LinearWeights gt_weights(const Horizon& h, int depth);

// Depth at which truncating the GT series is numerically invisible on
// the whole (0,1] probability range of the worst-case functional.
int gt_exact_depth(const Horizon& h);

// H_i = -P(L >= i)(-r)^i for i = 1..depth.
LinearWeights sgt_weights(const Horizon& h, const SmoothingDistribution& L,
                          int depth);

// SGT applied over every observed multiplicity (no truncation).
double sgt_estimate(const FrequencyProfile& profile, const Horizon& h,
                    const SmoothingDistribution& L);

AlphaEstimate ratio_alpha(const FrequencyProfile& profile);

// S_t ((1+r)^alpha - 1).
double power_law_induced(const FrequencyProfile& profile, const Horizon& h,
                         const AlphaEstimate& alpha);

struct PadeOrder {
  int num_deg = 2;
  int den_deg = 3;
};

// Rational approximant of sum_{i>=1} (-1)^{i+1} phi_i x^i evaluated at x = r.
// Throws Error(kNumericGuard) with "Pade degenerate" when the linear system
// is singular or the denominator vanishes at r.
double pade_gt(const FrequencyProfile& profile, const Horizon& h,
               PadeOrder order = {});

}  // namespace unseen

#endif  // UNSEEN_ESTIMATORS_H_
