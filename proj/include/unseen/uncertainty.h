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

// Variance proxies and prediction intervals, the distant-future tail bound,
// and dependence diagnostics for incidence data.

#ifndef UNSEEN_UNCERTAINTY_H_
#define UNSEEN_UNCERTAINTY_H_

#include <cstdint>

#include "unseen/stream.h"
#include "unseen/types.h"

namespace unseen {

struct VarianceProxy {
  enum class Kind { kGt, kLinear };
  double value = 0.0;
  Kind kind = Kind::kGt;
  bool clamped = false;  // a negative linear proxy was raised to 0
};

// sum_i phi_i r^{2i} + GT. Only justified for r <= 1; not enforced.
VarianceProxy gt_variance_proxy(const FrequencyProfile& profile,
                                const Horizon& h);

// sum_i H_i^2 phi_i + sum_i H_i phi_i, clamped at 0.
VarianceProxy linear_variance_proxy(const FrequencyProfile& profile,
                                    const LinearWeights& weights);

// point -/+ z_{(1+level)/2} sqrt(V). The lower end is not clamped at 0.
Interval gaussian_interval(double point, const VarianceProxy& proxy,
                           double level);

// Inputs of the distant-future bound. The power-law scale c Gamma(1-a) t^a
// is replaced by the observed s_t throughout.
struct TailBoundQuery {
  double z = 0.0;
  double p_split = 0.5;
  int arity = 1;  // B
  double s_t = 0.0;
  double s_t2 = 0.0;     // species seen at least twice
  double s_T_hat = 0.0;  // s_t (1+r)^alpha_hat
  double alpha_hat = 0.0;
  double c_hat = 0.0;  // s_t / (Gamma(1-alpha_hat) t^alpha_hat), informative
};

TailBoundQuery MakeTailBoundQuery(const FrequencyProfile& profile,
                                  const Horizon& h, int arity, double z,
                                  double p_split = 0.5);

// Largest admissible z: (1/p)(1+r)^a (1 + 2 ln(1+r)) s_t.
double max_admissible_z(const TailBoundQuery& q, const Horizon& h);

double d_of_z(const TailBoundQuery& q, const Horizon& h);

// Sum of the six exponential terms; 6 at z = 0.
double far_future_tail(const TailBoundQuery& q, const Horizon& h);

// Smallest z whose tail bound is <= 1 - level, centred on the ratio-alpha
// prediction. Throws kNumericGuard when no admissible z achieves it.
Interval conservative_interval(const FrequencyProfile& profile,
                               const Horizon& h, int arity, double level,
                               double p_split = 0.5);

// d = x^2 z c^{y/x} / (k x^2 + (x + y) z c^{y/x} ln c). Requires c > 1,
// positive arguments and z c^{y/x} < k x.
double trans_eq_d(double x, double y, double z, double c, double k);

// Asymptotic variance constant of the ratio-alpha prediction error scaled
// by t^{alpha/2}. Its centring term involves E[S_t] and E[S_T], which are
// not observable, so no interval is built from it.
double clt_distant_sigma2(double alpha, double r);

// Estimate of the extra squared error caused by species sharing events:
// sum over ordered co-observed pairs of
// (r^{2 N_{x&y}} - (-r)^{N_{x&y}}) (-r)^{N_x + N_y - 2 N_{x&y}}.
double epsilon_hat(const ObservationStream& stream, const Horizon& h);

struct CodiscoveryReport {
  std::int64_t codiscovered_pairs = 0;  // ordered
  std::int64_t discovered_species = 0;
  double ratio = 0.0;
};

// Ordered pairs of species first observed in the same event.
CodiscoveryReport codiscovery_diagnostic(const ObservationStream& stream);

// r (r + 1) times the number of ordered pairs co-observed exactly once.
double perfect_pair_bound(const ObservationStream& stream, const Horizon& h);

}  // namespace unseen

#endif  // UNSEEN_UNCERTAINTY_H_
