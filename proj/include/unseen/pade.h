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

#ifndef UNSEEN_PADE_H_
#define UNSEEN_PADE_H_

#include <span>
#include <vector>

namespace unseen {

// p(x) / q(x) with q(0) = 1.
struct RationalFunction {
  std::vector<double> numerator;
  std::vector<double> denominator;

  double Numerator(double x) const;
  double Denominator(double x) const;
  double operator()(double x) const { return Numerator(x) / Denominator(x); }
};

// [num_deg/den_deg] Pade approximant of the power series
// series[0] + series[1] x + ... ; needs num_deg + den_deg + 1 coefficients.
// Throws Error(kNumericGuard) "Pade degenerate" on a rank-deficient system.
RationalFunction pade_approximant(std::span<const double> series, int num_deg,
                                  int den_deg);

}  // namespace unseen

#endif  // UNSEEN_PADE_H_
