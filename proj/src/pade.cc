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

#include "unseen/pade.h"

#include <Eigen/Dense>

#include "unseen/types.h"

namespace unseen {
namespace {

double Horner(const std::vector<double>& c, double x) {
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
  return acc;
}

}  // namespace

double RationalFunction::Numerator(double x) const {
  return Horner(numerator, x);
}
double RationalFunction::Denominator(double x) const {
  return Horner(denominator, x);
}

// Frobenius form: any nonzero (Q, P) with Q f - P = O(x^{L+M+1}) defines the
// same rational function, so singular systems (non-normal tables) still
// yield an approximant. Degenerate only if the reduced Q vanishes at 0.
RationalFunction pade_approximant(std::span<const double> series, int num_deg,
                                  int den_deg) {
  if (num_deg < 0 || den_deg < 0) {
    ThrowInvalid("Pade degrees must be non-negative");
  }
  const int n = num_deg + den_deg;
  if (static_cast<int>(series.size()) < n + 1) {
    ThrowInvalid("Pade approximant needs num_deg + den_deg + 1 coefficients");
  }
  auto c = [&](int k) { return k < 0 ? 0.0 : series[static_cast<std::size_t>(k)]; };

  Eigen::VectorXd q = Eigen::VectorXd::Zero(den_deg + 1);
  if (den_deg == 0) {
    q(0) = 1.0;
  } else {
    // sum_{j=0..M} q_j c_{L+k-j} = 0, k = 1..M
    Eigen::MatrixXd a(den_deg, den_deg + 1);
    for (int k = 1; k <= den_deg; ++k) {
      for (int j = 0; j <= den_deg; ++j) a(k - 1, j) = c(num_deg + k - j);
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    lu.setThreshold(1e-12);
    const Eigen::MatrixXd kernel = lu.kernel();
    q = kernel.col(0);
  }
  Eigen::VectorXd p = Eigen::VectorXd::Zero(num_deg + 1);
  for (int i = 0; i <= num_deg; ++i) {
    for (int j = 0; j <= std::min(i, den_deg); ++j) p(i) += q(j) * c(i - j);
  }

  const double qn = q.cwiseAbs().maxCoeff();
  const double pn = p.size() > 0 ? p.cwiseAbs().maxCoeff() : 0.0;
  int shift = 0;
  while (shift <= den_deg && std::abs(q(shift)) <= 1e-12 * qn) ++shift;
  if (shift > den_deg) ThrowNumeric("Pade degenerate: singular linear system");
  for (int i = 0; i < std::min(shift, num_deg + 1); ++i) {
    if (std::abs(p(i)) > 1e-10 * (pn + qn)) {
      ThrowNumeric("Pade degenerate: singular linear system");
    }
  }

  RationalFunction f;
  const double q0 = q(shift);
  for (int j = shift; j <= den_deg; ++j) f.denominator.push_back(q(j) / q0);
  for (int i = shift; i <= num_deg; ++i) f.numerator.push_back(p(i) / q0);
  if (f.numerator.empty()) f.numerator.push_back(0.0);

  return f;
}

}  // namespace unseen
