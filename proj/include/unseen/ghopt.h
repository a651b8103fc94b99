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

// Worst-case mean squared error functional of a linear estimator and its
// minimization.
//
// For a weight sequence H and horizon (t, r), with g_H(x) = sum_i H_i x^i/i!,
//
//   Y_b = (sup_p  e^{-pt}/p * |1 - e^{-rpt} - g_H(pt)|)^2
//   Y_v =  sup_q  e^{-qt}/q * (1 - e^{-rqt} + g_{H^2}(qt))
//   G_H = Y_b + Y_v
//
// bounds the worst-case MSE of sum_s H(N_s) from above. Suprema are taken
// over a composite probability grid on (0, 1] plus the analytic p -> 0 limits
// t|r - H_1| and t(r + H_1^2).

#ifndef UNSEEN_GHOPT_H_
#define UNSEEN_GHOPT_H_

#include <span>
#include <string>
#include <vector>

#include "unseen/types.h"

namespace unseen {

struct GhEvaluation {
  double y_b = 0.0;
  double y_v = 0.0;
  double g_h = 0.0;
  double p_star = 0.0;  // 0 means the p -> 0 limit attains the supremum
  double q_star = 0.0;
  int grid_size = 0;
  // max over the grid of the species-wise bias |e^{-x}(1 - e^{-rx} - g_H(x))|
  double max_species_bias = 0.0;
};

struct GhCertificate {
  GhEvaluation evaluation;
  double m_p = 1.0;
  double m_q = 1.0;
  double tilde_g = 0.0;
  bool uniqueness_ok = false;
  bool bias_bounded_by_one = false;
  // m = 1 was substituted because the maximizer is the p -> 0 limit.
  bool m_p_limit_convention = false;
  bool m_q_limit_convention = false;
};

// Ascending probabilities in (0, 1]: half geometric from 1e-6/t, half
// uniform, deduplicated. Always contains 1.
std::vector<double> CompositeGrid(int size, double t);

// Precomputed grid functional for a fixed (points, t, r, depth).
class GhFunctional {
 public:
  GhFunctional(std::vector<double> points, bool include_limit, const Horizon& h,
               int depth);

  int depth() const { return depth_; }
  int grid_size() const {
    return static_cast<int>(points_.size()) + (include_limit_ ? 1 : 0);
  }

  GhEvaluation Evaluate(std::span<const double> h) const;
  double Value(std::span<const double> h) const { return Evaluate(h).g_h; }

  // Log-sum-exp surrogate of G_H with temperatures mu_b (bias) and mu_v
  // (variance). Always >= G_H. Writes the gradient when grad is non-empty.
  // Returns +inf when an intermediate overflows.
  double Smoothed(std::span<const double> h, double mu_b, double mu_v,
                  std::span<double> grad) const;

 private:
  // Row j of the design: weights of H_i in the bias sum at grid point j.
  std::span<const double> Row(std::size_t j) const {
    return {weights_.data() + j * static_cast<std::size_t>(depth_),
            static_cast<std::size_t>(depth_)};
  }

  std::vector<double> points_;  // p values of the rows; 0 for the limit row
  bool include_limit_;
  double t_;
  int depth_;
  std::vector<double> offset_;   // e^{-x}(1 - e^{-rx})/p per row
  std::vector<double> weights_;  // e^{-x} x^i / (i! p), row-major
};

GhEvaluation eval_gh(const LinearWeights& weights, const Horizon& h, int grid);

// Both suprema restricted to grid points in [p0, 1]; no limit points.
GhEvaluation eval_gh_restricted(const LinearWeights& weights, const Horizon& h,
                                int grid, double p0);

// m_p^2 Y_b + m_q Y_v - 2 m_p sqrt(Y_b) - 1 with m_p = p* floor(1/p*)
// (m_p = 1 when p* = 0).
double tilde_gh(const GhEvaluation& eval);
double m_factor(double p_star);

// H_2^2 - 2 H_1^2 > r^2 + 2r.
bool uniqueness_certificate(const LinearWeights& weights, const Horizon& h);

GhCertificate Certify(const LinearWeights& weights, const Horizon& h, int grid);

struct HStarOptions {
  int depth = 40;
  int grid = 5000;
  int cert_grid = 50000;
  int budget = 1000;  // L-BFGS iterations per start
};

struct HStarFit {
  LinearWeights weights = LinearWeights::Zeros(1);
  GhCertificate certificate;
  HStarOptions options;
  std::string chosen_start;
  // Fine-grid G of the starting sequences.
  double g_gt = 0.0;
  double g_null = 0.0;
  double g_sgt = 0.0;
  // G(H*) <= G of the GT and null starts on the certification grid.
  bool improvement_guarantee = false;
  int iterations = 0;
};

HStarFit optimize_hstar(const Horizon& h, const HStarOptions& options);
HStarFit optimize_hstar(const Horizon& h, int depth, int grid, int budget);

}  // namespace unseen

#endif  // UNSEEN_GHOPT_H_
