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

#include "unseen/ghopt.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <mutex>
#include <utility>

#include "ceres/ceres.h"
#include "glog/logging.h"
#include "unseen/estimators.h"

namespace unseen {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Ceres reports benign line-search interpolation warnings through glog.
void QuietSolverLogging() {
  static std::once_flag once;
  std::call_once(once, [] { FLAGS_minloglevel = google::GLOG_ERROR; });
}

// log(sum_j exp(z_j)) shifted by the max; fills softmax weights.
double LogSumExp(const std::vector<double>& z, std::vector<double>* soft) {
  double m = -kInf;
  for (double v : z) m = std::max(m, v);
  double s = 0.0;
  soft->resize(z.size());
  for (std::size_t j = 0; j < z.size(); ++j) {
    (*soft)[j] = std::exp(z[j] - m);
    s += (*soft)[j];
  }
  for (double& w : *soft) w /= s;
  return m + std::log(s);
}

}  // namespace

std::vector<double> CompositeGrid(int size, double t) {
  if (size < 2) ThrowInvalid("grid size must be >= 2");
  if (!(t > 0.0)) ThrowInvalid("grid requires t > 0");
  const int n_geo = size / 2;
  const int n_uni = size - n_geo;
  const double p_lo = std::min(1e-6 / t, 1e-3);
  std::vector<double> p;
  p.reserve(static_cast<std::size_t>(size));
  const double log_lo = std::log(p_lo);
  for (int k = 0; k < n_geo; ++k) {
    const double frac = n_geo == 1 ? 1.0 : static_cast<double>(k) / (n_geo - 1);
    p.push_back(std::exp(log_lo * (1.0 - frac)));
  }
  for (int k = 1; k <= n_uni; ++k) {
    p.push_back(static_cast<double>(k) / n_uni);
  }
  std::sort(p.begin(), p.end());
  p.erase(std::unique(p.begin(), p.end()), p.end());
  p.back() = 1.0;
  return p;
}

GhFunctional::GhFunctional(std::vector<double> points, bool include_limit,
                           const Horizon& h, int depth)
    : include_limit_(include_limit), t_(h.t()), depth_(depth) {
  if (depth < 1) ThrowInvalid("depth must be >= 1");
  const double t = h.t();
  const double r = h.r();
  if (include_limit) points_.push_back(0.0);
  for (double p : points) {
    if (!(p > 0.0) || p > 1.0) ThrowInvalid("grid points must lie in (0, 1]");
    points_.push_back(p);
  }
  if (points_.empty()) ThrowInvalid("empty grid");
  const std::size_t n = points_.size();
  const std::size_t d = static_cast<std::size_t>(depth);
  offset_.resize(n);
  weights_.assign(n * d, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    const double p = points_[j];
    double* row = weights_.data() + j * d;
    if (p == 0.0) {
      offset_[j] = r * t;
      row[0] = t;
      continue;
    }
    const double x = p * t;
    offset_[j] = t * std::exp(-x) * (-std::expm1(-r * x)) / x;
    const double log_x = std::log(x);
    for (std::size_t i = 1; i <= d; ++i) {
      const double di = static_cast<double>(i);
      row[i - 1] = std::exp(std::log(t) - x + (di - 1.0) * log_x -
                            std::lgamma(di + 1.0));
    }
  }
}

GhEvaluation GhFunctional::Evaluate(std::span<const double> h) const {
  if (h.size() != static_cast<std::size_t>(depth_)) {
    ThrowInvalid("weight depth does not match the functional");
  }
  GhEvaluation e;
  e.grid_size = grid_size();
  double max_b = -1.0;
  double max_v = -kInf;
  for (std::size_t j = 0; j < points_.size(); ++j) {
    const auto row = Row(j);
    double s1 = 0.0;
    double s2 = 0.0;
    for (int i = 0; i < depth_; ++i) {
      s1 += row[i] * h[i];
      s2 += row[i] * h[i] * h[i];
    }
    const double b = std::abs(offset_[j] - s1);
    const double v = offset_[j] + s2;
    if (!std::isfinite(b) || !std::isfinite(v)) {
      ThrowNumeric("G_H overflow: horizon too large for the weight depth");
    }
    if (b > max_b) {
      max_b = b;
      e.p_star = points_[j];
    }
    if (v > max_v) {
      max_v = v;
      e.q_star = points_[j];
    }
    e.max_species_bias = std::max(e.max_species_bias, points_[j] * b);
  }
  e.y_b = max_b * max_b;
  e.y_v = max_v;
  e.g_h = e.y_b + e.y_v;
  return e;
}

double GhFunctional::Smoothed(std::span<const double> h, double mu_b,
                              double mu_v, std::span<double> grad) const {
  const std::size_t n = points_.size();
  std::vector<double> bias(n), zb(2 * n), zv(n);
  for (std::size_t j = 0; j < n; ++j) {
    const auto row = Row(j);
    double s1 = 0.0;
    double s2 = 0.0;
    for (int i = 0; i < depth_; ++i) {
      s1 += row[i] * h[i];
      s2 += row[i] * h[i] * h[i];
    }
    bias[j] = offset_[j] - s1;
    zb[2 * j] = bias[j] / mu_b;
    zb[2 * j + 1] = -bias[j] / mu_b;
    zv[j] = (offset_[j] + s2) / mu_v;
  }
  std::vector<double> wb, wv;
  const double fb = mu_b * LogSumExp(zb, &wb);
  const double fv = mu_v * LogSumExp(zv, &wv);
  const double value = fb * fb + fv;
  if (!std::isfinite(value)) return kInf;
  if (!grad.empty()) {
    std::fill(grad.begin(), grad.end(), 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      const auto row = Row(j);
      const double cb = -2.0 * fb * (wb[2 * j] - wb[2 * j + 1]);
      const double cv = 2.0 * wv[j];
      for (int i = 0; i < depth_; ++i) {
        grad[i] += row[i] * (cb + cv * h[i]);
      }
    }
  }
  return value;
}

GhEvaluation eval_gh(const LinearWeights& weights, const Horizon& h, int grid) {
  GhFunctional f(CompositeGrid(grid, h.t()), true, h, weights.depth());
  return f.Evaluate(weights.coeffs());
}

GhEvaluation eval_gh_restricted(const LinearWeights& weights, const Horizon& h,
                                int grid, double p0) {
  if (!(p0 > 0.0) || p0 > 1.0) ThrowInvalid("p0 must lie in (0, 1]");
  std::vector<double> pts;
  for (double p : CompositeGrid(grid, h.t())) {
    if (p >= p0) pts.push_back(p);
  }
  GhFunctional f(std::move(pts), false, h, weights.depth());
  return f.Evaluate(weights.coeffs());
}

double m_factor(double p_star) {
  if (p_star <= 0.0) return 1.0;
  return p_star * std::floor(1.0 / p_star);
}

double tilde_gh(const GhEvaluation& eval) {
  const double mp = m_factor(eval.p_star);
  const double mq = m_factor(eval.q_star);
  return mp * mp * eval.y_b + mq * eval.y_v - 2.0 * mp * std::sqrt(eval.y_b) -
         1.0;
}

bool uniqueness_certificate(const LinearWeights& weights, const Horizon& h) {
  const double h1 = weights(1);
  const double h2 = weights(2);
  const double r = h.r();
  return h2 * h2 - 2.0 * h1 * h1 > r * r + 2.0 * r;
}

GhCertificate Certify(const LinearWeights& weights, const Horizon& h,
                      int grid) {
  GhCertificate c;
  c.evaluation = eval_gh(weights, h, grid);
  c.m_p = m_factor(c.evaluation.p_star);
  c.m_q = m_factor(c.evaluation.q_star);
  c.m_p_limit_convention = c.evaluation.p_star == 0.0;
  c.m_q_limit_convention = c.evaluation.q_star == 0.0;
  c.tilde_g = tilde_gh(c.evaluation);
  c.uniqueness_ok = uniqueness_certificate(weights, h);
  c.bias_bounded_by_one = c.evaluation.max_species_bias <= 1.0;
  return c;
}

namespace {

class SmoothedCost : public ceres::FirstOrderFunction {
 public:
  SmoothedCost(const GhFunctional* f, double mu_b, double mu_v)
      : f_(f), mu_b_(mu_b), mu_v_(mu_v) {}

  bool Evaluate(const double* params, double* cost,
                double* gradient) const override {
    const std::span<const double> h(params,
                                    static_cast<std::size_t>(f_->depth()));
    std::span<double> g;
    if (gradient != nullptr) {
      g = std::span<double>(gradient, static_cast<std::size_t>(f_->depth()));
    }
    *cost = f_->Smoothed(h, mu_b_, mu_v_, g);
    return std::isfinite(*cost);
  }
  int NumParameters() const override { return f_->depth(); }

 private:
  const GhFunctional* f_;
  double mu_b_;
  double mu_v_;
};

struct Candidate {
  std::vector<double> h;
  double fine_g = kInf;
};

// Records each iterate that improves the coarse-grid G. An iterate is
// promoted to a fine-grid evaluation when the coarse improvement is
// relatively material; the rule only looks at the past, so a larger budget
// never loses a candidate found by a smaller one.
class Tracker : public ceres::IterationCallback {
 public:
  Tracker(const GhFunctional* coarse, const GhFunctional* fine,
          const double* params, double best_coarse, Candidate* best)
      : coarse_(coarse),
        fine_(fine),
        params_(params),
        best_coarse_(best_coarse),
        last_promoted_(best_coarse),
        best_(best) {}

  ceres::CallbackReturnType operator()(
      const ceres::IterationSummary&) override {
    ++iterations_;
    const std::span<const double> h(params_,
                                    static_cast<std::size_t>(coarse_->depth()));
    double g;
    try {
      g = coarse_->Value(h);
    } catch (const Error&) {
      return ceres::SOLVER_CONTINUE;
    }
    if (g < best_coarse_) {
      best_coarse_ = g;
      if (g < last_promoted_ * (1.0 - 1e-6)) Promote(h, g);
    }
    return ceres::SOLVER_CONTINUE;
  }

  // Called at the end of a stage so the final iterate is always compared.
  void Flush() {
    const std::span<const double> h(params_,
                                    static_cast<std::size_t>(coarse_->depth()));
    try {
      Promote(h, coarse_->Value(h));
    } catch (const Error&) {
    }
  }

  int iterations() const { return iterations_; }

 private:
  void Promote(std::span<const double> h, double coarse_g) {
    last_promoted_ = std::min(last_promoted_, coarse_g);
    const double fg = fine_->Value(h);
    if (fg < best_->fine_g) {
      best_->fine_g = fg;
      best_->h.assign(h.begin(), h.end());
    }
  }

  const GhFunctional* coarse_;
  const GhFunctional* fine_;
  const double* params_;
  double best_coarse_;
  double last_promoted_;
  Candidate* best_;
  int iterations_ = 0;
};

constexpr double kKappas[] = {1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7};
constexpr int kStageIterations = 100;

// Runs the staged smoothing schedule from one start. Returns iterations.
int RunFromStart(const GhFunctional& coarse, const GhFunctional& fine,
                 std::vector<double> h, int budget, Candidate* best) {
  int used = 0;
  std::size_t stage = 0;
  while (used < budget) {
    const double kappa =
        kKappas[std::min(stage, std::size(kKappas) - 1)];
    ++stage;
    GhEvaluation e = coarse.Evaluate(h);
    const double sb = std::sqrt(e.y_b);
    const double mu_b = kappa * std::max(sb, 1e-12 * std::sqrt(e.g_h) + 1e-300);
    const double mu_v = kappa * std::max(e.y_v, 1e-300);

    ceres::GradientProblem problem(new SmoothedCost(&coarse, mu_b, mu_v));
    ceres::GradientProblemSolver::Options opts;
    opts.line_search_direction_type = ceres::LBFGS;
    opts.max_num_iterations = std::min(kStageIterations, budget - used);
    opts.logging_type = ceres::SILENT;
    opts.minimizer_progress_to_stdout = false;
    opts.function_tolerance = 1e-14;
    opts.gradient_tolerance = 1e-16;
    opts.parameter_tolerance = 1e-14;
    opts.update_state_every_iteration = true;
    Tracker tracker(&coarse, &fine, h.data(), e.g_h, best);
    opts.callbacks.push_back(&tracker);
    ceres::GradientProblemSolver::Summary summary;
    ceres::Solve(opts, problem, h.data(), &summary);
    tracker.Flush();
    // Stages that converge early hand their leftover iterations to the next
    // stage. A smaller budget still yields a prefix of the same trajectory.
    const int taken = std::max<int>(
        1, static_cast<int>(summary.iterations.size()) - 1);
    used += taken;
    for (double v : h) {
      if (!std::isfinite(v)) return used;
    }
    if (stage >= std::size(kKappas) && taken < opts.max_num_iterations) break;
  }
  return used;
}

}  // namespace

HStarFit optimize_hstar(const Horizon& h, const HStarOptions& options) {
  if (options.depth < 1) ThrowInvalid("depth must be >= 1");
  if (options.grid < 2 || options.cert_grid < 2) {
    ThrowInvalid("grid sizes must be >= 2");
  }
  if (options.budget < 0) ThrowInvalid("budget must be >= 0");
  QuietSolverLogging();
  const int d = options.depth;
  const GhFunctional coarse(CompositeGrid(options.grid, h.t()), true, h, d);
  const GhFunctional fine(CompositeGrid(options.cert_grid, h.t()), true, h, d);

  struct Start {
    std::string name;
    std::vector<double> h;
  };
  std::vector<Start> starts;
  {
    const LinearWeights gt = gt_weights(h, d);
    starts.push_back({"gt", {gt.coeffs().begin(), gt.coeffs().end()}});
    const LinearWeights sgt = sgt_weights(h, DefaultSgtSmoothing(h), d);
    starts.push_back({"sgt", {sgt.coeffs().begin(), sgt.coeffs().end()}});
    starts.push_back({"null", std::vector<double>(static_cast<std::size_t>(d))});
  }

  HStarFit fit;
  fit.options = options;
  Candidate overall;
  std::vector<double> start_g;
  for (const Start& s : starts) {
    double g = kInf;
    try {
      g = fine.Value(s.h);
    } catch (const Error&) {
    }
    start_g.push_back(g);
    if (g < overall.fine_g) {
      overall.fine_g = g;
      overall.h = s.h;
      fit.chosen_start = s.name;
    }
  }
  fit.g_gt = start_g[0];
  fit.g_sgt = start_g[1];
  fit.g_null = start_g[2];

  for (std::size_t k = 0; k < starts.size(); ++k) {
    if (!std::isfinite(start_g[k])) continue;
    Candidate local;
    local.fine_g = start_g[k];
    local.h = starts[k].h;
    fit.iterations +=
        RunFromStart(coarse, fine, starts[k].h, options.budget, &local);
    if (local.fine_g < overall.fine_g) {
      overall = local;
      fit.chosen_start = starts[k].name;
    }
  }
  if (overall.h.empty()) {
    ThrowNumeric("no finite starting point for the G_H minimization");
  }
  fit.weights = LinearWeights(overall.h);
  fit.certificate = Certify(fit.weights, h, options.cert_grid);
  const double g = fit.certificate.evaluation.g_h;
  fit.improvement_guarantee = g <= fit.g_gt && g <= fit.g_null;
  return fit;
}

HStarFit optimize_hstar(const Horizon& h, int depth, int grid, int budget) {
  HStarOptions o;
  o.depth = depth;
  o.grid = grid;
  o.cert_grid = 10 * grid;
  o.budget = budget;
  return optimize_hstar(h, o);
}

}  // namespace unseen
