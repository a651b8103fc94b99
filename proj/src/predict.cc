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

#include "unseen/predict.h"

#include <algorithm>
#include <string>

#include "unseen/uncertainty.h"

namespace unseen {
namespace {

void AttachGaussian(PredictionReport* rep, const VarianceProxy& v,
                    const PredictOptions& o) {
  rep->variance_proxy = v.value;
  rep->variance_clamped = v.clamped;
  rep->interval = gaussian_interval(rep->point, v, o.level);
  rep->nominal_level = o.level;
}

int ProfileDepth(const FrequencyProfile& profile) {
  return static_cast<int>(std::max<std::int64_t>(1, profile.max_multiplicity()));
}

}  // namespace

PredictionReport predict(const FrequencyProfile& profile, const Horizon& h,
                         const Method& method, const PredictOptions& options) {
  PredictionReport rep;
  rep.method = method.kind;
  switch (method.kind) {
    case MethodKind::kNull:
      rep.point = 0.0;
      if (options.with_uncertainty) {
        rep.notes.push_back("null estimator has no variance proxy");
      }
      break;
    case MethodKind::kGoodToulmin:
      rep.point = good_toulmin(profile, h);
      if (options.with_uncertainty) {
        if (h.r() > 1.0) {
          rep.notes.push_back("r > 1: Gaussian GT interval is not justified");
        }
        AttachGaussian(&rep, gt_variance_proxy(profile, h), options);
      }
      break;
    case MethodKind::kSmoothedGoodToulmin: {
      const SmoothingDistribution L =
          method.smoothing.value_or(DefaultSgtSmoothing(h));
      rep.point = sgt_estimate(profile, h, L);
      rep.notes.push_back("smoothing " + L.Describe());
      if (options.with_uncertainty) {
        const LinearWeights w = sgt_weights(h, L, ProfileDepth(profile));
        AttachGaussian(&rep, linear_variance_proxy(profile, w), options);
      }
      break;
    }
    case MethodKind::kLinear:
    case MethodKind::kHStar: {
      LinearWeights w = LinearWeights::Zeros(1);
      if (method.weights.has_value()) {
        w = *method.weights;
      } else if (method.kind == MethodKind::kHStar) {
        const HStarFit fit = optimize_hstar(h, method.hstar);
        w = fit.weights;
        rep.notes.push_back("fitted H* from start " + fit.chosen_start +
                            ", G_H = " +
                            std::to_string(fit.certificate.evaluation.g_h));
      } else {
        ThrowInvalid("linear method needs weights");
      }
      rep.point = linear_estimate(profile, w);
      if (options.with_uncertainty) {
        AttachGaussian(&rep, linear_variance_proxy(profile, w), options);
      }
      break;
    }
    case MethodKind::kRatioAlpha: {
      const AlphaEstimate a = method.fixed_alpha.has_value()
                                  ? AlphaEstimate::Fixed(*method.fixed_alpha)
                                  : ratio_alpha(profile);
      rep.point = power_law_induced(profile, h, a);
      rep.notes.push_back("alpha_hat " + std::to_string(a.alpha_hat));
      if (options.with_uncertainty) {
        if (options.arity > 0) {
          rep.interval = conservative_interval(profile, h, options.arity,
                                               options.level, options.p_split);
          rep.nominal_level = options.level;
          rep.notes.push_back("conservative tail-bound interval");
        } else {
          rep.notes.push_back(
              "arity bound B not given: no interval for ratio-alpha");
        }
      }
      break;
    }
    case MethodKind::kPade:
      rep.point = pade_gt(profile, h, method.pade);
      break;
  }
  return rep;
}

}  // namespace unseen
