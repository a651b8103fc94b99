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

// Method dispatch: one call from a profile and horizon to a report.

#ifndef UNSEEN_PREDICT_H_
#define UNSEEN_PREDICT_H_

#include <optional>

#include "unseen/estimators.h"
#include "unseen/ghopt.h"
#include "unseen/types.h"

namespace unseen {

struct Method {
  MethodKind kind = MethodKind::kNull;
  // SGT smoothing; the horizon default is used when absent.
  std::optional<SmoothingDistribution> smoothing;
  // Linear weights, or precomputed H* weights. HStar fits when absent.
  std::optional<LinearWeights> weights;
  HStarOptions hstar;
  PadeOrder pade;
  // Replaces phi_1/S_t for ratio-alpha.
  std::optional<double> fixed_alpha;

  static Method Of(MethodKind kind) {
    Method m;
    m.kind = kind;
    return m;
  }
  static Method Linear(LinearWeights w) {
    Method m = Of(MethodKind::kLinear);
    m.weights = std::move(w);
    return m;
  }
};

struct PredictOptions {
  bool with_uncertainty = false;
  double level = 0.95;
  // Arity bound B for the ratio-alpha conservative interval; 0 skips it.
  int arity = 0;
  double p_split = 0.5;
};

PredictionReport predict(const FrequencyProfile& profile, const Horizon& h,
                         const Method& method, const PredictOptions& options = {});

}  // namespace unseen

#endif  // UNSEEN_PREDICT_H_
