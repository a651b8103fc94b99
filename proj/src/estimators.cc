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

#include "unseen/estimators.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include <boost/math/distributions/binomial.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "unseen/pade.h"

namespace unseen {
namespace {

// (-r)^i
double NegPow(double r, std::int64_t i) {
  const double mag = std::pow(r, static_cast<double>(i));
  return (i % 2 == 0) ? mag : -mag;
}

}  // namespace

SmoothingDistribution SmoothingDistribution::MakeDegenerate(
    std::optional<std::int64_t> k) {
  if (k.has_value() && *k < 0) ThrowInvalid("degenerate smoothing needs k >= 0");
  return SmoothingDistribution(Degenerate{k});
}

SmoothingDistribution SmoothingDistribution::MakeBinomial(std::int64_t k,
                                                          double q) {
  if (k < 0) ThrowInvalid("binomial smoothing needs k >= 0");
  if (!(q >= 0.0 && q <= 1.0)) {
    ThrowInvalid("binomial smoothing needs q in [0,1]");
  }
  return SmoothingDistribution(Binomial{k, q});
}

SmoothingDistribution SmoothingDistribution::MakePoisson(double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    ThrowInvalid("poisson smoothing needs finite lambda >= 0");
  }
  return SmoothingDistribution(Poisson{lambda});
}

SmoothingDistribution SmoothingDistribution::MakeCustom(
    std::function<double(std::int64_t)> tail, std::string label) {
  if (!tail) ThrowInvalid("custom smoothing needs a tail function");
  if (tail(0) != 1.0) ThrowInvalid("custom smoothing tail must have tail(0) = 1");
  return SmoothingDistribution(Custom{std::move(tail), std::move(label)});
}

double SmoothingDistribution::tail(std::int64_t i) const {
  if (i <= 0) return 1.0;
  return std::visit(
      [i](const auto& s) -> double {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, Degenerate>) {
          return (!s.k.has_value() || i <= *s.k) ? 1.0 : 0.0;
        } else if constexpr (std::is_same_v<S, Binomial>) {
          if (i > s.k) return 0.0;
          if (s.q == 0.0) return 0.0;
          if (s.q == 1.0) return 1.0;
          boost::math::binomial_distribution<double> dist(
              static_cast<double>(s.k), s.q);
          return boost::math::cdf(
              boost::math::complement(dist, static_cast<double>(i - 1)));
        } else if constexpr (std::is_same_v<S, Poisson>) {
          if (s.lambda == 0.0) return 0.0;
          return boost::math::gamma_p(static_cast<double>(i), s.lambda);
        } else {
          const double v = s.tail(i);
          if (!(v >= 0.0 && v <= 1.0)) {
            ThrowInvalid("custom smoothing tail must lie in [0,1]");
          }
          return v;
        }
      },
      spec_);
}

std::string SmoothingDistribution::Describe() const {
  std::ostringstream os;
  std::visit(
      [&os](const auto& s) {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, Degenerate>) {
          os << "degenerate(" << (s.k ? std::to_string(*s.k) : "inf") << ")";
        } else if constexpr (std::is_same_v<S, Binomial>) {
          os << "binomial(k=" << s.k << ",q=" << s.q << ")";
        } else if constexpr (std::is_same_v<S, Poisson>) {
          os << "poisson(" << s.lambda << ")";
        } else {
          os << s.label;
        }
      },
      spec_);
  return os.str();
}

SgtParams DefaultSgtParams(const Horizon& h) {
  SgtParams p;
  const double r = h.r();
  if (r <= 1.0) {
    p.untruncated = true;
    return p;
  }
  const double arg = h.t() * r * r / (r - 1.0);
  const double k = std::ceil(0.5 * std::log(arg) / std::log(3.0));
  p.k = std::max<std::int64_t>(1, static_cast<std::int64_t>(k));
  p.q = 2.0 / (r + 2.0);
  return p;
}

SmoothingDistribution DefaultSgtSmoothing(const Horizon& h) {
  const SgtParams p = DefaultSgtParams(h);
  if (p.untruncated) return SmoothingDistribution::MakeDegenerate(std::nullopt);
  return SmoothingDistribution::MakeBinomial(p.k, p.q);
}

AlphaEstimate AlphaEstimate::Fixed(double value) {
  if (!(value >= 0.0 && value <= 1.0)) {
    ThrowInvalid("fixed alpha must lie in [0,1]");
  }
  return AlphaEstimate{value, Source::kFixed};
}

double good_toulmin(const FrequencyProfile& profile, const Horizon& h) {
  double sum = 0.0;
  for (const auto& [i, phi] : profile.counts()) {
    sum -= static_cast<double>(phi) * NegPow(h.r(), i);
  }
  return sum;
}

double linear_estimate(const FrequencyProfile& profile,
                       const LinearWeights& weights) {
  double sum = 0.0;
  for (const auto& [i, phi] : profile.counts()) {
    if (i > weights.depth()) break;
    sum += weights(i) * static_cast<double>(phi);
  }
  return sum;
}

LinearWeights gt_weights(const Horizon& h, int depth) {
  if (depth < 1) ThrowInvalid("depth must be >= 1");
  std::vector<double> coeffs(static_cast<std::size_t>(depth));
  for (int i = 1; i <= depth; ++i) {
    coeffs[i - 1] = -NegPow(h.r(), i);
    if (!std::isfinite(coeffs[i - 1])) {
      ThrowNumeric("GT weights overflow: horizon too large for depth");
    }
  }
  return LinearWeights(std::move(coeffs));
}

int gt_exact_depth(const Horizon& h) {
  const double mean = h.r() * h.t();
  const double d = std::ceil(mean + 12.0 * std::sqrt(mean) + 40.0);
  return static_cast<int>(std::min(d, 20000.0));
}

LinearWeights sgt_weights(const Horizon& h, const SmoothingDistribution& L,
                          int depth) {
  if (depth < 1) ThrowInvalid("depth must be >= 1");
  std::vector<double> coeffs(static_cast<std::size_t>(depth));
  for (int i = 1; i <= depth; ++i) {
    const double tail = L.tail(i);
    coeffs[i - 1] = tail == 0.0 ? 0.0 : -tail * NegPow(h.r(), i);
    if (!std::isfinite(coeffs[i - 1])) {
      ThrowNumeric("SGT weights overflow: horizon too large for depth");
    }
  }
  return LinearWeights(std::move(coeffs));
}

double sgt_estimate(const FrequencyProfile& profile, const Horizon& h,
                    const SmoothingDistribution& L) {
  double sum = 0.0;
  for (const auto& [i, phi] : profile.counts()) {
    const double tail = L.tail(i);
    if (tail == 0.0) continue;
    sum -= tail * NegPow(h.r(), i) * static_cast<double>(phi);
  }
  return sum;
}

AlphaEstimate ratio_alpha(const FrequencyProfile& profile) {
  if (profile.distinct() == 0) {
    ThrowData("ratio-alpha is undefined when no species were observed");
  }
  const double a = static_cast<double>(profile.phi(1)) /
                   static_cast<double>(profile.distinct());
  return AlphaEstimate{std::clamp(a, 0.0, 1.0),
                       AlphaEstimate::Source::kRatioPhi1};
}

double power_law_induced(const FrequencyProfile& profile, const Horizon& h,
                         const AlphaEstimate& alpha) {
  const double s = static_cast<double>(profile.distinct());
  return s * std::expm1(alpha.alpha_hat * std::log1p(h.r()));
}

double pade_gt(const FrequencyProfile& profile, const Horizon& h,
               PadeOrder order) {
  if (order.num_deg < 0 || order.den_deg < 0) {
    ThrowInvalid("Pade degrees must be non-negative");
  }
  const int n = order.num_deg + order.den_deg;
  std::vector<double> series(static_cast<std::size_t>(n + 1), 0.0);
  bool all_zero = true;
  for (int i = 1; i <= n; ++i) {
    const double phi = static_cast<double>(profile.phi(i));
    series[i] = (i % 2 == 1) ? phi : -phi;
    all_zero = all_zero && phi == 0.0;
  }
  if (all_zero) return 0.0;
  const RationalFunction f =
      pade_approximant(series, order.num_deg, order.den_deg);
  const double den = f.Denominator(h.r());
  double den_mag = 0.0, power = 1.0;
  for (double q : f.denominator) {
    den_mag += std::abs(q) * power;
    power *= h.r();
  }
  if (!std::isfinite(den) || std::abs(den) <= 1e-12 * den_mag) {
    ThrowNumeric("Pade degenerate: denominator vanishes at r");
  }
  const double v = f.Numerator(h.r()) / den;
  if (!std::isfinite(v)) ThrowNumeric("Pade degenerate: non-finite value");
  return v;
}

}  // namespace unseen
