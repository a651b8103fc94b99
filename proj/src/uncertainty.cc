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

#include "unseen/uncertainty.h"

#include <cmath>
#include <string>
#include <unordered_map>

#include "boost/math/distributions/normal.hpp"
#include "unseen/estimators.h"

namespace unseen {
namespace {

double SignedPow(double r, std::int64_t n) {
  const double v = std::pow(r, static_cast<double>(n));
  return (n % 2 == 0) ? v : -v;
}

// exp(-num^2 / den) with the 0/0 and x/0 cases resolved as limits.
double ExpTerm(double num, double den) {
  if (num <= 0.0) return 1.0;
  if (den <= 0.0) return 0.0;
  return std::exp(-num * num / den);
}

double DOfZUnchecked(const TailBoundQuery& q, double r) {
  const double s = q.s_t;
  const double l = std::log1p(r);
  const double damp = std::pow(1.0 + r, -q.alpha_hat);
  const double pz = q.p_split * q.z;
  return pz * s * damp / ((1.0 + 2.0 * l) * s + pz * (2.0 - q.alpha_hat) * l * damp);
}

double TailUnchecked(const TailBoundQuery& q, const Horizon& h) {
  const double b = q.arity;
  const double a1 = (1.0 - q.p_split) * q.z;
  const double d = DOfZUnchecked(q, h.r());
  const double v2 = 4.0 * b - 2.0;
  return ExpTerm(a1, 2.0 * b * q.s_T_hat) +
         ExpTerm(a1, 2.0 * b * q.s_T_hat + 2.0 / 3.0 * b * a1) +
         ExpTerm(d, 2.0 * b * q.s_t) +
         ExpTerm(d, 2.0 * b * q.s_t + 2.0 / 3.0 * b * d) +
         ExpTerm(d, v2 * q.s_t2) + ExpTerm(d, v2 * q.s_t2 + v2 / 3.0 * d);
}

void ValidateQuery(const TailBoundQuery& q, const Horizon& h) {
  if (!(q.p_split > 0.0 && q.p_split < 1.0)) {
    ThrowInvalid("p_split must lie in (0, 1)");
  }
  if (q.arity < 1) ThrowInvalid("arity bound B must be >= 1");
  if (!(q.z >= 0.0)) ThrowInvalid("z must be non-negative");
  if (!(q.s_t > 0.0)) ThrowData("tail bound needs S_t > 0");
  if (q.s_t2 < 0.0 || q.s_T_hat < 0.0) {
    ThrowData("tail bound plug-ins must be non-negative");
  }
  if (!(q.alpha_hat >= 0.0 && q.alpha_hat <= 1.0)) {
    ThrowInvalid("alpha_hat must lie in [0, 1]");
  }
  const double zmax = max_admissible_z(q, h);
  if (!(q.z < zmax)) {
    ThrowInvalid("z = " + std::to_string(q.z) +
                 " violates the validity threshold; max admissible z is " +
                 std::to_string(zmax));
  }
}

struct PairTable {
  std::unordered_map<std::uint64_t, std::int64_t> shared;  // a < b
  std::vector<std::int64_t> counts;
};

PairTable BuildPairs(const ObservationStream& stream) {
  PairTable t;
  t.counts = SpeciesCounts(stream);
  for (std::size_t k = 0; k < stream.size(); ++k) {
    const auto e = stream.event(k);
    for (std::size_t i = 0; i < e.size(); ++i) {
      for (std::size_t j = i + 1; j < e.size(); ++j) {
        const auto key = (static_cast<std::uint64_t>(e[i]) << 32) |
                         static_cast<std::uint32_t>(e[j]);
        ++t.shared[key];
      }
    }
  }
  return t;
}

}  // namespace

VarianceProxy gt_variance_proxy(const FrequencyProfile& profile,
                                const Horizon& h) {
  double v = good_toulmin(profile, h);
  for (const auto& [i, phi] : profile.counts()) {
    v += static_cast<double>(phi) * std::pow(h.r(), 2.0 * static_cast<double>(i));
  }
  VarianceProxy out;
  out.kind = VarianceProxy::Kind::kGt;
  out.value = v;
  if (v < 0.0) {
    out.value = 0.0;
    out.clamped = true;
  }
  return out;
}

VarianceProxy linear_variance_proxy(const FrequencyProfile& profile,
                                    const LinearWeights& weights) {
  double v = 0.0;
  for (const auto& [i, phi] : profile.counts()) {
    if (i > weights.depth()) break;
    const double hi = weights(i);
    v += static_cast<double>(phi) * (hi * hi + hi);
  }
  VarianceProxy out;
  out.kind = VarianceProxy::Kind::kLinear;
  out.value = v;
  if (v < 0.0) {
    out.value = 0.0;
    out.clamped = true;
  }
  return out;
}

Interval gaussian_interval(double point, const VarianceProxy& proxy,
                           double level) {
  if (!(level > 0.0 && level < 1.0)) ThrowInvalid("level must lie in (0, 1)");
  if (!(proxy.value >= 0.0)) ThrowInvalid("variance proxy must be >= 0");
  const boost::math::normal_distribution<double> normal;
  const double zq = boost::math::quantile(normal, 0.5 * (1.0 + level));
  const double half = zq * std::sqrt(proxy.value);
  return {point - half, point + half};
}

TailBoundQuery MakeTailBoundQuery(const FrequencyProfile& profile,
                                  const Horizon& h, int arity, double z,
                                  double p_split) {
  const AlphaEstimate a = ratio_alpha(profile);
  TailBoundQuery q;
  q.z = z;
  q.p_split = p_split;
  q.arity = arity;
  q.s_t = static_cast<double>(profile.distinct());
  q.s_t2 = static_cast<double>(s_at_least(profile, 2));
  q.alpha_hat = a.alpha_hat;
  q.s_T_hat = q.s_t * std::pow(1.0 + h.r(), a.alpha_hat);
  const double g = std::tgamma(1.0 - a.alpha_hat);
  q.c_hat = std::isfinite(g) ? q.s_t / (g * std::pow(h.t(), a.alpha_hat)) : 0.0;
  return q;
}

double max_admissible_z(const TailBoundQuery& q, const Horizon& h) {
  const double r = h.r();
  return std::pow(1.0 + r, q.alpha_hat) * (1.0 + 2.0 * std::log1p(r)) * q.s_t /
         q.p_split;
}

double d_of_z(const TailBoundQuery& q, const Horizon& h) {
  ValidateQuery(q, h);
  return DOfZUnchecked(q, h.r());
}

double far_future_tail(const TailBoundQuery& q, const Horizon& h) {
  ValidateQuery(q, h);
  return TailUnchecked(q, h);
}

Interval conservative_interval(const FrequencyProfile& profile,
                               const Horizon& h, int arity, double level,
                               double p_split) {
  if (!(level >= 0.0 && level < 1.0)) ThrowInvalid("level must lie in [0, 1)");
  if (profile.distinct() <= 0) ThrowData("conservative interval needs S_t > 0");
  const double point = power_law_induced(profile, h, ratio_alpha(profile));
  if (level == 0.0) return {point, point};
  TailBoundQuery q = MakeTailBoundQuery(profile, h, arity, 0.0, p_split);
  ValidateQuery(q, h);
  const double target = 1.0 - level;
  double hi = max_admissible_z(q, h) * (1.0 - 1e-12);
  q.z = hi;
  const double at_max = TailUnchecked(q, h);
  if (!(at_max <= target)) {
    ThrowNumeric("bound vacuous at this level: tail bound " +
                 std::to_string(at_max) + " > " + std::to_string(target) +
                 " at the largest admissible z " + std::to_string(hi));
  }
  double lo = 0.0;
  for (int it = 0; it < 200 && hi - lo > 1e-12 * hi; ++it) {
    q.z = 0.5 * (lo + hi);
    if (TailUnchecked(q, h) <= target) {
      hi = q.z;
    } else {
      lo = q.z;
    }
  }
  return {point - hi, point + hi};
}

double trans_eq_d(double x, double y, double z, double c, double k) {
  if (!(c > 1.0)) ThrowInvalid("trans_eq_d requires c > 1");
  if (!(x > 0.0 && y > 0.0 && z > 0.0 && k > 0.0)) {
    ThrowInvalid("trans_eq_d requires x, y, z, k > 0");
  }
  const double cy = std::pow(c, y / x);
  if (!(z * cy / (k * x) < 1.0)) {
    ThrowInvalid("trans_eq_d requires z c^{y/x} < k x");
  }
  return x * x * z * cy / (k * x * x + (x + y) * z * cy * std::log(c));
}

double clt_distant_sigma2(double alpha, double r) {
  if (!(alpha > 0.0 && alpha < 1.0)) ThrowInvalid("alpha must lie in (0, 1)");
  if (!(r > 0.0)) ThrowInvalid("r must be positive");
  const double a = std::pow(1.0 + r, alpha);
  const double two = std::pow(2.0, alpha) - 1.0;
  return std::tgamma(1.0 - alpha) *
         (two * a - 2.0 * a * (std::pow(1.0 + 1.0 / (1.0 + r), alpha) - 1.0) +
          two);
}

double epsilon_hat(const ObservationStream& stream, const Horizon& h) {
  const double r = h.r();
  const PairTable t = BuildPairs(stream);
  double sum = 0.0;
  for (const auto& [key, n] : t.shared) {
    const auto a = static_cast<std::size_t>(key >> 32);
    const auto b = static_cast<std::size_t>(key & 0xffffffffu);
    const std::int64_t sym = t.counts[a] + t.counts[b] - 2 * n;
    sum += 2.0 * (std::pow(r, 2.0 * static_cast<double>(n)) - SignedPow(r, n)) *
           SignedPow(r, sym);
  }
  if (!std::isfinite(sum)) ThrowNumeric("epsilon_hat overflow for this r");
  return sum;
}

CodiscoveryReport codiscovery_diagnostic(const ObservationStream& stream) {
  CodiscoveryReport rep;
  std::vector<char> seen(static_cast<std::size_t>(stream.num_species()), 0);
  for (std::size_t k = 0; k < stream.size(); ++k) {
    std::int64_t fresh = 0;
    for (SpeciesId id : stream.event(k)) {
      auto& s = seen[static_cast<std::size_t>(id)];
      if (!s) {
        s = 1;
        ++fresh;
      }
    }
    rep.codiscovered_pairs += fresh * (fresh - 1);
    rep.discovered_species += fresh;
  }
  if (rep.discovered_species > 0) {
    rep.ratio = static_cast<double>(rep.codiscovered_pairs) /
                static_cast<double>(rep.discovered_species);
  }
  return rep;
}

double perfect_pair_bound(const ObservationStream& stream, const Horizon& h) {
  const PairTable t = BuildPairs(stream);
  std::int64_t once = 0;
  for (const auto& [key, n] : t.shared) {
    if (n == 1) ++once;
  }
  return h.r() * (h.r() + 1.0) * 2.0 * static_cast<double>(once);
}

}  // namespace unseen
