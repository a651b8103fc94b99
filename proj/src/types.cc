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

#include "unseen/types.h"

#include <algorithm>
#include <cmath>
#include <string>

namespace unseen {

void ThrowInvalid(const std::string& what) {
  throw Error(ErrorKind::kInvalidArgument, what);
}
void ThrowData(const std::string& what) { throw Error(ErrorKind::kData, what); }
void ThrowNumeric(const std::string& what) {
  throw Error(ErrorKind::kNumericGuard, what);
}

FrequencyProfile FrequencyProfile::FromCounts(
    std::span<const std::pair<std::int64_t, std::int64_t>> pairs,
    std::optional<std::int64_t> n_events) {
  FrequencyProfile p;
  std::map<std::int64_t, bool> seen;
  std::int64_t weighted = 0;
  for (const auto& [mult, count] : pairs) {
    if (mult < 1) {
      ThrowInvalid("multiplicity must be >= 1, got " + std::to_string(mult));
    }
    if (count < 0) {
      ThrowInvalid("negative count " + std::to_string(count) +
                   " for multiplicity " + std::to_string(mult));
    }
    if (!seen.emplace(mult, true).second) {
      ThrowInvalid("duplicate multiplicity key " + std::to_string(mult));
    }
    if (count == 0) continue;
    p.counts_[mult] = count;
    p.distinct_ += count;
    weighted += mult * count;
  }
  if (n_events.has_value() && *n_events < 0) {
    ThrowInvalid("n_events must be non-negative");
  }
  p.n_events_ = n_events.value_or(weighted);
  return p;
}

FrequencyProfile FrequencyProfile::FromSpeciesCounts(
    std::span<const std::int64_t> per_species, std::int64_t n_events) {
  FrequencyProfile p;
  for (std::int64_t n : per_species) {
    if (n < 0) ThrowInvalid("negative species count");
    if (n == 0) continue;
    ++p.counts_[n];
    ++p.distinct_;
  }
  p.n_events_ = n_events;
  return p;
}

std::int64_t FrequencyProfile::phi(std::int64_t i) const {
  auto it = counts_.find(i);
  return it == counts_.end() ? 0 : it->second;
}

std::int64_t FrequencyProfile::max_multiplicity() const {
  return counts_.empty() ? 0 : counts_.rbegin()->first;
}

FrequencyProfile FrequencyProfile::Scaled(std::int64_t k) const {
  if (k < 0) ThrowInvalid("scale factor must be non-negative");
  FrequencyProfile p;
  if (k == 0) return p;
  for (const auto& [mult, count] : counts_) p.counts_[mult] = count * k;
  p.distinct_ = distinct_ * k;
  p.n_events_ = n_events_ * k;
  return p;
}

FrequencyProfile operator+(const FrequencyProfile& a,
                           const FrequencyProfile& b) {
  FrequencyProfile p = a;
  for (const auto& [mult, count] : b.counts_) p.counts_[mult] += count;
  p.distinct_ += b.distinct_;
  p.n_events_ += b.n_events_;
  return p;
}

FrequencyProfile profile_from_counts(
    std::span<const std::pair<std::int64_t, std::int64_t>> pairs) {
  return FrequencyProfile::FromCounts(pairs);
}

std::int64_t s_at_least(const FrequencyProfile& profile, std::int64_t i) {
  if (i < 1) ThrowInvalid("s_at_least requires i >= 1");
  std::int64_t total = 0;
  for (auto it = profile.counts().lower_bound(i); it != profile.counts().end();
       ++it) {
    total += it->second;
  }
  return total;
}

Horizon::Horizon(double t, double r) : t_(t), r_(r) {
  if (!(t > 0.0) || !std::isfinite(t)) {
    ThrowInvalid("horizon requires finite t > 0");
  }
  if (!(r > 0.0) || !std::isfinite(r)) {
    ThrowInvalid("horizon requires finite r > 0");
  }
}

LinearWeights::LinearWeights(std::vector<double> coeffs)
    : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) ThrowInvalid("linear weights need depth >= 1");
  for (double h : coeffs_) {
    if (!std::isfinite(h)) ThrowInvalid("linear weights must be finite");
  }
}

LinearWeights LinearWeights::Zeros(int depth) {
  if (depth < 1) ThrowInvalid("linear weights need depth >= 1");
  return LinearWeights(std::vector<double>(static_cast<std::size_t>(depth)));
}

double LinearWeights::SupNorm() const {
  double m = 0.0;
  for (double h : coeffs_) m = std::max(m, std::abs(h));
  return m;
}

std::string MethodName(MethodKind kind) {
  switch (kind) {
    case MethodKind::kGoodToulmin:
      return "gt";
    case MethodKind::kSmoothedGoodToulmin:
      return "sgt";
    case MethodKind::kLinear:
      return "linear";
    case MethodKind::kHStar:
      return "hstar";
    case MethodKind::kRatioAlpha:
      return "ratio-alpha";
    case MethodKind::kPade:
      return "pade";
    case MethodKind::kNull:
      return "null";
  }
  return "unknown";
}

MethodKind ParseMethodName(const std::string& name) {
  for (MethodKind k :
       {MethodKind::kGoodToulmin, MethodKind::kSmoothedGoodToulmin,
        MethodKind::kLinear, MethodKind::kHStar, MethodKind::kRatioAlpha,
        MethodKind::kPade, MethodKind::kNull}) {
    if (MethodName(k) == name) return k;
  }
  ThrowInvalid("unknown method '" + name +
               "' (expected gt|sgt|linear|hstar|ratio-alpha|pade|null)");
}

}  // namespace unseen
