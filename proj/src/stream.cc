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

#include "unseen/stream.h"

#include <algorithm>

namespace unseen {

void ObservationStream::AddEvent(std::span<const SpeciesId> ids) {
  if (ids.empty()) ThrowInvalid("events must be non-empty");
  const std::size_t start = ids_.size();
  for (SpeciesId id : ids) {
    if (id < 0) ThrowInvalid("species ids must be non-negative");
    ids_.push_back(id);
  }
  auto first = ids_.begin() + static_cast<std::ptrdiff_t>(start);
  std::sort(first, ids_.end());
  ids_.erase(std::unique(first, ids_.end()), ids_.end());
  offsets_.push_back(ids_.size());
  num_species_ = std::max(num_species_, ids_.back() + 1);
  max_arity_ = std::max(max_arity_, ids_.size() - start);
}

SpeciesId ObservationStream::Intern(std::string_view name) {
  auto [it, inserted] =
      index_.emplace(std::string(name), static_cast<SpeciesId>(names_.size()));
  if (inserted) {
    names_.emplace_back(name);
    num_species_ = std::max(num_species_, it->second + 1);
  }
  return it->second;
}

void ObservationStream::set_names(std::vector<std::string> names) {
  names_ = std::move(names);
  index_.clear();
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (!index_.emplace(names_[i], static_cast<SpeciesId>(i)).second) {
      ThrowData("duplicate species name '" + names_[i] + "'");
    }
  }
  num_species_ = std::max(num_species_, static_cast<SpeciesId>(names_.size()));
}

ObservationStream ObservationStream::Slice(std::size_t begin,
                                           std::size_t end) const {
  if (begin > end || end > size()) ThrowInvalid("slice out of range");
  ObservationStream out(label_);
  out.names_ = names_;
  out.index_ = index_;
  out.num_species_ = static_cast<SpeciesId>(names_.size());
  out.ids_.assign(ids_.begin() + static_cast<std::ptrdiff_t>(offsets_[begin]),
                  ids_.begin() + static_cast<std::ptrdiff_t>(offsets_[end]));
  out.offsets_.clear();
  for (std::size_t k = begin; k <= end; ++k) {
    out.offsets_.push_back(offsets_[k] - offsets_[begin]);
  }
  for (std::size_t k = 0; k < out.size(); ++k) {
    const auto e = out.event(k);
    out.max_arity_ = std::max(out.max_arity_, e.size());
    out.num_species_ = std::max(out.num_species_, e.back() + 1);
  }
  return out;
}

ObservationStream ObservationStream::Select(
    std::span<const std::size_t> order) const {
  ObservationStream out(label_);
  out.names_ = names_;
  out.index_ = index_;
  out.num_species_ = static_cast<SpeciesId>(names_.size());
  for (std::size_t k : order) {
    if (k >= size()) ThrowInvalid("event index out of range");
    out.AddEvent(event(k));
  }
  return out;
}

std::vector<std::int64_t> SpeciesCounts(const ObservationStream& stream) {
  std::vector<std::int64_t> counts(
      static_cast<std::size_t>(stream.num_species()), 0);
  for (SpeciesId id : stream.flat_ids()) ++counts[static_cast<std::size_t>(id)];
  return counts;
}

FrequencyProfile ProfileOf(const ObservationStream& stream) {
  const auto counts = SpeciesCounts(stream);
  return FrequencyProfile::FromSpeciesCounts(
      counts, static_cast<std::int64_t>(stream.size()));
}

std::int64_t Discoveries(const ObservationStream& past,
                         const ObservationStream& future) {
  const auto seen = SpeciesCounts(past);
  std::vector<char> found(static_cast<std::size_t>(future.num_species()), 0);
  std::int64_t n = 0;
  for (SpeciesId id : future.flat_ids()) {
    const auto k = static_cast<std::size_t>(id);
    if (k < seen.size() && seen[k] > 0) continue;
    if (!found[k]) {
      found[k] = 1;
      ++n;
    }
  }
  return n;
}

}  // namespace unseen
