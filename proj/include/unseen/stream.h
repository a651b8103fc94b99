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

// Ordered observation data. Each event is a non-empty set of species ids;
// singleton events are classical samples. Stored as one flat id array with
// event offsets.

#ifndef UNSEEN_STREAM_H_
#define UNSEEN_STREAM_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "unseen/types.h"

namespace unseen {

using SpeciesId = std::int32_t;

class ObservationStream {
 public:
  ObservationStream() = default;
  explicit ObservationStream(std::string label) : label_(std::move(label)) {}

  // Appends one event. Ids are sorted and deduplicated; an empty event is
  // rejected.
  void AddEvent(std::span<const SpeciesId> ids);
  void AddEvent(std::initializer_list<SpeciesId> ids) {
    AddEvent(std::span<const SpeciesId>(ids.begin(), ids.size()));
  }

  // Returns the dense id of a species name, assigning a new one if needed.
  SpeciesId Intern(std::string_view name);

  std::size_t size() const { return offsets_.size() - 1; }
  bool empty() const { return size() == 0; }
  std::span<const SpeciesId> event(std::size_t k) const {
    return {ids_.data() + offsets_[k], offsets_[k + 1] - offsets_[k]};
  }
  // One past the largest id seen in events or interned names.
  SpeciesId num_species() const { return num_species_; }
  std::size_t max_arity() const { return max_arity_; }
  bool classical() const { return max_arity_ <= 1; }

  const std::string& label() const { return label_; }
  void set_label(std::string label) { label_ = std::move(label); }
  const std::vector<std::string>& names() const { return names_; }
  void set_names(std::vector<std::string> names);

  const std::vector<SpeciesId>& flat_ids() const { return ids_; }
  const std::vector<std::size_t>& offsets() const { return offsets_; }

  // Events [begin, end) sharing this stream's names.
  ObservationStream Slice(std::size_t begin, std::size_t end) const;
  // Events in the given order (indices may repeat or be omitted).
  ObservationStream Select(std::span<const std::size_t> order) const;

  friend bool operator==(const ObservationStream& a,
                         const ObservationStream& b) {
    return a.ids_ == b.ids_ && a.offsets_ == b.offsets_ &&
           a.names_ == b.names_ && a.label_ == b.label_;
  }

 private:
  std::string label_;
  std::vector<SpeciesId> ids_;
  std::vector<std::size_t> offsets_{0};
  std::vector<std::string> names_;
  std::unordered_map<std::string, SpeciesId> index_;
  SpeciesId num_species_ = 0;
  std::size_t max_arity_ = 0;
};

// Number of events containing each species, indexed by id.
std::vector<std::int64_t> SpeciesCounts(const ObservationStream& stream);

// Frequency profile; n_events is the number of events.
FrequencyProfile ProfileOf(const ObservationStream& stream);

// Species present in `future` but absent from `past`.
std::int64_t Discoveries(const ObservationStream& past,
                         const ObservationStream& future);

}  // namespace unseen

#endif  // UNSEEN_STREAM_H_
