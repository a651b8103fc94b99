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

// Corpus loading and experiment splits.
//
// Tokens: text is NFC-normalized, lowercased, split on Unicode whitespace,
// and stripped of leading and trailing characters that are neither letters
// nor digits. Tokens that become empty are dropped. Each token is one event.
//
// Incidence: one event per line, whitespace-separated ids, duplicates within
// a line removed, blank lines skipped.

#ifndef UNSEEN_INGEST_H_
#define UNSEEN_INGEST_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "unseen/stream.h"
#include "unseen/types.h"

namespace unseen {

std::string NormalizeToken(std::string_view raw);

ObservationStream tokens_from_text(std::string_view text,
                                   std::string label = "tokens");
ObservationStream load_tokens(const std::string& path);

ObservationStream incidence_from_text(std::string_view text,
                                      std::string label = "sets");
ObservationStream load_incidence(const std::string& path);

// Keeps events 0, k, 2k, ...
ObservationStream Subsample(const ObservationStream& stream, int every);

// Keeps only species whose name is an integer location below max_location.
// Events left empty are dropped.
ObservationStream RestrictLocations(const ObservationStream& stream,
                                    std::int64_t max_location);

struct SplitPlan {
  double fraction_seen = 0.5;
  std::optional<std::uint64_t> permutation_seed;  // absent: original order
  int subsample_every = 1;
};

struct SplitResult {
  ObservationStream past;
  ObservationStream future;
  Horizon h;
};

// Subsample, optionally shuffle, then split at floor(fraction * n).
// t is the prefix length and r the suffix-to-prefix ratio.
SplitResult apply_split(const ObservationStream& stream, const SplitPlan& plan);

// Binary layout (little-endian): "USPS1", u64 label length, label bytes,
// u64 name count, (u64 length, bytes) per name, u64 event count, then per
// event a u32 size followed by u32 ids.
void WriteStreamBinary(const ObservationStream& stream, const std::string& path);
ObservationStream ReadStreamBinary(const std::string& path);
std::string EncodeStream(const ObservationStream& stream);
ObservationStream DecodeStream(std::string_view bytes);

}  // namespace unseen

#endif  // UNSEEN_INGEST_H_
