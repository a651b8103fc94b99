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

// JSON encodings of profiles and weight sequences.
//
//   profile: {"counts": {"1": 2, "2": 1}, "n_events": 4}
//   weights: [H1, H2, ...]

#ifndef UNSEEN_JSON_IO_H_
#define UNSEEN_JSON_IO_H_

#include <string>

#include "json.hpp"
#include "unseen/types.h"

namespace unseen {

nlohmann::ordered_json ProfileToJson(const FrequencyProfile& profile);
FrequencyProfile ProfileFromJson(const nlohmann::json& j);

// Accepts either the full profile object or a bare counts object
// {"1": 2, ...} (the CLI --phi shorthand).
FrequencyProfile ParseProfile(const std::string& text);
std::string SerializeProfile(const FrequencyProfile& profile);

nlohmann::json WeightsToJson(const LinearWeights& weights);
LinearWeights WeightsFromJson(const nlohmann::json& j);

nlohmann::json ReadJsonFile(const std::string& path);
void WriteTextFile(const std::string& path, const std::string& contents);

}  // namespace unseen

#endif  // UNSEEN_JSON_IO_H_
