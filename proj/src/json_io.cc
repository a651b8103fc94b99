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

#include "unseen/json_io.h"

#include <cstdint>
#include <fstream>
#include <sstream>
#include <utility>
#include <vector>

namespace unseen {

using nlohmann::json;
using nlohmann::ordered_json;

ordered_json ProfileToJson(const FrequencyProfile& profile) {
  ordered_json counts = ordered_json::object();
  for (const auto& [mult, count] : profile.counts()) {
    counts[std::to_string(mult)] = count;
  }
  ordered_json j;
  j["counts"] = std::move(counts);
  j["n_events"] = profile.n_events();
  return j;
}

namespace {

std::int64_t ParseMultiplicityKey(const std::string& key) {
  if (key.empty() || key.size() > 18) {
    ThrowData("invalid multiplicity key '" + key + "'");
  }
  for (char c : key) {
    if (c < '0' || c > '9') ThrowData("invalid multiplicity key '" + key + "'");
  }
  return std::stoll(key);
}

FrequencyProfile CountsFromJson(const json& counts,
                                std::optional<std::int64_t> n_events) {
  if (!counts.is_object()) ThrowData("profile counts must be a JSON object");
  std::vector<std::pair<std::int64_t, std::int64_t>> pairs;
  for (const auto& [key, value] : counts.items()) {
    if (!value.is_number_integer()) {
      ThrowData("profile count for '" + key + "' must be an integer");
    }
    pairs.emplace_back(ParseMultiplicityKey(key), value.get<std::int64_t>());
  }
  try {
    return FrequencyProfile::FromCounts(pairs, n_events);
  } catch (const Error& e) {
    ThrowData(e.what());
  }
}

}  // namespace

FrequencyProfile ProfileFromJson(const json& j) {
  if (j.is_object() && j.contains("counts")) {
    std::optional<std::int64_t> n_events;
    if (j.contains("n_events")) {
      if (!j["n_events"].is_number_integer()) {
        ThrowData("n_events must be an integer");
      }
      n_events = j["n_events"].get<std::int64_t>();
    }
    return CountsFromJson(j["counts"], n_events);
  }
  return CountsFromJson(j, std::nullopt);
}

FrequencyProfile ParseProfile(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    ThrowData(std::string("malformed profile JSON: ") + e.what());
  }
  return ProfileFromJson(j);
}

std::string SerializeProfile(const FrequencyProfile& profile) {
  return ProfileToJson(profile).dump();
}

json WeightsToJson(const LinearWeights& weights) {
  json arr = json::array();
  for (double h : weights.coeffs()) arr.push_back(h);
  return arr;
}

LinearWeights WeightsFromJson(const json& j) {
  const json* arr = &j;
  if (j.is_object() && j.contains("weights")) arr = &j["weights"];
  if (!arr->is_array() || arr->empty()) {
    ThrowData("weights must be a non-empty JSON array [H1, H2, ...]");
  }
  std::vector<double> coeffs;
  for (const auto& v : *arr) {
    if (!v.is_number()) ThrowData("weights must be numbers");
    coeffs.push_back(v.get<double>());
  }
  try {
    return LinearWeights(std::move(coeffs));
  } catch (const Error& e) {
    ThrowData(e.what());
  }
}

json ReadJsonFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) ThrowData("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    ThrowData("malformed JSON in " + path + ": " + e.what());
  }
}

void WriteTextFile(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) ThrowData("cannot write " + path);
  out << contents;
  if (!out) ThrowData("write failed for " + path);
}

}  // namespace unseen
