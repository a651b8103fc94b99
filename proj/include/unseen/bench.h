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

// Prefix-split benchmark: predict the number of distinct species in the
// whole stream from a prefix and score the absolute percentage error.

#ifndef UNSEEN_BENCH_H_
#define UNSEEN_BENCH_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "unseen/ghopt.h"
#include "unseen/stream.h"
#include "unseen/types.h"

namespace unseen {

enum class OrderMode { kTemporal, kPermAverage };

struct BenchRow {
  double fraction_seen = 0.0;
  std::string method;
  // Absent when the method failed on every permutation (a table gap).
  std::optional<double> mape_mean;
  double mape_sem = 0.0;
  int n_perms = 0;   // successful permutations
  int n_failed = 0;  // permutations where the method threw

  friend bool operator==(const BenchRow&, const BenchRow&) = default;
};

struct BenchResult {
  std::string dataset;
  OrderMode order_mode = OrderMode::kTemporal;
  std::vector<BenchRow> rows;
  nlohmann::json metadata = nlohmann::json::object();

  friend bool operator==(const BenchResult&, const BenchResult&) = default;
};

struct BenchOptions {
  std::vector<double> fractions;
  std::vector<MethodKind> methods;
  int n_perms = 1;
  // Absent with n_perms = 1: the stream's own order.
  std::optional<std::uint64_t> seed;
  int subsample_every = 1;
  HStarOptions hstar;
};

// 0.05, 0.10, ..., 0.50.
std::vector<double> DefaultFractions();

BenchResult run_bench(const ObservationStream& stream,
                      const BenchOptions& options);

enum class EmitFormat { kCsv, kJson, kLatex };
EmitFormat ParseEmitFormat(const std::string& name);

std::string EmitCsv(const BenchResult& result);
nlohmann::ordered_json BenchToJson(const BenchResult& result);
BenchResult BenchFromJson(const nlohmann::json& j);
std::string EmitLatex(const BenchResult& result);
void emit(const BenchResult& result, EmitFormat format, const std::string& path);

}  // namespace unseen

#endif  // UNSEEN_BENCH_H_
