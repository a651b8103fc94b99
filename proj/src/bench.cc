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

#include "unseen/bench.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "unseen/estimators.h"
#include "unseen/ingest.h"
#include "unseen/json_io.h"
#include "unseen/parallel.h"
#include "unseen/predict.h"
#include "unseen/rng.h"

namespace unseen {
namespace {

std::string FormatNumber(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

std::string CsvField(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string Shortest(double v) {
  nlohmann::json j = v;
  return j.dump();
}

}  // namespace

std::vector<double> DefaultFractions() {
  std::vector<double> f;
  for (int k = 1; k <= 10; ++k) f.push_back(0.05 * k);
  return f;
}

BenchResult run_bench(const ObservationStream& stream,
                      const BenchOptions& options) {
  if (options.n_perms < 1) ThrowInvalid("n_perms must be >= 1");
  for (double f : options.fractions) {
    if (!(f > 0.0 && f < 1.0)) ThrowInvalid("fractions must lie in (0, 1)");
  }
  const bool permute = options.seed.has_value();
  if (!permute && options.n_perms > 1) {
    ThrowInvalid("several permutations need a seed");
  }
  const ObservationStream base =
      options.subsample_every > 1 ? Subsample(stream, options.subsample_every)
                                  : stream;
  const std::int64_t s_total = ProfileOf(base).distinct();
  if (s_total == 0) ThrowData("stream has no species");

  BenchResult result;
  result.dataset = stream.label();
  result.order_mode = permute ? OrderMode::kPermAverage : OrderMode::kTemporal;
  result.metadata["n_events"] = base.size();
  result.metadata["s_total"] = s_total;
  result.metadata["subsample_every"] = options.subsample_every;
  if (permute) result.metadata["seed"] = *options.seed;

  // Per fraction: methods prepared once (H* fits cached by rounded (r, t)).
  std::map<std::pair<long long, long long>, LinearWeights> hstar_cache;
  std::vector<std::vector<Method>> prepared(options.fractions.size());
  nlohmann::json cells = nlohmann::json::array();
  const std::size_t n = base.size();
  for (std::size_t fi = 0; fi < options.fractions.size(); ++fi) {
    const auto n_past = static_cast<std::size_t>(
        std::floor(options.fractions[fi] * static_cast<double>(n)));
    if (n_past < 1 || n_past >= n) ThrowInvalid("fraction leaves an empty side");
    const double t = static_cast<double>(n_past);
    const Horizon h(t, static_cast<double>(n - n_past) / t);
    nlohmann::json cell = {{"fraction_seen", options.fractions[fi]},
                           {"t", h.t()},
                           {"r", h.r()}};
    for (MethodKind kind : options.methods) {
      Method m = Method::Of(kind);
      if (kind == MethodKind::kLinear) {
        ThrowInvalid("bench does not take custom linear weights");
      }
      if (kind == MethodKind::kSmoothedGoodToulmin) {
        const SgtParams p = DefaultSgtParams(h);
        m.smoothing = DefaultSgtSmoothing(h);
        cell["sgt"] = p.untruncated
                          ? nlohmann::json{{"untruncated", true}}
                          : nlohmann::json{{"k", p.k}, {"q", p.q}};
      }
      if (kind == MethodKind::kHStar) {
        const std::pair<long long, long long> key{std::llround(h.r() * 1e6),
                                                  std::llround(h.t() * 1e6)};
        auto it = hstar_cache.find(key);
        if (it == hstar_cache.end()) {
          const HStarFit fit = optimize_hstar(h, options.hstar);
          it = hstar_cache.emplace(key, fit.weights).first;
          cell["hstar"] = {{"g_h", fit.certificate.evaluation.g_h},
                           {"start", fit.chosen_start},
                           {"depth", options.hstar.depth},
                           {"grid", options.hstar.grid},
                           {"budget", options.hstar.budget}};
        }
        m.weights = it->second;
      }
      prepared[fi].push_back(std::move(m));
    }
    cells.push_back(cell);
  }
  result.metadata["cells"] = cells;

  const std::size_t n_methods = options.methods.size();
  const auto n_perms = static_cast<std::size_t>(options.n_perms);
  // ape[(fi * n_perms + p) * n_methods + mi]; NaN marks a failure.
  std::vector<double> ape(options.fractions.size() * n_perms * n_methods,
                          std::nan(""));
  ParallelFor(options.fractions.size() * n_perms, [&](std::size_t cell) {
    const std::size_t fi = cell / n_perms;
    const std::size_t p = cell % n_perms;
    SplitPlan plan;
    plan.fraction_seen = options.fractions[fi];
    if (permute) plan.permutation_seed = DeriveSeed(*options.seed, p);
    const SplitResult split = apply_split(base, plan);
    const FrequencyProfile profile = ProfileOf(split.past);
    const double s_t = static_cast<double>(profile.distinct());
    for (std::size_t mi = 0; mi < n_methods; ++mi) {
      try {
        const double pred = predict(profile, split.h, prepared[fi][mi]).point;
        ape[cell * n_methods + mi] =
            100.0 * std::abs(s_t + pred - static_cast<double>(s_total)) /
            static_cast<double>(s_total);
      } catch (const Error&) {
      }
    }
  });

  for (std::size_t fi = 0; fi < options.fractions.size(); ++fi) {
    for (std::size_t mi = 0; mi < n_methods; ++mi) {
      BenchRow row;
      row.fraction_seen = options.fractions[fi];
      row.method = MethodName(options.methods[mi]);
      std::vector<double> ok;
      for (std::size_t p = 0; p < n_perms; ++p) {
        const double v = ape[(fi * n_perms + p) * n_methods + mi];
        if (std::isnan(v)) {
          ++row.n_failed;
        } else {
          ok.push_back(v);
        }
      }
      row.n_perms = static_cast<int>(ok.size());
      if (!ok.empty()) {
        double mean = 0.0;
        for (double v : ok) mean += v;
        mean /= static_cast<double>(ok.size());
        double ss = 0.0;
        for (double v : ok) ss += (v - mean) * (v - mean);
        row.mape_mean = mean;
        row.mape_sem = ok.size() > 1
                           ? std::sqrt(ss / static_cast<double>(ok.size() - 1) /
                                       static_cast<double>(ok.size()))
                           : 0.0;
      }
      result.rows.push_back(row);
    }
  }
  return result;
}

EmitFormat ParseEmitFormat(const std::string& name) {
  if (name == "csv") return EmitFormat::kCsv;
  if (name == "json") return EmitFormat::kJson;
  if (name == "latex" || name == "tex") return EmitFormat::kLatex;
  ThrowInvalid("unknown output format '" + name + "' (csv|json|latex)");
}

std::string EmitCsv(const BenchResult& result) {
  std::string out = "fraction_seen,method,mape_mean,mape_sem,n_perms\n";
  for (const auto& row : result.rows) {
    out += Shortest(row.fraction_seen) + "," + CsvField(row.method) + ",";
    if (row.mape_mean.has_value()) {
      out += Shortest(*row.mape_mean) + "," + Shortest(row.mape_sem);
    } else {
      out += ",";
    }
    out += "," + std::to_string(row.n_perms) + "\n";
  }
  return out;
}

nlohmann::ordered_json BenchToJson(const BenchResult& result) {
  nlohmann::ordered_json j;
  j["dataset"] = result.dataset;
  j["order_mode"] =
      result.order_mode == OrderMode::kTemporal ? "temporal" : "perm_average";
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : result.rows) {
    nlohmann::ordered_json r;
    r["fraction_seen"] = row.fraction_seen;
    r["method"] = row.method;
    r["mape_mean"] = row.mape_mean.has_value()
                         ? nlohmann::ordered_json(*row.mape_mean)
                         : nlohmann::ordered_json(nullptr);
    r["mape_sem"] = row.mape_sem;
    r["n_perms"] = row.n_perms;
    r["n_failed"] = row.n_failed;
    j["rows"].push_back(r);
  }
  j["metadata"] = nlohmann::ordered_json::parse(result.metadata.dump());
  return j;
}

BenchResult BenchFromJson(const nlohmann::json& j) {
  try {
    BenchResult result;
    result.dataset = j.at("dataset").get<std::string>();
    const auto mode = j.at("order_mode").get<std::string>();
    if (mode == "temporal") {
      result.order_mode = OrderMode::kTemporal;
    } else if (mode == "perm_average") {
      result.order_mode = OrderMode::kPermAverage;
    } else {
      ThrowData("unknown order_mode '" + mode + "'");
    }
    for (const auto& r : j.at("rows")) {
      BenchRow row;
      row.fraction_seen = r.at("fraction_seen").get<double>();
      row.method = r.at("method").get<std::string>();
      if (!r.at("mape_mean").is_null()) row.mape_mean = r.at("mape_mean").get<double>();
      row.mape_sem = r.at("mape_sem").get<double>();
      row.n_perms = r.at("n_perms").get<int>();
      row.n_failed = r.value("n_failed", 0);
      result.rows.push_back(row);
    }
    if (j.contains("metadata")) result.metadata = j.at("metadata");
    return result;
  } catch (const nlohmann::json::exception& e) {
    ThrowData(std::string("malformed bench JSON: ") + e.what());
  }
}

std::string EmitLatex(const BenchResult& result) {
  std::vector<std::string> methods;
  std::vector<double> fractions;
  std::map<std::pair<double, std::string>, const BenchRow*> cell;
  for (const auto& row : result.rows) {
    if (std::find(methods.begin(), methods.end(), row.method) == methods.end()) {
      methods.push_back(row.method);
    }
    if (std::find(fractions.begin(), fractions.end(), row.fraction_seen) ==
        fractions.end()) {
      fractions.push_back(row.fraction_seen);
    }
    cell[{row.fraction_seen, row.method}] = &row;
  }
  std::ostringstream out;
  out << "\\begin{tabular}{r" << std::string(methods.size(), 'c') << "}\n";
  out << "\\hline\n\\% seen";
  for (const auto& m : methods) out << " & " << m;
  out << " \\\\\n\\hline\n";
  for (double f : fractions) {
    out << FormatNumber(100.0 * f, 0);
    for (const auto& m : methods) {
      auto it = cell.find({f, m});
      if (it == cell.end() || !it->second->mape_mean.has_value()) {
        out << " & --";
      } else {
        out << " & $" << FormatNumber(*it->second->mape_mean, 1) << " \\pm "
            << FormatNumber(it->second->mape_sem, 1) << "$";
      }
    }
    out << " \\\\\n";
  }
  out << "\\hline\n\\end{tabular}\n";
  return out.str();
}

void emit(const BenchResult& result, EmitFormat format, const std::string& path) {
  switch (format) {
    case EmitFormat::kCsv:
      WriteTextFile(path, EmitCsv(result));
      return;
    case EmitFormat::kJson:
      WriteTextFile(path, BenchToJson(result).dump(2) + "\n");
      return;
    case EmitFormat::kLatex:
      WriteTextFile(path, EmitLatex(result));
      return;
  }
}

}  // namespace unseen
