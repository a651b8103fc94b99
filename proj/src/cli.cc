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

#include "unseen/cli.h"

#include <cmath>
#include <fstream>
#include <functional>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "openssl/evp.h"
#include "unseen/bench.h"
#include "unseen/estimators.h"
#include "unseen/ghopt.h"
#include "unseen/ingest.h"
#include "unseen/json_io.h"
#include "unseen/parallel.h"
#include "unseen/predict.h"
#include "unseen/sim.h"
#include "unseen/uncertainty.h"

#ifndef UNSEEN_VERSION
#define UNSEEN_VERSION "0.0.0"
#endif
#ifndef UNSEEN_BUILD_ID
#define UNSEEN_BUILD_ID "unknown"
#endif

namespace unseen {
namespace {

using Json = nlohmann::ordered_json;

// Reads JSON config files: nested objects become subcommand sections.
class JsonConfig : public CLI::Config {
 public:
  std::string to_config(const CLI::App*, bool, bool,
                        std::string) const override {
    return "{}";
  }

  std::vector<CLI::ConfigItem> from_config(std::istream& in) const override {
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw CLI::ConversionError(std::string("bad JSON config: ") + e.what());
    }
    std::vector<CLI::ConfigItem> items;
    Walk(j, {}, &items);
    return items;
  }

 private:
  static std::string Scalar(const nlohmann::json& v) {
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
  }

  static void Walk(const nlohmann::json& j, std::vector<std::string> parents,
                   std::vector<CLI::ConfigItem>* items) {
    if (!j.is_object()) throw CLI::ConversionError("JSON config must be an object");
    for (const auto& [key, value] : j.items()) {
      if (value.is_object()) {
        auto p = parents;
        p.push_back(key);
        Walk(value, p, items);
        continue;
      }
      CLI::ConfigItem item;
      item.parents = parents;
      item.name = key;
      if (value.is_array()) {
        for (const auto& v : value) item.inputs.push_back(Scalar(v));
      } else {
        item.inputs.push_back(Scalar(value));
      }
      items->push_back(std::move(item));
    }
  }
};

std::string ReadAll(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) ThrowData("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool IsBinaryStream(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  char magic[5] = {};
  in.read(magic, 5);
  return in.gcount() == 5 && std::string(magic, 5) == "USPS1";
}

ObservationStream LoadAny(const std::string& path, const std::string& kind) {
  if (IsBinaryStream(path)) return ReadStreamBinary(path);
  if (kind == "tokens") return load_tokens(path);
  if (kind == "sets") return load_incidence(path);
  ThrowInvalid("unknown input kind '" + kind + "' (tokens|sets)");
}

std::vector<std::string> SplitList(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double ParseDouble(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    ThrowInvalid("not a number: '" + s + "'");
  }
  if (used != s.size()) ThrowInvalid("not a number: '" + s + "'");
  return v;
}

// "a..bxN" (N evenly spaced values, inclusive) or a comma list.
std::vector<double> ParseFractions(const std::string& spec) {
  const auto dots = spec.find("..");
  if (dots == std::string::npos) {
    std::vector<double> out;
    for (const auto& s : SplitList(spec)) out.push_back(ParseDouble(s));
    return out;
  }
  const auto x = spec.find('x', dots);
  if (x == std::string::npos) ThrowInvalid("fraction range needs a count: a..bxN");
  const double a = ParseDouble(spec.substr(0, dots));
  const double b = ParseDouble(spec.substr(dots + 2, x - dots - 2));
  const int n = static_cast<int>(ParseDouble(spec.substr(x + 1)));
  if (n < 1) ThrowInvalid("fraction count must be >= 1");
  std::vector<double> out;
  for (int k = 0; k < n; ++k) {
    out.push_back(n == 1 ? a : a + (b - a) * k / (n - 1));
  }
  return out;
}

Json ReportToJson(const PredictionReport& rep, const Horizon& h) {
  Json j;
  j["method"] = MethodName(rep.method);
  j["t"] = h.t();
  j["r"] = h.r();
  j["point"] = rep.point;
  if (rep.variance_proxy.has_value()) j["variance_proxy"] = *rep.variance_proxy;
  if (rep.interval.has_value()) j["interval"] = {rep.interval->lo, rep.interval->hi};
  if (rep.nominal_level.has_value()) j["nominal_level"] = *rep.nominal_level;
  j["variance_clamped"] = rep.variance_clamped;
  j["notes"] = rep.notes;
  return j;
}

Json EvaluationToJson(const GhEvaluation& e) {
  return {{"g_h", e.g_h},         {"y_b", e.y_b},
          {"y_v", e.y_v},         {"p_star", e.p_star},
          {"q_star", e.q_star},   {"grid_size", e.grid_size},
          {"max_species_bias", e.max_species_bias}};
}

Json FitToJson(const HStarFit& fit, const Horizon& h) {
  const GhCertificate& c = fit.certificate;
  Json cert;
  cert["evaluation"] = EvaluationToJson(c.evaluation);
  cert["m_p"] = c.m_p;
  cert["m_q"] = c.m_q;
  cert["tilde_g"] = c.tilde_g;
  cert["uniqueness_ok"] = c.uniqueness_ok;
  cert["bias_bounded_by_one"] = c.bias_bounded_by_one;
  cert["m_p_limit_convention"] = c.m_p_limit_convention;
  cert["m_q_limit_convention"] = c.m_q_limit_convention;
  cert["g_gt"] = fit.g_gt;
  cert["g_sgt"] = fit.g_sgt;
  cert["g_null"] = fit.g_null;
  cert["improvement_guarantee"] = fit.improvement_guarantee;
  cert["chosen_start"] = fit.chosen_start;
  cert["depth"] = fit.options.depth;
  cert["grid"] = fit.options.grid;
  cert["cert_grid"] = fit.options.cert_grid;
  cert["budget"] = fit.options.budget;
  cert["iterations"] = fit.iterations;
  Json j;
  j["horizon"] = {{"t", h.t()}, {"r", h.r()}};
  j["weights"] = Json::parse(WeightsToJson(fit.weights).dump());
  j["certificate"] = cert;
  return j;
}

Json McToJson(const McEstimate& m) {
  return {{"mean", m.mean}, {"se", m.se}, {"reps", m.reps}};
}

SpeciesModel ModelFromJson(const nlohmann::json& j, int truncate) {
  try {
    if (j.contains("classical")) {
      return SpeciesModel::Classical(j.at("classical").get<std::vector<double>>());
    }
    if (j.contains("uniform")) {
      const auto& u = j.at("uniform");
      return UniformModel(u.at("k").get<int>(), u.value("total", 1.0));
    }
    if (j.contains("power_law")) {
      const auto& p = j.at("power_law");
      return TruncatedPowerLaw({p.at("alpha").get<double>(), p.value("c", 1.0)},
                               truncate);
    }
    if (j.contains("sets")) {
      std::vector<SpeciesModel::Set> sets;
      for (const auto& s : j.at("sets")) {
        sets.push_back({s.at("members").get<std::vector<SpeciesId>>(),
                        s.at("intensity").get<double>()});
      }
      return SpeciesModel::Incidence(std::move(sets));
    }
  } catch (const nlohmann::json::exception& e) {
    ThrowData(std::string("malformed model: ") + e.what());
  }
  ThrowData("model needs one of: classical, uniform, power_law, sets");
}

class Manifest {
 public:
  Manifest(std::string subcommand, std::vector<std::string> argv)
      : subcommand_(std::move(subcommand)), argv_(std::move(argv)) {}

  void Input(const std::string& path) { inputs_.push_back(path); }
  Json& options() { return options_; }

  // Writes the output and its manifest `<path>.manifest.json`.
  void WriteOutput(const std::string& path, const std::string& contents) {
    WriteTextFile(path, contents);
    Json m;
    m["tool"] = "unseen";
    m["version"] = UNSEEN_VERSION;
    m["build"] = UNSEEN_BUILD_ID;
    m["subcommand"] = subcommand_;
    m["argv"] = argv_;
    m["threads"] = MaxThreads();
    m["options"] = options_;
    m["inputs"] = Json::array();
    for (const auto& in : inputs_) {
      m["inputs"].push_back({{"path", in}, {"sha256", Sha256File(in)}});
    }
    m["output"] = {{"path", path}, {"sha256", Sha256Hex(contents)}};
    WriteTextFile(path + ".manifest.json", m.dump(2) + "\n");
  }

 private:
  std::string subcommand_;
  std::vector<std::string> argv_;
  std::vector<std::string> inputs_;
  Json options_ = Json::object();
};

void Emit(std::ostream& out, Manifest* manifest, const std::string& path,
          const std::string& contents) {
  if (path.empty()) {
    out << contents;
  } else {
    manifest->WriteOutput(path, contents);
  }
}

int ExitCodeFor(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument:
      return 1;
    case ErrorKind::kData:
      return 2;
    case ErrorKind::kNumericGuard:
      return 3;
  }
  return 2;
}

}  // namespace

std::string VersionString() {
  return std::string("unseen ") + UNSEEN_VERSION + " (build " + UNSEEN_BUILD_ID +
         ")";
}

std::string Sha256Hex(const std::string& bytes) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(),
                                                              EVP_MD_CTX_free);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), digest, &len) != 1) {
    ThrowData("SHA-256 computation failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xf]);
  }
  return out;
}

std::string Sha256File(const std::string& path) { return Sha256Hex(ReadAll(path)); }

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Predict the number of unseen species in a future window.",
               "unseen"};
  app.set_version_flag("--version", VersionString());
  app.require_subcommand(1);
  std::string config_path;
  app.set_config("--config", "", "TOML or JSON configuration file");
  int threads = 0;
  app.add_option("--threads", threads, "Maximum worker threads (0 = all)")
      ->check(CLI::NonNegativeNumber);

  // Pick the config reader from the file extension before parsing.
  for (int i = 1; i + 1 < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--config") config_path = argv[i + 1];
  }
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a.rfind("--config=", 0) == 0) config_path = a.substr(9);
  }
  if (config_path.size() >= 5 &&
      config_path.compare(config_path.size() - 5, 5, ".json") == 0) {
    app.config_formatter(std::make_shared<JsonConfig>());
  }

  std::vector<std::string> args(argv, argv + argc);
  std::function<void()> action;

  // ingest
  struct {
    std::string kind, input, out;
    int subsample = 1;
    std::int64_t max_location = 0;
  } ig;
  auto* ingest = app.add_subcommand("ingest", "Load a corpus into a stream file");
  ingest->add_option("--kind", ig.kind, "tokens | sets")
      ->required()
      ->check(CLI::IsMember({"tokens", "sets"}));
  ingest->add_option("--input", ig.input, "Input text file")->required();
  ingest->add_option("--subsample", ig.subsample, "Keep every k-th event")
      ->check(CLI::PositiveNumber);
  ingest->add_option("--max-location", ig.max_location,
                     "Keep only integer ids below this value (0 = all)");
  ingest->add_option("--out", ig.out, "Output stream file")->required();
  ingest->callback([&] {
    action = [&] {
      Manifest manifest("ingest", args);
      manifest.Input(ig.input);
      manifest.options() = {{"kind", ig.kind},
                            {"subsample", ig.subsample},
                            {"max_location", ig.max_location}};
      ObservationStream s = LoadAny(ig.input, ig.kind);
      if (ig.max_location > 0) s = RestrictLocations(s, ig.max_location);
      if (ig.subsample > 1) s = Subsample(s, ig.subsample);
      manifest.WriteOutput(ig.out, EncodeStream(s));
      out << Json{{"events", s.size()},
                  {"species", ProfileOf(s).distinct()},
                  {"max_arity", s.max_arity()},
                  {"out", ig.out}}
                 .dump()
          << "\n";
    };
  });

  // fit-hstar
  struct {
    double r = 0.0, t = 0.0;
    HStarOptions o;
    std::string out;
  } fh;
  auto* fit = app.add_subcommand("fit-hstar", "Minimize the worst-case MSE bound");
  fit->add_option("--r", fh.r, "Future-to-past ratio")->required();
  fit->add_option("--t", fh.t, "Past duration")->required();
  fit->add_option("--depth", fh.o.depth, "Weight depth")->default_val(40);
  fit->add_option("--grid", fh.o.grid, "Optimization grid size")->default_val(5000);
  fit->add_option("--cert-grid", fh.o.cert_grid,
                  "Certification grid size (0 = 10 x grid)")
      ->default_val(0);
  fit->add_option("--budget", fh.o.budget, "Iterations per start")->default_val(1000);
  fit->add_option("--out", fh.out, "Weights + certificate JSON");
  fit->callback([&] {
    action = [&] {
      if (fh.o.cert_grid == 0) fh.o.cert_grid = 10 * fh.o.grid;
      if (fh.o.depth < 2) ThrowInvalid("fit-hstar needs depth >= 2");
      const Horizon h(fh.t, fh.r);
      Manifest manifest("fit-hstar", args);
      manifest.options() = {{"t", fh.t},
                            {"r", fh.r},
                            {"depth", fh.o.depth},
                            {"grid", fh.o.grid},
                            {"cert_grid", fh.o.cert_grid},
                            {"budget", fh.o.budget}};
      const HStarFit result = optimize_hstar(h, fh.o);
      Json j = FitToJson(result, h);
      j["weights_sha256"] = Sha256Hex(WeightsToJson(result.weights).dump());
      Emit(out, &manifest, fh.out, j.dump(2) + "\n");
    };
  });

  // predict
  struct {
    std::string method, phi, profile, input, kind = "sets", weights, out;
    double r = 0.0;
    std::optional<double> t, alpha, sgt_q;
    std::optional<std::int64_t> sgt_k;
    double level = 0.95, p_split = 0.5;
    int arity = 0;
    bool no_interval = false;
    HStarOptions o;
    int pade_num = 2, pade_den = 3;
  } pr;
  auto* pred = app.add_subcommand("predict", "Predict the number of new species");
  pred->add_option("--method", pr.method,
                   "gt | sgt | linear | hstar | ratio-alpha | pade | null")
      ->required();
  auto* phi_opt = pred->add_option("--phi", pr.phi, "Profile JSON, e.g. {\"1\":2}");
  auto* profile_opt = pred->add_option("--profile", pr.profile, "Profile JSON file");
  auto* input_opt = pred->add_option("--input", pr.input, "Stream or corpus file");
  phi_opt->excludes(profile_opt)->excludes(input_opt);
  profile_opt->excludes(input_opt);
  pred->add_option("--kind", pr.kind, "Corpus kind for --input text files")
      ->check(CLI::IsMember({"tokens", "sets"}));
  pred->add_option("--r", pr.r, "Future-to-past ratio")->required();
  pred->add_option("--t", pr.t, "Past duration (default: number of events)");
  pred->add_option("--weights", pr.weights, "Weights JSON for linear / hstar");
  pred->add_option("--level", pr.level, "Nominal interval level");
  pred->add_flag("--no-interval", pr.no_interval, "Point estimate only");
  pred->add_option("--arity", pr.arity, "Arity bound B for ratio-alpha intervals");
  pred->add_option("--p-split", pr.p_split, "Tail-bound split p");
  pred->add_option("--alpha", pr.alpha, "Fixed alpha for ratio-alpha");
  pred->add_option("--sgt-k", pr.sgt_k, "Binomial smoothing k");
  pred->add_option("--sgt-q", pr.sgt_q, "Binomial smoothing q");
  pred->add_option("--depth", pr.o.depth, "H* depth")->default_val(40);
  pred->add_option("--grid", pr.o.grid, "H* grid")->default_val(5000);
  pred->add_option("--budget", pr.o.budget, "H* budget")->default_val(1000);
  pred->add_option("--pade-num", pr.pade_num, "Pade numerator degree");
  pred->add_option("--pade-den", pr.pade_den, "Pade denominator degree");
  pred->add_option("--out", pr.out, "Report JSON file");
  pred->callback([&] {
    action = [&] {
      Manifest manifest("predict", args);
      FrequencyProfile profile;
      if (!pr.phi.empty()) {
        profile = ParseProfile(pr.phi);
      } else if (!pr.profile.empty()) {
        manifest.Input(pr.profile);
        profile = ProfileFromJson(ReadJsonFile(pr.profile));
      } else if (!pr.input.empty()) {
        manifest.Input(pr.input);
        profile = ProfileOf(LoadAny(pr.input, pr.kind));
      } else {
        ThrowInvalid("predict needs --phi, --profile or --input");
      }
      const double t = pr.t.value_or(static_cast<double>(profile.n_events()));
      const Horizon h(t, pr.r);
      Method m = Method::Of(ParseMethodName(pr.method));
      if (pr.sgt_k.has_value() != pr.sgt_q.has_value()) {
        ThrowInvalid("--sgt-k and --sgt-q go together");
      }
      if (pr.sgt_k.has_value()) {
        m.smoothing = SmoothingDistribution::MakeBinomial(*pr.sgt_k, *pr.sgt_q);
      }
      if (!pr.weights.empty()) {
        manifest.Input(pr.weights);
        m.weights = WeightsFromJson(ReadJsonFile(pr.weights));
      }
      if (m.kind == MethodKind::kHStar && !m.weights.has_value()) {
        pr.o.cert_grid = 10 * pr.o.grid;
      }
      m.hstar = pr.o;
      m.pade = {pr.pade_num, pr.pade_den};
      m.fixed_alpha = pr.alpha;
      PredictOptions po;
      po.with_uncertainty = !pr.no_interval;
      po.level = pr.level;
      po.arity = pr.arity;
      po.p_split = pr.p_split;
      manifest.options() = {{"method", pr.method}, {"t", t},
                            {"r", pr.r},           {"level", pr.level},
                            {"arity", pr.arity},   {"p_split", pr.p_split},
                            {"depth", pr.o.depth}, {"grid", pr.o.grid},
                            {"budget", pr.o.budget}};
      const PredictionReport rep = predict(profile, h, m, po);
      Emit(out, &manifest, pr.out, ReportToJson(rep, h).dump(2) + "\n");
    };
  });

  // simulate
  struct {
    std::string model, check, method = "gt", out, t_grid = "100,1000,10000";
    std::optional<double> t, r;
    int reps = 1000, truncate = 10000;
    std::uint64_t seed = 1;
    std::int64_t i = 1;
  } sm;
  auto* sim = app.add_subcommand("simulate", "Monte-Carlo checks on a model");
  sim->add_option("--model", sm.model, "Model JSON file")->required();
  sim->add_option("--t", sm.t, "Past duration");
  sim->add_option("--r", sm.r, "Future-to-past ratio");
  sim->add_option("--reps", sm.reps, "Replicates")->check(CLI::PositiveNumber);
  sim->add_option("--seed", sm.seed, "Master seed");
  sim->add_option("--check", sm.check, "mse | decomp | conc | laplace | alpha")
      ->check(CLI::IsMember({"mse", "decomp", "conc", "laplace", "alpha"}));
  sim->add_option("--method", sm.method, "Estimator for --check mse");
  sim->add_option("--i", sm.i, "Multiplicity for --check conc");
  sim->add_option("--t-grid", sm.t_grid, "t values for --check alpha");
  sim->add_option("--truncate", sm.truncate, "Species kept from a power law");
  sim->add_option("--out", sm.out, "Report JSON file");
  sim->callback([&] {
    action = [&] {
      Manifest manifest("simulate", args);
      manifest.Input(sm.model);
      manifest.options() = {{"check", sm.check}, {"reps", sm.reps},
                            {"seed", sm.seed},   {"method", sm.method},
                            {"i", sm.i},         {"truncate", sm.truncate}};
      if (sm.t) manifest.options()["t"] = *sm.t;
      if (sm.r) manifest.options()["r"] = *sm.r;
      const nlohmann::json mj = ReadJsonFile(sm.model);
      auto need_h = [&] {
        if (!sm.t || !sm.r) ThrowInvalid("this check needs --t and --r");
        return Horizon(*sm.t, *sm.r);
      };
      Json j;
      j["check"] = sm.check.empty() ? "none" : sm.check;
      if (sm.check == "alpha") {
        if (!mj.contains("power_law")) ThrowData("alpha check needs a power_law model");
        std::vector<double> grid;
        for (const auto& s : SplitList(sm.t_grid)) grid.push_back(ParseDouble(s));
        const auto& p = mj.at("power_law");
        const AlphaRateReport rep =
            alpha_rate_check(p.at("alpha").get<double>(), p.value("c", 1.0), grid,
                             sm.reps, sm.seed);
        j["rows"] = Json::array();
        for (const auto& row : rep.rows) {
          j["rows"].push_back({{"t", row.t},
                               {"median", row.median},
                               {"q95", row.q95},
                               {"reps_used", row.reps_used},
                               {"reps_empty", row.reps_empty}});
        }
        j["threshold"] = rep.threshold;
        j["trend_z"] = rep.trend_z;
        j["p_value"] = rep.p_value;
        j["pass"] = rep.pass;
      } else {
        const SpeciesModel model = ModelFromJson(mj, sm.truncate);
        if (sm.check == "laplace") {
          if (!sm.t) ThrowInvalid("laplace check needs --t");
          const auto mass = model.SpeciesMass();
          j["rows"] = Json::array();
          for (const auto& row : laplace_identity_check(mass, *sm.t)) {
            j["rows"].push_back({{"identity", row.identity},
                                 {"lhs", row.lhs},
                                 {"rhs", row.rhs},
                                 {"relerr", row.relerr}});
          }
        } else if (sm.check == "mse") {
          const Horizon h = need_h();
          Method m = Method::Of(ParseMethodName(sm.method));
          const McEstimate e = mc_mse(model, h, m, sm.reps, sm.seed);
          j["mse"] = McToJson(e);
          j["mse_over_t"] = e.mean / h.t();
        } else if (sm.check == "decomp") {
          const DecompositionReport d =
              error_decomposition_check(model, need_h(), sm.reps, sm.seed);
          j["mc_mse"] = McToJson(d.mc);
          j["delta"] = d.delta;
          j["epsilon"] = d.epsilon;
          j["gap"] = d.gap;
          j["within_3se"] = d.within_3se;
          j["epsilon_bound"] = d.epsilon_bound;
          j["epsilon_bounded"] = d.epsilon_bounded;
        } else if (sm.check == "conc") {
          const ConcentrationReport c =
              concentration_check(model, need_h(), sm.i, sm.reps, sm.seed);
          j["i"] = c.i;
          j["arity"] = c.arity;
          j["mean_s"] = c.mean_s;
          j["mean_phi"] = c.mean_phi;
          j["rows"] = Json::array();
          for (const auto& row : c.rows) {
            j["rows"].push_back({{"z", row.z},
                                 {"emp_lower", row.emp_lower},
                                 {"bound_lower", row.bound_lower},
                                 {"emp_upper", row.emp_upper},
                                 {"bound_upper", row.bound_upper},
                                 {"emp_phi", row.emp_phi},
                                 {"bound_phi", row.bound_phi},
                                 {"pass", row.pass}});
          }
          j["pass"] = c.pass;
        } else {
          const SimOutcome o = simulate(model, need_h(), sm.seed);
          j["profile"] = ProfileToJson(o.profile_t);
          j["s_tT_true"] = o.s_tT_true;
          j["seed"] = o.seed;
        }
      }
      Emit(out, &manifest, sm.out, j.dump(2) + "\n");
    };
  });

  // diagnose
  struct {
    std::string input, kind = "sets", out;
    double r = 0.0;
  } dg;
  auto* diag = app.add_subcommand("diagnose", "Dependence diagnostics for set data");
  diag->add_option("--input", dg.input, "Incidence file or stream file")->required();
  diag->add_option("--r", dg.r, "Future-to-past ratio")->required();
  diag->add_option("--out", dg.out, "Report JSON file");
  diag->callback([&] {
    action = [&] {
      Manifest manifest("diagnose", args);
      manifest.Input(dg.input);
      manifest.options() = {{"r", dg.r}};
      const ObservationStream s = LoadAny(dg.input, dg.kind);
      const Horizon h(static_cast<double>(s.size()), dg.r);
      const CodiscoveryReport cd = codiscovery_diagnostic(s);
      Json j;
      j["events"] = s.size();
      j["max_arity"] = s.max_arity();
      j["t"] = h.t();
      j["r"] = h.r();
      j["epsilon_hat"] = epsilon_hat(s, h);
      j["codiscovery"] = {{"codiscovered_pairs", cd.codiscovered_pairs},
                          {"discovered_species", cd.discovered_species},
                          {"ratio", cd.ratio}};
      j["perfect_pair_bound"] = perfect_pair_bound(s, h);
      Emit(out, &manifest, dg.out, j.dump(2) + "\n");
    };
  });

  // bench
  struct {
    std::string input, kind = "sets", methods = "gt,sgt,hstar,ratio-alpha,pade,null",
                       fracs = "0.05..0.5x10", out, format;
    int perms = 1, subsample = 1;
    std::optional<std::uint64_t> seed;
    HStarOptions o;
  } bn;
  auto* bench = app.add_subcommand("bench", "Prefix-split benchmark tables");
  bench->add_option("--input", bn.input, "Stream or corpus file")->required();
  bench->add_option("--kind", bn.kind, "Corpus kind for text input")
      ->check(CLI::IsMember({"tokens", "sets"}));
  bench->add_option("--methods", bn.methods, "Comma-separated methods");
  bench->add_option("--fracs", bn.fracs, "a..bxN or comma list");
  bench->add_option("--perms", bn.perms, "Permutations")->check(CLI::PositiveNumber);
  bench->add_option("--seed", bn.seed, "Permutation seed (absent: stream order)");
  bench->add_option("--subsample", bn.subsample, "Keep every k-th event")
      ->check(CLI::PositiveNumber);
  bench->add_option("--depth", bn.o.depth, "H* depth")->default_val(40);
  bench->add_option("--grid", bn.o.grid, "H* grid")->default_val(5000);
  bench->add_option("--budget", bn.o.budget, "H* budget")->default_val(1000);
  bench->add_option("--out", bn.out, "Output table");
  bench->add_option("--format", bn.format, "csv | json | latex (default: by extension)");
  bench->callback([&] {
    action = [&] {
      Manifest manifest("bench", args);
      manifest.Input(bn.input);
      bn.o.cert_grid = 10 * bn.o.grid;
      BenchOptions bo;
      bo.fractions = ParseFractions(bn.fracs);
      for (const auto& m : SplitList(bn.methods)) {
        bo.methods.push_back(ParseMethodName(m));
      }
      bo.n_perms = bn.perms;
      bo.seed = bn.seed;
      bo.subsample_every = bn.subsample;
      bo.hstar = bn.o;
      manifest.options() = {{"methods", bn.methods}, {"fractions", bo.fractions},
                            {"perms", bn.perms},     {"subsample", bn.subsample},
                            {"depth", bn.o.depth},   {"grid", bn.o.grid},
                            {"budget", bn.o.budget}};
      if (bn.seed) manifest.options()["seed"] = *bn.seed;
      std::string format = bn.format;
      if (format.empty()) {
        const auto dot = bn.out.rfind('.');
        format = dot == std::string::npos ? "csv" : bn.out.substr(dot + 1);
        if (format != "json" && format != "tex" && format != "latex") format = "csv";
      }
      const EmitFormat ef = ParseEmitFormat(format);
      const BenchResult res = run_bench(LoadAny(bn.input, bn.kind), bo);
      std::string text;
      switch (ef) {
        case EmitFormat::kCsv:
          text = EmitCsv(res);
          break;
        case EmitFormat::kJson:
          text = BenchToJson(res).dump(2) + "\n";
          break;
        case EmitFormat::kLatex:
          text = EmitLatex(res);
          break;
      }
      Emit(out, &manifest, bn.out, text);
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }
  try {
    SetMaxThreads(threads);
    if (action) action();
    return 0;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return ExitCodeFor(e.kind());
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace unseen
