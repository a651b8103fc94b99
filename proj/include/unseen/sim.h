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

// Poissonized Monte-Carlo simulation of classical and incidence sampling,
// closed-form expectations used as oracles, and the checks built on them.
//
// Every set C of the model carries an intensity mu(C). Over a window of
// length t it is observed Poisson(t mu(C)) times; a species' count is the
// number of observed events containing it.

#ifndef UNSEEN_SIM_H_
#define UNSEEN_SIM_H_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "unseen/predict.h"
#include "unseen/stream.h"
#include "unseen/types.h"

namespace unseen {

class SpeciesModel {
 public:
  struct Set {
    std::vector<SpeciesId> members;
    double intensity = 0.0;
  };

  // One singleton set per species; weights need not sum to one.
  static SpeciesModel Classical(std::span<const double> weights);
  // Members are deduplicated; empty sets and negative or non-finite
  // intensities are rejected.
  static SpeciesModel Incidence(std::vector<Set> sets);

  const std::vector<Set>& sets() const { return sets_; }
  SpeciesId num_species() const { return num_species_; }
  int arity_bound() const { return arity_; }
  bool classical() const { return arity_ <= 1; }
  double total_intensity() const { return total_; }

  // M_s: summed intensity of the sets containing s.
  std::vector<double> SpeciesMass() const;

 private:
  std::vector<Set> sets_;
  SpeciesId num_species_ = 0;
  int arity_ = 0;
  double total_ = 0.0;
};

// k species of intensity total/k each.
SpeciesModel UniformModel(int k, double total = 1.0);

using SparseCounts = std::vector<std::pair<std::int64_t, std::int64_t>>;

struct SimOutcome {
  FrequencyProfile profile_t;
  std::int64_t s_tT_true = 0;
  SparseCounts past_counts;    // (species, N_s), sorted by species
  SparseCounts future_counts;  // (species, N'_s)
  std::uint64_t seed = 0;
  std::optional<ObservationStream> past_stream;
};

class Simulator {
 public:
  explicit Simulator(SpeciesModel model);

  SimOutcome Run(const Horizon& h, std::uint64_t seed,
                 bool keep_stream = false) const;
  const SpeciesModel& model() const { return model_; }

 private:
  SpeciesModel model_;
  std::vector<double> alias_prob_;
  std::vector<std::uint32_t> alias_index_;
};

SimOutcome simulate(const SpeciesModel& model, const Horizon& h,
                    std::uint64_t seed);

// Infinite power-law model M_s = (s/c)^{-1/alpha}, s = 1, 2, ..., so that
// nu(x) = #{s : M_s > x} = floor(c x^{-alpha}) up to boundary ties.
struct PowerLawModel {
  double alpha = 0.5;
  double c = 1.0;
};
double PowerLawTotalIntensity(const PowerLawModel& m);
SimOutcome simulate_power_law(const PowerLawModel& m, const Horizon& h,
                              std::uint64_t seed);
// First k species of the power law as a finite classical model.
SpeciesModel TruncatedPowerLaw(const PowerLawModel& m, int k);

struct McEstimate {
  double mean = 0.0;
  double se = 0.0;
  int reps = 0;
};

// Mean of (S_hat - S_{t,T})^2 over replicates. H* weights are fitted once.
McEstimate mc_mse(const SpeciesModel& model, const Horizon& h,
                  const Method& method, int reps, std::uint64_t seed);

// Exact MSE of a linear estimator on a classical model with the given
// species probabilities (Poissonized, window t).
double ClassicalLinearMse(const LinearWeights& weights, const Horizon& h,
                          std::span<const double> masses);

// MSE on the witness family: floor(1/p) species of probability p plus one
// species holding the leftover mass.
double adversarial_mse(const LinearWeights& weights, const Horizon& h,
                       double p);

// Closed forms over model intensities.
double ExpectedSAtLeast(const SpeciesModel& model, double t, std::int64_t i);
double ExpectedPhi(const SpeciesModel& model, double t, std::int64_t i);
double ExpectedNew(const SpeciesModel& model, const Horizon& h);
double DeltaClosedForm(const SpeciesModel& model, const Horizon& h);
double EpsilonClosedForm(const SpeciesModel& model, const Horizon& h);

struct DecompositionReport {
  McEstimate mc;  // GT squared error
  double delta = 0.0;
  double epsilon = 0.0;
  double gap = 0.0;
  double epsilon_bound = 0.0;  // r(r+1)(B-1) E[S_t]
  bool within_3se = false;
  bool epsilon_bounded = false;
};
DecompositionReport error_decomposition_check(const SpeciesModel& model,
                                              const Horizon& h, int reps,
                                              std::uint64_t seed);

struct ConcentrationRow {
  double z = 0.0;
  double emp_lower = 0.0;  // P(S - ES <= -z)
  double emp_upper = 0.0;  // P(S - ES >= z)
  double bound_lower = 1.0;
  double bound_upper = 1.0;
  double emp_phi = 0.0;  // P(|phi_i - E phi_i| > z)
  double bound_phi = 1.0;
  bool pass = true;
};
struct ConcentrationReport {
  std::int64_t i = 1;
  int arity = 1;
  int reps = 0;
  double mean_s = 0.0;
  double mean_phi = 0.0;
  std::vector<ConcentrationRow> rows;
  bool pass = true;
};
// Empty z_grid: nine points from 0 to 4 sqrt(E S^{(i)}).
ConcentrationReport concentration_check(const SpeciesModel& model,
                                        const Horizon& h, std::int64_t i,
                                        int reps, std::uint64_t seed,
                                        std::span<const double> z_grid = {});

struct LaplaceRow {
  std::string identity;
  double lhs = 0.0;  // Poisson expectation in closed form
  double rhs = 0.0;  // Laplace transform of nu by quadrature
  double relerr = 0.0;  // |lhs - rhs| / max(|lhs|, largest rhs term)
};
std::array<LaplaceRow, 3> laplace_identity_check(std::span<const double> masses,
                                                 double t);

struct AlphaRateRow {
  double t = 0.0;
  double median = 0.0;
  double q95 = 0.0;
  int reps_used = 0;
  int reps_empty = 0;  // S_t = 0, alpha_hat undefined
};
struct AlphaRateReport {
  double alpha = 0.0;
  double c = 0.0;
  std::vector<AlphaRateRow> rows;
  double threshold = 0.0;  // pooled 95th percentile
  double trend_z = 0.0;
  double p_value = 1.0;
  bool pass = false;
};
// Scaled errors |alpha_hat - alpha| t^{alpha/2}. Growth across t is tested
// by a one-sided Cochran-Armitage trend test on exceedances of the pooled
// 95th percentile; pass means p >= 0.05.
AlphaRateReport alpha_rate_check(double alpha, double c,
                                 std::span<const double> t_grid, int reps,
                                 std::uint64_t seed);

// One-sided test for an increasing upper tail across ordered groups:
// Cochran-Armitage on exceedances of the pooled q-quantile, ties counted 1/2.
struct UpperTailTrend {
  double threshold = 0.0;
  double z = 0.0;
  double p_value = 1.0;
};
UpperTailTrend upper_tail_trend(const std::vector<std::vector<double>>& groups,
                                double q);

// Sample quantile with linear interpolation (type 7).
double Quantile(std::vector<double> values, double q);

}  // namespace unseen

#endif  // UNSEEN_SIM_H_
