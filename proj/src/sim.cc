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

#include "unseen/sim.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>

#include "boost/math/distributions/normal.hpp"
#include "boost/math/quadrature/gauss_kronrod.hpp"
#include "boost/math/special_functions/gamma.hpp"
#include "boost/math/special_functions/zeta.hpp"
#include "unseen/estimators.h"
#include "unseen/parallel.h"
#include "unseen/rng.h"

namespace unseen {
namespace {

std::int64_t DrawPoisson(Engine& engine, double mean) {
  if (!(mean > 0.0)) return 0;
  std::poisson_distribution<std::int64_t> d(mean);
  return d(engine);
}

double PoissonPmf(std::int64_t i, double lambda) {
  if (lambda <= 0.0) return i == 0 ? 1.0 : 0.0;
  const double di = static_cast<double>(i);
  return std::exp(-lambda + di * std::log(lambda) - std::lgamma(di + 1.0));
}

// Sorted keys to run-length (key, count) pairs.
SparseCounts RunLength(std::vector<std::int64_t>& keys) {
  std::sort(keys.begin(), keys.end());
  SparseCounts out;
  for (std::size_t i = 0; i < keys.size();) {
    std::size_t j = i;
    while (j < keys.size() && keys[j] == keys[i]) ++j;
    out.emplace_back(keys[i], static_cast<std::int64_t>(j - i));
    i = j;
  }
  return out;
}

// Species appearing in `future` but not in `past`; both sorted by key.
std::int64_t CountNew(const SparseCounts& past, const SparseCounts& future) {
  std::int64_t n = 0;
  auto it = past.begin();
  for (const auto& [key, count] : future) {
    while (it != past.end() && it->first < key) ++it;
    if (it == past.end() || it->first != key) ++n;
  }
  return n;
}

FrequencyProfile ProfileFromSparse(const SparseCounts& counts,
                                   std::int64_t n_events) {
  std::vector<std::int64_t> per;
  per.reserve(counts.size());
  for (const auto& kv : counts) per.push_back(kv.second);
  return FrequencyProfile::FromSpeciesCounts(per, n_events);
}

// Devroye's rejection sampler for P(X = k) proportional to k^{-a}, a > 1.
// Returns 0 when X exceeds the 62-bit range.
std::int64_t DrawZipf(Engine& engine, double a) {
  const double b = std::pow(2.0, a - 1.0);
  for (;;) {
    const double u = UniformOpenClosed(engine);
    const double v = UniformOpenClosed(engine);
    const double x = std::floor(std::pow(u, -1.0 / (a - 1.0)));
    if (!(x < 0x1.0p62)) return 0;
    const double t = std::pow(1.0 + 1.0 / x, a - 1.0);
    if (v * x * (t - 1.0) / (b - 1.0) <= t / b) {
      return static_cast<std::int64_t>(x);
    }
  }
}

double ExpectedNewSpecies(double lambda, double r) {
  return std::exp(-lambda) * (-std::expm1(-r * lambda));
}

// First and second moments of H(N) - 1{N = 0, N' > 0} for one species
// with N ~ Poisson(lambda). The cross term vanishes because H(0) = 0.
std::pair<double, double> ErrorMoments(const LinearWeights& weights,
                                       const Horizon& h, double lambda) {
  double m1 = -ExpectedNewSpecies(lambda, h.r());
  double m2 = ExpectedNewSpecies(lambda, h.r());
  for (int i = 1; i <= weights.depth(); ++i) {
    const double pmf = PoissonPmf(i, lambda);
    m1 += weights(i) * pmf;
    m2 += weights(i) * weights(i) * pmf;
  }
  return {m1, m2};
}

}  // namespace

SpeciesModel SpeciesModel::Classical(std::span<const double> weights) {
  std::vector<Set> sets;
  sets.reserve(weights.size());
  for (std::size_t s = 0; s < weights.size(); ++s) {
    sets.push_back({{static_cast<SpeciesId>(s)}, weights[s]});
  }
  return Incidence(std::move(sets));
}

SpeciesModel SpeciesModel::Incidence(std::vector<Set> sets) {
  SpeciesModel m;
  for (Set& c : sets) {
    if (c.members.empty()) ThrowInvalid("model sets must be non-empty");
    if (!(c.intensity >= 0.0) || !std::isfinite(c.intensity)) {
      ThrowInvalid("set intensities must be finite and non-negative");
    }
    std::sort(c.members.begin(), c.members.end());
    c.members.erase(std::unique(c.members.begin(), c.members.end()),
                    c.members.end());
    if (c.members.front() < 0) ThrowInvalid("species ids must be >= 0");
    m.num_species_ = std::max(m.num_species_, c.members.back() + 1);
    m.arity_ = std::max(m.arity_, static_cast<int>(c.members.size()));
    m.total_ += c.intensity;
  }
  m.sets_ = std::move(sets);
  return m;
}

std::vector<double> SpeciesModel::SpeciesMass() const {
  std::vector<double> mass(static_cast<std::size_t>(num_species_), 0.0);
  for (const Set& c : sets_) {
    for (SpeciesId s : c.members) mass[static_cast<std::size_t>(s)] += c.intensity;
  }
  return mass;
}

SpeciesModel UniformModel(int k, double total) {
  if (k < 1) ThrowInvalid("uniform model needs k >= 1");
  std::vector<double> w(static_cast<std::size_t>(k), total / k);
  return SpeciesModel::Classical(w);
}

Simulator::Simulator(SpeciesModel model) : model_(std::move(model)) {
  // Vose alias table over sets, used when few events are expected.
  const auto& sets = model_.sets();
  const std::size_t n = sets.size();
  if (n == 0 || !(model_.total_intensity() > 0.0)) return;
  alias_prob_.assign(n, 0.0);
  alias_index_.assign(n, 0);
  std::vector<double> scaled(n);
  std::vector<std::uint32_t> small, large;
  for (std::size_t i = 0; i < n; ++i) {
    scaled[i] = sets[i].intensity * static_cast<double>(n) /
                model_.total_intensity();
    (scaled[i] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(i));
  }
  while (!small.empty() && !large.empty()) {
    const auto s = small.back();
    small.pop_back();
    const auto l = large.back();
    alias_prob_[s] = scaled[s];
    alias_index_[s] = l;
    scaled[l] -= 1.0 - scaled[s];
    if (scaled[l] < 1.0) {
      large.pop_back();
      small.push_back(l);
    }
  }
  for (auto i : large) alias_prob_[i] = 1.0;
  for (auto i : small) alias_prob_[i] = 1.0;
}

SimOutcome Simulator::Run(const Horizon& h, std::uint64_t seed,
                          bool keep_stream) const {
  Engine engine(seed);
  const auto& sets = model_.sets();
  const double t = h.t();
  const double r = h.r();
  // Set index per event, in draw order.
  std::vector<std::uint32_t> past_events, future_events;
  const double expected = (1.0 + r) * t * model_.total_intensity();
  if (!alias_prob_.empty() &&
      expected < static_cast<double>(sets.size()) / 8.0) {
    const auto n = static_cast<std::uint64_t>(sets.size());
    auto draw = [&] {
      const auto col = UniformBelow(engine, n);
      const double u = UniformOpenClosed(engine);
      return u <= alias_prob_[col] ? static_cast<std::uint32_t>(col)
                                   : alias_index_[col];
    };
    const auto np = DrawPoisson(engine, t * model_.total_intensity());
    for (std::int64_t k = 0; k < np; ++k) past_events.push_back(draw());
    const auto nf = DrawPoisson(engine, r * t * model_.total_intensity());
    for (std::int64_t k = 0; k < nf; ++k) future_events.push_back(draw());
  } else {
    for (std::size_t c = 0; c < sets.size(); ++c) {
      const double mu = sets[c].intensity;
      if (mu <= 0.0) continue;
      const auto np = DrawPoisson(engine, t * mu);
      const auto nf = DrawPoisson(engine, r * t * mu);
      past_events.insert(past_events.end(), static_cast<std::size_t>(np),
                         static_cast<std::uint32_t>(c));
      future_events.insert(future_events.end(), static_cast<std::size_t>(nf),
                           static_cast<std::uint32_t>(c));
    }
  }
  auto expand = [&](const std::vector<std::uint32_t>& events) {
    std::vector<std::int64_t> keys;
    for (auto c : events) {
      for (SpeciesId s : sets[c].members) keys.push_back(s);
    }
    return RunLength(keys);
  };
  SimOutcome out;
  out.seed = seed;
  out.past_counts = expand(past_events);
  out.future_counts = expand(future_events);
  out.s_tT_true = CountNew(out.past_counts, out.future_counts);
  out.profile_t = ProfileFromSparse(
      out.past_counts, static_cast<std::int64_t>(past_events.size()));
  if (keep_stream) {
    ObservationStream stream("sim");
    for (auto c : past_events) stream.AddEvent(sets[c].members);
    out.past_stream = std::move(stream);
  }
  return out;
}

SimOutcome simulate(const SpeciesModel& model, const Horizon& h,
                    std::uint64_t seed) {
  return Simulator(model).Run(h, seed);
}

double PowerLawTotalIntensity(const PowerLawModel& m) {
  if (!(m.alpha > 0.0 && m.alpha < 1.0)) ThrowInvalid("alpha must lie in (0,1)");
  if (!(m.c > 0.0)) ThrowInvalid("c must be positive");
  const double a = 1.0 / m.alpha;
  return std::pow(m.c, a) * boost::math::zeta(a);
}

SimOutcome simulate_power_law(const PowerLawModel& m, const Horizon& h,
                              std::uint64_t seed) {
  const double total = PowerLawTotalIntensity(m);
  const double a = 1.0 / m.alpha;
  Engine engine(seed);
  // Draws beyond the 62-bit range are distinct with probability one; they
  // get fresh negative keys.
  std::int64_t overflow = 0;
  auto draw_keys = [&](double mean) {
    std::vector<std::int64_t> keys(
        static_cast<std::size_t>(DrawPoisson(engine, mean)));
    for (auto& k : keys) {
      k = DrawZipf(engine, a);
      if (k == 0) k = -(++overflow);
    }
    return keys;
  };
  auto past = draw_keys(h.t() * total);
  auto future = draw_keys(h.r() * h.t() * total);
  SimOutcome out;
  out.seed = seed;
  const auto n_past = static_cast<std::int64_t>(past.size());
  out.past_counts = RunLength(past);
  out.future_counts = RunLength(future);
  out.s_tT_true = CountNew(out.past_counts, out.future_counts);
  out.profile_t = ProfileFromSparse(out.past_counts, n_past);
  return out;
}

SpeciesModel TruncatedPowerLaw(const PowerLawModel& m, int k) {
  if (k < 1) ThrowInvalid("truncation needs k >= 1");
  std::vector<double> w(static_cast<std::size_t>(k));
  for (int s = 1; s <= k; ++s) {
    w[static_cast<std::size_t>(s - 1)] = std::pow(s / m.c, -1.0 / m.alpha);
  }
  return SpeciesModel::Classical(w);
}

McEstimate mc_mse(const SpeciesModel& model, const Horizon& h,
                  const Method& method, int reps, std::uint64_t seed) {
  if (reps < 2) ThrowInvalid("mc_mse needs reps >= 2");
  Method m = method;
  if (m.kind == MethodKind::kHStar && !m.weights.has_value()) {
    m.weights = optimize_hstar(h, m.hstar).weights;
  }
  const Simulator sim(model);
  std::vector<double> sq(static_cast<std::size_t>(reps));
  ParallelFor(sq.size(), [&](std::size_t i) {
    const SimOutcome o = sim.Run(h, DeriveSeed(seed, i));
    const double e = predict(o.profile_t, h, m).point -
                     static_cast<double>(o.s_tT_true);
    sq[i] = e * e;
  });
  double sum = 0.0;
  for (double v : sq) sum += v;
  const double mean = sum / reps;
  double ss = 0.0;
  for (double v : sq) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / (reps - 1) / reps), reps};
}

double ClassicalLinearMse(const LinearWeights& weights, const Horizon& h,
                          std::span<const double> masses) {
  double var = 0.0;
  double bias = 0.0;
  for (double p : masses) {
    if (p <= 0.0) continue;
    const auto [m1, m2] = ErrorMoments(weights, h, p * h.t());
    var += m2 - m1 * m1;
    bias += m1;
  }
  return var + bias * bias;
}

double adversarial_mse(const LinearWeights& weights, const Horizon& h,
                       double p) {
  if (!(p > 0.0 && p <= 1.0)) ThrowInvalid("p must lie in (0, 1]");
  const double k = std::floor(1.0 / p);
  const double left = std::max(0.0, 1.0 - k * p);
  const auto [m1, m2] = ErrorMoments(weights, h, p * h.t());
  double var = k * (m2 - m1 * m1);
  double bias = k * m1;
  if (left > 0.0) {
    const auto [l1, l2] = ErrorMoments(weights, h, left * h.t());
    var += l2 - l1 * l1;
    bias += l1;
  }
  return var + bias * bias;
}

double ExpectedSAtLeast(const SpeciesModel& model, double t, std::int64_t i) {
  if (i < 1) ThrowInvalid("i must be >= 1");
  double s = 0.0;
  for (double m : model.SpeciesMass()) {
    if (m > 0.0) s += boost::math::gamma_p(static_cast<double>(i), m * t);
  }
  return s;
}

double ExpectedPhi(const SpeciesModel& model, double t, std::int64_t i) {
  double s = 0.0;
  for (double m : model.SpeciesMass()) s += PoissonPmf(i, m * t);
  return s;
}

double ExpectedNew(const SpeciesModel& model, const Horizon& h) {
  double s = 0.0;
  for (double m : model.SpeciesMass()) s += ExpectedNewSpecies(m * h.t(), h.r());
  return s;
}

double DeltaClosedForm(const SpeciesModel& model, const Horizon& h) {
  const double r = h.r();
  double s = 0.0;
  for (double m : model.SpeciesMass()) {
    const double lambda = m * h.t();
    s += ExpectedNewSpecies(lambda, r) +
         std::exp(-lambda) * std::expm1(r * r * lambda);
  }
  return s;
}

double EpsilonClosedForm(const SpeciesModel& model, const Horizon& h) {
  const double r = h.r();
  const double t = h.t();
  std::map<std::pair<SpeciesId, SpeciesId>, double> shared;
  for (const auto& c : model.sets()) {
    for (std::size_t i = 0; i < c.members.size(); ++i) {
      for (std::size_t j = i + 1; j < c.members.size(); ++j) {
        shared[{c.members[i], c.members[j]}] += c.intensity;
      }
    }
  }
  const auto mass = model.SpeciesMass();
  double s = 0.0;
  for (const auto& [pair, both] : shared) {
    const double uni = mass[static_cast<std::size_t>(pair.first)] +
                       mass[static_cast<std::size_t>(pair.second)] - both;
    s += 2.0 * std::exp(-(1.0 + r) * uni * t) *
         std::expm1(r * (r + 1.0) * both * t);
  }
  return s;
}

DecompositionReport error_decomposition_check(const SpeciesModel& model,
                                              const Horizon& h, int reps,
                                              std::uint64_t seed) {
  DecompositionReport rep;
  rep.mc = mc_mse(model, h, Method::Of(MethodKind::kGoodToulmin), reps, seed);
  rep.delta = DeltaClosedForm(model, h);
  rep.epsilon = EpsilonClosedForm(model, h);
  rep.gap = std::abs(rep.mc.mean - (rep.delta + rep.epsilon));
  rep.within_3se = rep.gap <= 3.0 * rep.mc.se;
  rep.epsilon_bound = h.r() * (h.r() + 1.0) * (model.arity_bound() - 1) *
                      ExpectedSAtLeast(model, h.t(), 1);
  rep.epsilon_bounded = rep.epsilon <= rep.epsilon_bound;
  return rep;
}

ConcentrationReport concentration_check(const SpeciesModel& model,
                                        const Horizon& h, std::int64_t i,
                                        int reps, std::uint64_t seed,
                                        std::span<const double> z_grid) {
  if (i < 1) ThrowInvalid("i must be >= 1");
  if (reps < 1) ThrowInvalid("reps must be >= 1");
  ConcentrationReport rep;
  rep.i = i;
  rep.arity = std::max(1, model.arity_bound());
  rep.reps = reps;
  const double t = h.t();
  const double es = ExpectedSAtLeast(model, t, i);
  const double es_next = ExpectedSAtLeast(model, t, i + 1);
  rep.mean_s = es;
  rep.mean_phi = ExpectedPhi(model, t, i);

  const Simulator sim(model);
  std::vector<double> s_dev(static_cast<std::size_t>(reps));
  std::vector<double> phi_dev(static_cast<std::size_t>(reps));
  ParallelFor(s_dev.size(), [&](std::size_t k) {
    const SimOutcome o = sim.Run(h, DeriveSeed(seed, k));
    s_dev[k] = static_cast<double>(s_at_least(o.profile_t, i)) - es;
    phi_dev[k] = static_cast<double>(o.profile_t.phi(i)) - rep.mean_phi;
  });

  std::vector<double> grid(z_grid.begin(), z_grid.end());
  if (grid.empty()) {
    for (int k = 0; k <= 8; ++k) grid.push_back(0.5 * k * std::sqrt(es));
  }
  const double b = rep.arity;
  const double v = (b - 1.0) * static_cast<double>(i) + 1.0;
  const double w = b * static_cast<double>(i) + b - static_cast<double>(i);
  auto ex = [](double num, double den) {
    if (num <= 0.0) return 1.0;
    if (den <= 0.0) return 0.0;
    return std::exp(-num * num / den);
  };
  auto slack = [reps](double bound) {
    const double p = std::clamp(bound, 0.0, 1.0);
    return 3.0 * std::sqrt(p * (1.0 - p) / reps);
  };
  for (double z : grid) {
    ConcentrationRow row;
    row.z = z;
    int lo = 0, hi = 0, ph = 0;
    for (std::size_t k = 0; k < s_dev.size(); ++k) {
      if (s_dev[k] <= -z) ++lo;
      if (s_dev[k] >= z) ++hi;
      if (std::abs(phi_dev[k]) > z) ++ph;
    }
    row.emp_lower = static_cast<double>(lo) / reps;
    row.emp_upper = static_cast<double>(hi) / reps;
    row.emp_phi = static_cast<double>(ph) / reps;
    row.bound_lower = ex(z, 2.0 * v * es);
    row.bound_upper = ex(z, 2.0 * v * es + 2.0 / 3.0 * v * z);
    row.bound_phi = ex(z, 8.0 * v * es) +
                    ex(z, 8.0 * v * es + 4.0 / 3.0 * v * z) +
                    ex(z, 8.0 * w * es_next) +
                    ex(z, 8.0 * w * es_next + 4.0 / 3.0 * w * z);
    row.pass = row.emp_lower <= row.bound_lower + slack(row.bound_lower) &&
               row.emp_upper <= row.bound_upper + slack(row.bound_upper) &&
               row.emp_phi <= row.bound_phi + slack(row.bound_phi);
    rep.pass = rep.pass && row.pass;
    rep.rows.push_back(row);
  }
  return rep;
}

namespace {

// GK31 on [a, b], bisected until one panel agrees with its two halves.
template <typename F>
double Gk31(F f, double a, double b, int depth = 0) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  const double whole = GK::integrate(f, a, b, 0);
  const double mid = 0.5 * (a + b);
  const double left = GK::integrate(f, a, mid, 0);
  const double right = GK::integrate(f, mid, b, 0);
  if (std::abs(whole - (left + right)) <= 1e-13 * std::abs(left + right) + 1e-300) {
    return left + right;
  }
  if (depth >= 60) ThrowNumeric("Laplace quadrature did not converge");
  return Gk31(f, a, mid, depth + 1) + Gk31(f, mid, b, depth + 1);
}

}  // namespace

std::array<LaplaceRow, 3> laplace_identity_check(std::span<const double> masses,
                                                 double t) {
  if (!(t > 0.0)) ThrowInvalid("t must be positive");
  std::vector<double> m;
  for (double x : masses) {
    if (x < 0.0 || !std::isfinite(x)) ThrowInvalid("masses must be >= 0");
    if (x > 0.0) m.push_back(x);
  }
  std::sort(m.begin(), m.end(), std::greater<>());
  // nu(x) = k on (m[k], m[k-1]] with m[K] := 0.
  double l0 = 0.0;  // int e^{-xt} nu(x) dx
  double l1 = 0.0;  // int x e^{-xt} nu(x) dx
  for (std::size_t k = 1; k <= m.size(); ++k) {
    const double a = k < m.size() ? m[k] : 0.0;
    const double b = m[k - 1];
    if (!(b > a)) continue;
    const double i0 = Gk31([t](double x) { return std::exp(-x * t); }, a, b);
    const double i1 =
        Gk31([t](double x) { return x * std::exp(-x * t); }, a, b);
    l0 += static_cast<double>(k) * i0;
    l1 += static_cast<double>(k) * i1;
  }
  double es = 0.0, es2 = 0.0, ephi = 0.0;
  for (double x : m) {
    const double lambda = x * t;
    es += -std::expm1(-lambda);
    ephi += lambda * std::exp(-lambda);
  }
  es2 = es - ephi;
  // Error relative to the largest term: the phi_1 identity is a difference
  // of two O(E[S_t]) terms and its value can be far below their rounding.
  auto row = [](std::string name, double lhs, double rhs, double terms) {
    const double scale = std::max({std::abs(lhs), terms, 1e-300});
    return LaplaceRow{std::move(name), lhs, rhs, std::abs(lhs - rhs) / scale};
  };
  // L[nu]'(t) = -int x e^{-xt} nu(x) dx.
  return {row("E[S_t] = t L(t)", es, t * l0, 0.0),
          row("E[S_t^(2)] = -t^2 L'(t)", es2, t * t * l1, 0.0),
          row("E[phi_1] = t L(t) + t^2 L'(t)", ephi, t * l0 - t * t * l1,
              std::max(t * l0, t * t * l1))};
}

double Quantile(std::vector<double> values, double q) {
  if (values.empty()) ThrowInvalid("quantile of an empty sample");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

AlphaRateReport alpha_rate_check(double alpha, double c,
                                 std::span<const double> t_grid, int reps,
                                 std::uint64_t seed) {
  if (!(alpha > 0.0 && alpha < 1.0)) ThrowInvalid("alpha must lie in (0,1)");
  if (t_grid.size() < 2) ThrowInvalid("alpha-rate needs at least two t values");
  if (reps < 2) ThrowInvalid("reps must be >= 2");
  AlphaRateReport rep;
  rep.alpha = alpha;
  rep.c = c;
  const PowerLawModel model{alpha, c};
  std::vector<std::vector<double>> groups;
  for (std::size_t g = 0; g < t_grid.size(); ++g) {
    const double t = t_grid[g];
    const Horizon h(t, 1.0);
    std::vector<double> scaled(static_cast<std::size_t>(reps),
                               std::numeric_limits<double>::quiet_NaN());
    ParallelFor(scaled.size(), [&](std::size_t k) {
      const SimOutcome o =
          simulate_power_law(model, h, DeriveSeed(seed, g * 1000003ull + k));
      if (o.profile_t.distinct() == 0) return;
      const double a = ratio_alpha(o.profile_t).alpha_hat;
      scaled[k] = std::abs(a - alpha) * std::pow(t, alpha / 2.0);
    });
    AlphaRateRow row;
    row.t = t;
    std::vector<double> used;
    for (double v : scaled) {
      if (std::isnan(v)) {
        ++row.reps_empty;
      } else {
        used.push_back(v);
      }
    }
    row.reps_used = static_cast<int>(used.size());
    if (used.empty()) ThrowNumeric("no replicate observed any species");
    row.median = Quantile(used, 0.5);
    row.q95 = Quantile(used, 0.95);
    rep.rows.push_back(row);
    groups.push_back(std::move(used));
  }
  const UpperTailTrend trend = upper_tail_trend(groups, 0.95);
  rep.threshold = trend.threshold;
  rep.trend_z = trend.z;
  rep.p_value = trend.p_value;
  rep.pass = rep.p_value >= 0.05;
  return rep;
}

UpperTailTrend upper_tail_trend(const std::vector<std::vector<double>>& groups,
                                double q) {
  if (groups.size() < 2) ThrowInvalid("trend test needs at least two groups");
  std::vector<double> pooled;
  for (const auto& g : groups) {
    if (g.empty()) ThrowInvalid("trend test groups must be non-empty");
    pooled.insert(pooled.end(), g.begin(), g.end());
  }
  UpperTailTrend out;
  out.threshold = Quantile(pooled, q);
  // Cochran-Armitage with scores 0, 1, 2, ... Values tied with the threshold
  // count one half, as with mid-ranks; small t gives heavily tied alpha_hat.
  double n_tot = 0.0, y_tot = 0.0, sx = 0.0, sxx = 0.0;
  std::vector<double> y(groups.size()), n(groups.size());
  for (std::size_t g = 0; g < groups.size(); ++g) {
    n[g] = static_cast<double>(groups[g].size());
    for (double v : groups[g]) {
      y[g] += v > out.threshold ? 1.0 : (v == out.threshold ? 0.5 : 0.0);
    }
    n_tot += n[g];
    y_tot += y[g];
    sx += n[g] * g;
    sxx += n[g] * g * g;
  }
  const double pbar = y_tot / n_tot;
  double stat = 0.0;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    stat += static_cast<double>(g) * (y[g] - n[g] * pbar);
  }
  const double var = pbar * (1.0 - pbar) * (sxx - sx * sx / n_tot);
  out.z = var > 0.0 ? stat / std::sqrt(var) : 0.0;
  const boost::math::normal_distribution<double> normal;
  out.p_value = boost::math::cdf(boost::math::complement(normal, out.z));
  return out;
}

}  // namespace unseen
