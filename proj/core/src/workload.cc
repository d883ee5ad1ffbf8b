// Copyright 2026 The Policy Engine Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "policy_engine/workload.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "boost/random/beta_distribution.hpp"
#include "policy_engine/accounting.h"
#include "policy_engine/errors.h"
#include "policy_engine/status_macros.h"

namespace policy_engine {
namespace {

using nlohmann::json;

// Separates the schema stream from the request stream of the same seed.
constexpr uint64_t kSchemaStream = 0x5eed5c4e3aULL;

bool IsProbability(double p) { return p >= 0 && p <= 1; }

const char* FamilyName(MechanismType::Family family) {
  return family == MechanismType::Family::kGaussian ? "gaussian" : "pure";
}

double Beta(double a, double b, std::mt19937_64& rng) {
  return boost::random::beta_distribution<double>(a, b)(rng);
}

}  // namespace

const char* ScenarioName(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::kContext:
      return "S1";
    case ScenarioKind::kScope:
      return "S2";
    case ScenarioKind::kTime:
      return "S3";
  }
  return "?";
}

absl::StatusOr<ScenarioKind> ParseScenarioName(const std::string& name) {
  for (ScenarioKind kind :
       {ScenarioKind::kContext, ScenarioKind::kScope, ScenarioKind::kTime}) {
    if (name == ScenarioName(kind)) return kind;
  }
  return ConfigError(absl::StrCat("unknown scenario '", name, "'"));
}

std::vector<MechanismType> DefaultMechanismMix() {
  using F = MechanismType::Family;
  return {
      {"gaussian", F::kGaussian, {0.05, 0.2, 0.75}, 1, 10, false},
      {"laplace", F::kPure, {0.01, 0.1, 0.25}, 1, 10, false},
      {"svt", F::kPure, {0.01, 0.1, 0.25}, 1, 0.5, false},
      {"randomized_response", F::kPure, {0.01, 0.1, 0.25}, 1, 0.5, false},
      {"dp_sgd", F::kGaussian, {0.05, 0.2, 0.75}, 2, 2, true},
      {"pate", F::kGaussian, {0.05, 0.2, 0.75}, 2, 2, true},
  };
}

absl::Status WorkloadConfig::Validate() const {
  if (rounds < 1 || unlock_rounds < 1 || pa_domain_size < 1 ||
      pa_range_unit < 1 || num_attributes < 1 || num_categories < 1 ||
      rounds_per_month < 1 || month_radius < 0) {
    return ConfigError("counts must be positive");
  }
  if (!(requests_per_round > 0)) {
    return ConfigError("requests_per_round must be positive");
  }
  for (double p : {attribute_continuation, category_continuation, blackbox_rate,
                   time_fraction, current_month_prob}) {
    if (!IsProbability(p)) {
      return ConfigError("probabilities must lie in [0, 1]");
    }
  }
  if (attribute_continuation >= 1 || category_continuation >= 1) {
    return ConfigError("continuation probabilities must be below 1");
  }
  if (!(delta_request > 0 && delta_request < 1) ||
      !(delta_budget > 0 && delta_budget < 1)) {
    return ConfigError("deltas must lie in (0, 1)");
  }
  if (!(utility_a_a > 0) || !(utility_a_b > 0)) {
    return ConfigError("utility Beta parameters must be positive");
  }
  if (mechanisms.empty()) return ConfigError("mechanism mix is empty");
  for (const MechanismType& m : mechanisms) {
    if (m.epsilons.empty() || !(m.pa_a > 0) || !(m.pa_b > 0)) {
      return ConfigError(absl::StrCat("mechanism ", m.name,
                                      " needs cost levels and Beta params"));
    }
    for (double eps : m.epsilons) {
      if (!(eps > 0)) {
        return ConfigError(absl::StrCat("mechanism ", m.name,
                                        " has a non-positive cost level"));
      }
    }
  }
  for (double eps : epsilon_totals) {
    if (!(eps > 0)) return ConfigError("epsilon totals must be positive");
  }
  if (epsilon_totals.empty()) return ConfigError("epsilon_totals is empty");
  if (context_knots.empty()) return ConfigError("context_knots is empty");
  for (const auto* budgets :
       {&attribute_risk_budgets, &category_risk_budgets}) {
    for (const char* risk : {"low", "medium", "high"}) {
      auto it = budgets->find(risk);
      if (it == budgets->end() || !(it->second > 0)) {
        return ConfigError(
            absl::StrCat("risk budgets need a positive '", risk, "' entry"));
      }
    }
  }
  if (!(strong_factor > 0) || !(weak_factor > 0) || !(month_budget > 0)) {
    return ConfigError("scenario budgets must be positive");
  }
  return absl::OkStatus();
}

json WorkloadConfig::ToJson() const {
  json mix = json::array();
  for (const MechanismType& m : mechanisms) {
    mix.push_back({{"name", m.name},
                   {"family", FamilyName(m.family)},
                   {"epsilons", m.epsilons},
                   {"pa_beta", {m.pa_a, m.pa_b}},
                   {"ml", m.ml}});
  }
  json knots = json::array();
  for (const auto& [in, out] : context_knots) knots.push_back({in, out});
  return {
      {"scenario", ScenarioName(scenario)},
      {"seed", seed},
      {"rounds", rounds},
      {"requests_per_round", requests_per_round},
      {"unlock_rounds", unlock_rounds},
      {"pa_domain_size", pa_domain_size},
      {"pa_range_unit", pa_range_unit},
      {"delta_request", delta_request},
      {"delta_budget", delta_budget},
      {"utility",
       {{"alpha", utility_alpha},
        {"beta", utility_beta},
        {"a_beta", {utility_a_a, utility_a_b}}}},
      {"mechanisms", mix},
      {"epsilon_totals", epsilon_totals},
      {"schema",
       {{"num_attributes", num_attributes},
        {"attribute_continuation", attribute_continuation},
        {"attribute_zipf", attribute_zipf},
        {"num_categories", num_categories},
        {"category_continuation", category_continuation},
        {"category_zipf", category_zipf}}},
      {"context", {{"blackbox_rate", blackbox_rate}, {"knots", knots}}},
      {"scope",
       {{"attribute_risk_budgets", attribute_risk_budgets},
        {"category_risk_budgets", category_risk_budgets},
        {"strong_factor", strong_factor},
        {"weak_factor", weak_factor}}},
      {"time",
       {{"time_fraction", time_fraction},
        {"current_month_prob", current_month_prob},
        {"month_radius", month_radius},
        {"rounds_per_month", rounds_per_month},
        {"month_budget", month_budget}}},
  };
}

absl::StatusOr<WorkloadConfig> WorkloadConfig::FromJson(const json& j) {
  if (!j.is_object()) return ConfigError("config must be an object");
  WorkloadConfig cfg;
  try {
    if (j.contains("scenario")) {
      ASSIGN_OR_RETURN(cfg.scenario,
                       ParseScenarioName(j["scenario"].get<std::string>()));
    }
    cfg.seed = j.value("seed", cfg.seed);
    cfg.rounds = j.value("rounds", cfg.rounds);
    cfg.requests_per_round =
        j.value("requests_per_round", cfg.requests_per_round);
    cfg.unlock_rounds = j.value("unlock_rounds", cfg.unlock_rounds);
    cfg.pa_domain_size = j.value("pa_domain_size", cfg.pa_domain_size);
    cfg.pa_range_unit = j.value("pa_range_unit", cfg.pa_range_unit);
    cfg.delta_request = j.value("delta_request", cfg.delta_request);
    cfg.delta_budget = j.value("delta_budget", cfg.delta_budget);
    if (j.contains("utility")) {
      const json& u = j["utility"];
      cfg.utility_alpha = u.value("alpha", cfg.utility_alpha);
      cfg.utility_beta = u.value("beta", cfg.utility_beta);
      if (u.contains("a_beta")) {
        cfg.utility_a_a = u["a_beta"].at(0).get<double>();
        cfg.utility_a_b = u["a_beta"].at(1).get<double>();
      }
    }
    if (j.contains("mechanisms")) {
      cfg.mechanisms.clear();
      for (const json& m : j["mechanisms"]) {
        MechanismType type;
        type.name = m.at("name").get<std::string>();
        const std::string family = m.value("family", "gaussian");
        if (family == "gaussian") {
          type.family = MechanismType::Family::kGaussian;
        } else if (family == "pure") {
          type.family = MechanismType::Family::kPure;
        } else {
          return ConfigError(absl::StrCat("unknown family '", family, "'"));
        }
        type.epsilons = m.at("epsilons").get<std::vector<double>>();
        type.pa_a = m.at("pa_beta").at(0).get<double>();
        type.pa_b = m.at("pa_beta").at(1).get<double>();
        type.ml = m.value("ml", false);
        cfg.mechanisms.push_back(std::move(type));
      }
    }
    cfg.epsilon_totals = j.value("epsilon_totals", cfg.epsilon_totals);
    if (j.contains("schema")) {
      const json& s = j["schema"];
      cfg.num_attributes = s.value("num_attributes", cfg.num_attributes);
      cfg.attribute_continuation =
          s.value("attribute_continuation", cfg.attribute_continuation);
      cfg.attribute_zipf = s.value("attribute_zipf", cfg.attribute_zipf);
      cfg.num_categories = s.value("num_categories", cfg.num_categories);
      cfg.category_continuation =
          s.value("category_continuation", cfg.category_continuation);
      cfg.category_zipf = s.value("category_zipf", cfg.category_zipf);
    }
    if (j.contains("context")) {
      const json& c = j["context"];
      cfg.blackbox_rate = c.value("blackbox_rate", cfg.blackbox_rate);
      if (c.contains("knots")) {
        cfg.context_knots.clear();
        for (const json& k : c["knots"]) {
          cfg.context_knots.emplace_back(k.at(0).get<double>(),
                                         k.at(1).get<double>());
        }
      }
    }
    if (j.contains("scope")) {
      const json& s = j["scope"];
      cfg.attribute_risk_budgets =
          s.value("attribute_risk_budgets", cfg.attribute_risk_budgets);
      cfg.category_risk_budgets =
          s.value("category_risk_budgets", cfg.category_risk_budgets);
      cfg.strong_factor = s.value("strong_factor", cfg.strong_factor);
      cfg.weak_factor = s.value("weak_factor", cfg.weak_factor);
    }
    if (j.contains("time")) {
      const json& t = j["time"];
      cfg.time_fraction = t.value("time_fraction", cfg.time_fraction);
      cfg.current_month_prob =
          t.value("current_month_prob", cfg.current_month_prob);
      cfg.month_radius = t.value("month_radius", cfg.month_radius);
      cfg.rounds_per_month = t.value("rounds_per_month", cfg.rounds_per_month);
      cfg.month_budget = t.value("month_budget", cfg.month_budget);
    }
  } catch (const json::exception& e) {
    return ConfigError(e.what());
  }
  RETURN_IF_ERROR(cfg.Validate());
  return cfg;
}

WorkloadConfig WorkloadConfig::Desk(ScenarioKind scenario) {
  WorkloadConfig cfg;
  cfg.scenario = scenario;
  return cfg;
}

WorkloadConfig WorkloadConfig::Full(ScenarioKind scenario) {
  WorkloadConfig cfg;
  cfg.scenario = scenario;
  cfg.rounds = 20;
  cfg.requests_per_round = 504;
  cfg.unlock_rounds = 12;
  cfg.pa_domain_size = 204800;
  return cfg;
}

std::vector<double> ZipfWeights(int n, double s) {
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) w[i] = 1.0 / std::pow(i + 1.0, s);
  return w;
}

std::vector<int> SampleDistinct(const std::vector<double>& weights, int count,
                                std::mt19937_64& rng) {
  std::vector<double> remaining = weights;
  std::vector<int> out;
  count = std::min<int>(count, static_cast<int>(weights.size()));
  for (int i = 0; i < count; ++i) {
    std::discrete_distribution<int> pick(remaining.begin(), remaining.end());
    const int chosen = pick(rng);
    out.push_back(chosen);
    remaining[chosen] = 0;
  }
  return out;
}

int SampleSetSize(double continuation, std::mt19937_64& rng) {
  std::geometric_distribution<int> failures(1.0 - continuation);
  return 2 + failures(rng);
}

std::vector<int> SampleAttributes(const WorkloadConfig& cfg,
                                  std::mt19937_64& rng) {
  return SampleDistinct(ZipfWeights(cfg.num_attributes, cfg.attribute_zipf),
                        SampleSetSize(cfg.attribute_continuation, rng), rng);
}

std::vector<int> SampleCategories(const WorkloadConfig& cfg,
                                  std::mt19937_64& rng) {
  return SampleDistinct(ZipfWeights(cfg.num_categories, cfg.category_zipf),
                        SampleSetSize(cfg.category_continuation, rng), rng);
}

Schema SampleSchema(const WorkloadConfig& cfg) {
  std::mt19937_64 rng(cfg.seed ^ kSchemaStream);
  Schema schema;
  for (int i = 0; i < cfg.num_attributes; ++i) {
    schema.attributes.push_back(absl::StrFormat("a%03d", i));
    const int r = i % 10;
    schema.attribute_risk.push_back(r == 0   ? "high"
                                    : r == 1 ? "medium"
                                             : "low");
  }
  for (int c = 0; c < cfg.num_categories; ++c) {
    schema.categories.push_back(absl::StrCat("c", c));
    schema.category_risk.push_back(c == 0 ? "high" : c <= 4 ? "medium" : "low");
  }
  std::bernoulli_distribution strong(0.5);
  for (const std::string& attr : schema.attributes) {
    std::vector<int> cats = SampleCategories(cfg, rng);
    auto& levels = schema.membership[attr];
    for (size_t k = 0; k < cats.size(); ++k) {
      MembershipLevel level = MembershipLevel::kMember;
      if (k > 0) {
        level = strong(rng) ? MembershipLevel::kStrong : MembershipLevel::kWeak;
      }
      levels[schema.categories[cats[k]]] = level;
    }
  }
  return schema;
}

int64_t MonthOfRound(const WorkloadConfig& cfg, int round) {
  return cfg.month_radius + (round - 1) / cfg.rounds_per_month;
}

int64_t MonthHorizon(const WorkloadConfig& cfg) {
  return MonthOfRound(cfg, cfg.rounds) + cfg.month_radius + 1;
}

int64_t SampleMonth(const WorkloadConfig& cfg, int64_t now,
                    std::mt19937_64& rng) {
  if (cfg.month_radius == 0 ||
      std::bernoulli_distribution(cfg.current_month_prob)(rng)) {
    return now;
  }
  std::uniform_int_distribution<int> other(0, 2 * cfg.month_radius - 1);
  const int k = other(rng);
  // k in [0, r) -> now - r + k; k in [r, 2r) -> now + 1 + (k - r).
  return k < cfg.month_radius ? now - cfg.month_radius + k
                              : now + 1 + (k - cfg.month_radius);
}

absl::StatusOr<WorkloadGenerator> WorkloadGenerator::Create(
    const WorkloadConfig& cfg, const AlphaOrders& orders) {
  RETURN_IF_ERROR(cfg.Validate());
  std::map<double, double> rho_by_epsilon;
  for (const MechanismType& m : cfg.mechanisms) {
    if (m.family != MechanismType::Family::kGaussian) continue;
    for (double eps : m.epsilons) {
      if (rho_by_epsilon.contains(eps)) continue;
      ASSIGN_OR_RETURN(rho_by_epsilon[eps],
                       CalibrateGaussianRho(eps, cfg.delta_request, orders));
    }
  }
  return WorkloadGenerator(cfg, SampleSchema(cfg), std::move(rho_by_epsilon));
}

WorkloadGenerator::WorkloadGenerator(WorkloadConfig cfg, Schema schema,
                                     std::map<double, double> rho_by_epsilon)
    : cfg_(std::move(cfg)),
      schema_(std::move(schema)),
      rho_by_epsilon_(std::move(rho_by_epsilon)),
      attribute_weights_(ZipfWeights(cfg_.num_attributes, cfg_.attribute_zipf)),
      rng_(cfg_.seed) {}

std::vector<WorkloadRequest> WorkloadGenerator::NextRound(int round) {
  std::poisson_distribution<int> count(cfg_.requests_per_round);
  const int n = count(rng_);
  std::vector<WorkloadRequest> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) out.push_back(Draw(round, i));
  return out;
}

WorkloadRequest WorkloadGenerator::Draw(int round, int index) {
  WorkloadRequest out;
  std::uniform_int_distribution<int> pick_type(
      0, static_cast<int>(cfg_.mechanisms.size()) - 1);
  out.type = pick_type(rng_);
  const MechanismType& type = cfg_.mechanisms[out.type];
  std::uniform_int_distribution<int> pick_level(
      0, static_cast<int>(type.epsilons.size()) - 1);
  out.epsilon = type.epsilons[pick_level(rng_)];

  Mechanism mechanism;
  if (type.family == MechanismType::Family::kGaussian) {
    mechanism.cost_by_unit["user"] =
        ZeroConcentratedDp{rho_by_epsilon_.at(out.epsilon)};
  } else {
    mechanism.cost_by_unit["user"] = PureDp{out.epsilon};
  }

  // ⌊s · unit⌋ granules of domain/unit blocks each; at least one block.
  const double s = Beta(type.pa_a, type.pa_b, rng_);
  const int64_t granules =
      static_cast<int64_t>(std::floor(s * cfg_.pa_range_unit));
  const int64_t length =
      std::clamp<int64_t>(granules * cfg_.pa_domain_size / cfg_.pa_range_unit,
                          1, cfg_.pa_domain_size);
  std::uniform_int_distribution<int64_t> start(0, cfg_.pa_domain_size - 1);
  mechanism.blocks =
      BlockSelection::WrappingRange(start(rng_), length, cfg_.pa_domain_size);
  out.blocks_selected = length;

  const int num_attrs = SampleSetSize(cfg_.attribute_continuation, rng_);
  for (int a : SampleDistinct(attribute_weights_, num_attrs, rng_)) {
    mechanism.labels.Add(kAttributeKey, schema_.attributes[a]).IgnoreError();
  }

  switch (cfg_.scenario) {
    case ScenarioKind::kContext: {
      const bool blackbox =
          type.ml && std::bernoulli_distribution(cfg_.blackbox_rate)(rng_);
      mechanism.labels.Add(kContextKey, blackbox ? "blackbox_ml" : "standard")
          .IgnoreError();
      break;
    }
    case ScenarioKind::kScope:
      break;
    case ScenarioKind::kTime: {
      const bool timed = std::bernoulli_distribution(cfg_.time_fraction)(rng_);
      mechanism.labels.Add("data", timed ? "time" : "static").IgnoreError();
      if (timed) {
        mechanism.time_step =
            SampleMonth(cfg_, MonthOfRound(cfg_, round), rng_);
      }
      break;
    }
  }

  const double a = Beta(cfg_.utility_a_a, cfg_.utility_a_b, rng_);
  const double k = static_cast<double>(length) / cfg_.pa_domain_size;
  out.request.utility = a * std::pow(out.epsilon, cfg_.utility_beta) *
                        std::pow(k, cfg_.utility_alpha);
  out.request.id = absl::StrFormat("r%03d-%04d", round, index);
  out.request.mechanisms.push_back(std::move(mechanism));
  return out;
}

absl::StatusOr<std::vector<std::vector<WorkloadRequest>>> GenerateWorkload(
    const WorkloadConfig& cfg) {
  ASSIGN_OR_RETURN(WorkloadGenerator gen, WorkloadGenerator::Create(cfg));
  std::vector<std::vector<WorkloadRequest>> rounds;
  for (int r = 1; r <= cfg.rounds; ++r) rounds.push_back(gen.NextRound(r));
  return rounds;
}

}  // namespace policy_engine
