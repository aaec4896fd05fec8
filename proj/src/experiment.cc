// Copyright 2026 The CBwLC Authors.
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

#include "cbwlc/experiment.h"

#include <zlib.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include "json.hpp"

namespace cbwlc {

using nlohmann::json;

namespace {

std::string JoinErrors(const std::vector<std::string>& errors) {
  std::string out = "invalid config";
  for (const std::string& e : errors) out += "\n  " + e;
  return out;
}

// Collects violations while walking the document.
class Reader {
 public:
  std::vector<std::string> errors;

  void Fail(const std::string& path, const std::string& message) {
    errors.push_back(path + ": " + message);
  }

  bool IsObject(const json& j, const std::string& path) {
    if (j.is_object()) return true;
    Fail(path, "expected an object");
    return false;
  }

  void CheckKeys(const json& j, const std::string& path,
                 std::initializer_list<const char*> allowed) {
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (!ok.count(it.key())) Fail(path + "." + it.key(), "unknown field");
    }
  }

  std::optional<double> Number(const json& obj, const std::string& key,
                               const std::string& path, bool required) {
    const std::string p = path + "." + key;
    if (!obj.contains(key)) {
      if (required) Fail(p, "missing required field");
      return std::nullopt;
    }
    const json& v = obj.at(key);
    if (!v.is_number()) {
      Fail(p, "expected a number");
      return std::nullopt;
    }
    const double x = v.get<double>();
    if (!std::isfinite(x)) {
      Fail(p, "must be finite");
      return std::nullopt;
    }
    return x;
  }

  std::optional<long long> Integer(const json& obj, const std::string& key,
                                   const std::string& path, bool required) {
    const std::string p = path + "." + key;
    if (!obj.contains(key)) {
      if (required) Fail(p, "missing required field");
      return std::nullopt;
    }
    const json& v = obj.at(key);
    if (!v.is_number_integer()) {
      Fail(p, "expected an integer");
      return std::nullopt;
    }
    return v.get<long long>();
  }

  std::optional<std::string> String(const json& obj, const std::string& key,
                                    const std::string& path, bool required) {
    const std::string p = path + "." + key;
    if (!obj.contains(key)) {
      if (required) Fail(p, "missing required field");
      return std::nullopt;
    }
    const json& v = obj.at(key);
    if (!v.is_string()) {
      Fail(p, "expected a string");
      return std::nullopt;
    }
    return v.get<std::string>();
  }

  std::optional<bool> Bool(const json& obj, const std::string& key,
                           const std::string& path) {
    if (!obj.contains(key)) return std::nullopt;
    const json& v = obj.at(key);
    if (!v.is_boolean()) {
      Fail(path + "." + key, "expected a boolean");
      return std::nullopt;
    }
    return v.get<bool>();
  }

  std::optional<std::vector<double>> Numbers(const json& v,
                                             const std::string& path) {
    if (!v.is_array()) {
      Fail(path, "expected an array of numbers");
      return std::nullopt;
    }
    std::vector<double> out;
    for (size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number()) {
        Fail(path + "[" + std::to_string(i) + "]", "expected a number");
        return std::nullopt;
      }
      out.push_back(v[i].get<double>());
    }
    return out;
  }

  // A [context][arm] table flattened row-major.
  std::optional<FunctionTable> Table(const json& v, const std::string& path,
                                     int contexts, int arms) {
    if (!v.is_array() || static_cast<int>(v.size()) != contexts) {
      Fail(path, "expected " + std::to_string(contexts) + " rows (contexts)");
      return std::nullopt;
    }
    FunctionTable out;
    for (int x = 0; x < contexts; ++x) {
      const std::string px = path + "[" + std::to_string(x) + "]";
      auto row = Numbers(v[x], px);
      if (!row) return std::nullopt;
      if (static_cast<int>(row->size()) != arms) {
        Fail(px, "expected " + std::to_string(arms) + " entries (arms)");
        return std::nullopt;
      }
      out.insert(out.end(), row->begin(), row->end());
    }
    return out;
  }
};

std::optional<Noise> ParseNoise(Reader& r, const json& v,
                                const std::string& path) {
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s == "deterministic") return Noise{};
    if (s == "bernoulli") return Noise{NoiseKind::kBernoulli, 0.0};
    r.Fail(path, "unknown noise '" + s + "'");
    return std::nullopt;
  }
  if (!r.IsObject(v, path)) return std::nullopt;
  r.CheckKeys(v, path, {"kind", "stddev"});
  auto kind = r.String(v, "kind", path, true);
  if (!kind) return std::nullopt;
  if (*kind != "gaussian") {
    r.Fail(path + ".kind", "object form supports only 'gaussian'");
    return std::nullopt;
  }
  auto sd = r.Number(v, "stddev", path, true);
  if (!sd) return std::nullopt;
  if (*sd < 0.0) {
    r.Fail(path + ".stddev", "must be nonnegative");
    return std::nullopt;
  }
  return Noise{NoiseKind::kGaussian, *sd};
}

std::optional<InstanceSpec> ParseInstance(Reader& r, const json& j,
                                          const std::string& path) {
  if (!r.IsObject(j, path)) return std::nullopt;
  r.CheckKeys(j, path,
              {"horizon", "num_arms", "contexts", "arrival_probs", "resources",
               "null_arm", "segments"});
  const size_t before = r.errors.size();
  InstanceSpec s;
  auto horizon = r.Integer(j, "horizon", path, true);
  auto arms = r.Integer(j, "num_arms", path, true);
  if (horizon) s.horizon = static_cast<int>(*horizon);
  if (arms) s.num_arms = static_cast<int>(*arms);

  if (j.contains("contexts")) {
    const json& c = j.at("contexts");
    if (!c.is_array() || c.empty()) {
      r.Fail(path + ".contexts", "expected a nonempty array of strings");
    } else {
      for (size_t i = 0; i < c.size(); ++i) {
        if (!c[i].is_string()) {
          r.Fail(path + ".contexts[" + std::to_string(i) + "]",
                 "expected a string");
        } else {
          s.context_ids.push_back(c[i].get<std::string>());
        }
      }
    }
  } else {
    s.context_ids = {"x"};
  }
  if (j.contains("arrival_probs")) {
    if (auto p = r.Numbers(j.at("arrival_probs"), path + ".arrival_probs")) {
      s.arrival_probs = *p;
    }
  } else {
    s.arrival_probs.assign(s.context_ids.size(), 1.0 / s.context_ids.size());
  }

  if (!j.contains("resources") || !j.at("resources").is_array() ||
      j.at("resources").empty()) {
    r.Fail(path + ".resources", "expected a nonempty array");
  } else {
    const json& res = j.at("resources");
    for (size_t i = 0; i < res.size(); ++i) {
      const std::string p = path + ".resources[" + std::to_string(i) + "]";
      if (!r.IsObject(res[i], p)) continue;
      r.CheckKeys(res[i], p, {"sign", "budget", "time"});
      int sign = 1;
      if (auto sv = r.String(res[i], "sign", p, false)) {
        if (*sv == "covering") {
          sign = -1;
        } else if (*sv != "packing") {
          r.Fail(p + ".sign", "expected 'packing' or 'covering'");
        }
      }
      auto budget = r.Number(res[i], "budget", p, true);
      const bool time = r.Bool(res[i], "time", p).value_or(false);
      s.constraints.signs.push_back(sign);
      s.constraints.budgets.push_back(budget.value_or(0.0));
      s.constraints.is_time.push_back(time);
    }
  }
  if (auto null_arm = r.Integer(j, "null_arm", path, false)) {
    s.null_arm = static_cast<int>(*null_arm);
  }

  const int contexts = static_cast<int>(s.context_ids.size());
  const int d = s.constraints.num_resources();
  if (!j.contains("segments") || !j.at("segments").is_array() ||
      j.at("segments").empty()) {
    r.Fail(path + ".segments", "expected a nonempty array");
  } else if (r.errors.size() == before) {
    const json& segs = j.at("segments");
    for (size_t k = 0; k < segs.size(); ++k) {
      const std::string p = path + ".segments[" + std::to_string(k) + "]";
      const json& sj = segs[k];
      if (!r.IsObject(sj, p)) continue;
      r.CheckKeys(sj, p, {"start_round", "arrival_probs", "means", "noise"});
      Segment seg;
      seg.start_round =
          static_cast<int>(r.Integer(sj, "start_round", p, k > 0).value_or(1));
      if (sj.contains("arrival_probs")) {
        if (auto a = r.Numbers(sj.at("arrival_probs"), p + ".arrival_probs")) {
          seg.arrival_probs = *a;
        }
      }
      Noise reward_noise;
      Noise cons_noise;
      if (sj.contains("noise")) {
        const json& nj = sj.at("noise");
        if (nj.is_object() && (nj.contains("reward") || nj.contains("consumption"))) {
          r.CheckKeys(nj, p + ".noise", {"reward", "consumption"});
          if (nj.contains("reward")) {
            reward_noise = ParseNoise(r, nj.at("reward"), p + ".noise.reward")
                               .value_or(Noise{});
          }
          if (nj.contains("consumption")) {
            cons_noise =
                ParseNoise(r, nj.at("consumption"), p + ".noise.consumption")
                    .value_or(Noise{});
          }
        } else {
          reward_noise = cons_noise = ParseNoise(r, nj, p + ".noise").value_or(Noise{});
        }
      }
      seg.model = OutcomeModel(contexts, s.num_arms, d);
      if (!sj.contains("means")) {
        r.Fail(p + ".means", "missing required field");
      } else {
        const json& mj = sj.at("means");
        if (!mj.is_array() || static_cast<int>(mj.size()) != contexts) {
          r.Fail(p + ".means",
                 "expected " + std::to_string(contexts) + " entries (contexts)");
        } else {
          for (int x = 0; x < contexts; ++x) {
            const std::string px = p + ".means[" + std::to_string(x) + "]";
            if (!mj[x].is_array() ||
                static_cast<int>(mj[x].size()) != s.num_arms) {
              r.Fail(px, "expected " + std::to_string(s.num_arms) +
                             " entries (arms)");
              continue;
            }
            for (int a = 0; a < s.num_arms; ++a) {
              const std::string pa = px + "[" + std::to_string(a) + "]";
              auto row = r.Numbers(mj[x][a], pa);
              if (!row) continue;
              if (static_cast<int>(row->size()) != d + 1) {
                r.Fail(pa, "expected " + std::to_string(d + 1) +
                               " entries (reward, then one per resource)");
                continue;
              }
              for (int c = 0; c <= d; ++c) {
                seg.model.set_mean(x, a, c, (*row)[c]);
                seg.model.set_noise(x, a, c, c == 0 ? reward_noise : cons_noise);
              }
            }
          }
        }
      }
      s.segments.push_back(std::move(seg));
    }
  }
  if (r.errors.size() != before) return std::nullopt;
  try {
    return NormalizeInstance(s);
  } catch (const InvalidInstance& e) {
    r.Fail(path, e.what());
    return std::nullopt;
  }
}

void ParseSquareCb(Reader& r, const json& j, const std::string& path,
                   const InstanceSpec* instance, const json* raw_instance,
                   SquareCbConfig& out) {
  if (!r.IsObject(j, path)) return;
  r.CheckKeys(j, path, {"class", "gamma", "error_bound", "normalization"});
  out.gamma = r.Number(j, "gamma", path, false);
  out.error_bound = r.Number(j, "error_bound", path, false);
  if (out.gamma && !(*out.gamma > 0.0)) r.Fail(path + ".gamma", "must be positive");
  if (out.error_bound && !(*out.error_bound > 0.0)) {
    r.Fail(path + ".error_bound", "must be positive");
  }
  if (auto n = r.String(j, "normalization", path, false)) {
    if (*n == "closed_form") {
      out.normalization = IgwConfig::Normalization::kClosedForm;
    } else if (*n != "binary_search") {
      r.Fail(path + ".normalization", "expected 'binary_search' or 'closed_form'");
    }
  }
  const std::string cp = path + ".class";
  if (!j.contains("class")) {
    r.Fail(cp, "squarecb requires a declared regression class");
    return;
  }
  const json& cj = j.at("class");
  if (!r.IsObject(cj, cp)) return;
  r.CheckKeys(cj, cp,
              {"kind", "functions", "share_alpha", "features", "ridge", "mode"});
  auto kind = r.String(cj, "kind", cp, true);
  if (!kind) return;
  RegressionClassConfig& rc = out.regression_class;
  if (instance == nullptr) return;  // instance errors already reported
  const int contexts = instance->num_contexts();
  const int arms = instance->num_arms;
  if (*kind == "finite") {
    rc.kind = RegressionClassConfig::Kind::kFinite;
    rc.share_alpha = r.Number(cj, "share_alpha", cp, false).value_or(0.0);
    if (rc.share_alpha < 0.0 || rc.share_alpha >= 1.0) {
      r.Fail(cp + ".share_alpha", "must lie in [0, 1)");
    }
    // Coordinates: reward plus every declared non-time resource, each scaled
    // like the instance to the common budget.
    std::vector<double> scales = {1.0};
    if (raw_instance != nullptr && raw_instance->contains("resources")) {
      for (const json& res : raw_instance->at("resources")) {
        if (!(res.contains("time") && res.at("time").is_boolean() &&
              res.at("time").get<bool>())) {
          scales.push_back(instance->budget() / res.at("budget").get<double>());
        }
      }
    }
    const int coords = static_cast<int>(scales.size());
    const std::string fp = cp + ".functions";
    if (!cj.contains("functions") || !cj.at("functions").is_array() ||
        static_cast<int>(cj.at("functions").size()) != coords) {
      r.Fail(fp, "expected " + std::to_string(coords) +
                     " entries (reward, then one per non-time resource)");
      return;
    }
    for (int c = 0; c < coords; ++c) {
      const std::string pc = fp + "[" + std::to_string(c) + "]";
      const json& list = cj.at("functions")[c];
      if (!list.is_array() || list.empty()) {
        r.Fail(pc, "expected a nonempty list of tables");
        continue;
      }
      std::vector<FunctionTable> tables;
      for (size_t f = 0; f < list.size(); ++f) {
        if (auto t = r.Table(list[f], pc + "[" + std::to_string(f) + "]",
                             contexts, arms)) {
          for (double& v : *t) v *= scales[c];
          tables.push_back(std::move(*t));
        }
      }
      rc.functions.push_back(std::move(tables));
    }
  } else if (*kind == "linear") {
    rc.kind = RegressionClassConfig::Kind::kLinear;
    rc.ridge = r.Number(cj, "ridge", cp, false).value_or(1.0);
    if (!(rc.ridge > 0.0)) r.Fail(cp + ".ridge", "must be positive");
    if (auto m = r.String(cj, "mode", cp, false)) {
      if (*m == "ridge") {
        rc.mode = OnlineLeastSquares::Mode::kRidge;
      } else if (*m != "vaw") {
        r.Fail(cp + ".mode", "expected 'vaw' or 'ridge'");
      }
    }
    if (cj.contains("features")) {
      const std::string fp = cp + ".features";
      const json& fj = cj.at("features");
      if (!fj.is_array() || static_cast<int>(fj.size()) != contexts) {
        r.Fail(fp, "expected " + std::to_string(contexts) + " entries (contexts)");
        return;
      }
      for (int x = 0; x < contexts; ++x) {
        const std::string px = fp + "[" + std::to_string(x) + "]";
        if (!fj[x].is_array() || static_cast<int>(fj[x].size()) != arms) {
          r.Fail(px, "expected " + std::to_string(arms) + " entries (arms)");
          return;
        }
        for (int a = 0; a < arms; ++a) {
          const std::string pa = px + "[" + std::to_string(a) + "]";
          auto v = r.Numbers(fj[x][a], pa);
          if (!v) return;
          if (rc.features.dimension == 0) {
            rc.features.dimension = static_cast<int>(v->size());
          }
          if (v->empty() || static_cast<int>(v->size()) != rc.features.dimension) {
            r.Fail(pa, "feature vectors must share one nonzero dimension");
            return;
          }
          Eigen::VectorXd phi = Eigen::Map<const Eigen::VectorXd>(
              v->data(), static_cast<Eigen::Index>(v->size()));
          if (phi.norm() > 1.0 + 1e-9) {
            r.Fail(pa, "feature norm exceeds 1");
            return;
          }
          rc.features.rows.push_back(std::move(phi));
        }
      }
    } else {
      rc.features = OneHotFeatures(contexts, arms);
    }
  } else {
    r.Fail(cp + ".kind", "expected 'finite' or 'linear'");
  }
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> errors)
    : std::runtime_error(JoinErrors(errors)), errors_(std::move(errors)) {}

ExperimentConfig ParseConfig(const std::string& json_text,
                             const std::string& base_dir) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError({std::string("$: ") + e.what()});
  }
  Reader r;
  if (!r.IsObject(doc, "$")) throw ConfigError(r.errors);
  r.CheckKeys(doc, "$",
              {"instance", "instance_file", "algorithm", "run", "replications",
               "base_seed", "output"});
  ExperimentConfig config;

  // Instance, inline or from a file relative to the config.
  json instance_doc;
  bool have_instance = false;
  if (doc.contains("instance") && doc.contains("instance_file")) {
    r.Fail("$", "give either 'instance' or 'instance_file', not both");
  } else if (doc.contains("instance")) {
    instance_doc = doc.at("instance");
    have_instance = true;
  } else if (doc.contains("instance_file")) {
    if (!doc.at("instance_file").is_string()) {
      r.Fail("$.instance_file", "expected a string");
    } else {
      std::filesystem::path p = doc.at("instance_file").get<std::string>();
      if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
      std::ifstream in(p);
      if (!in) {
        r.Fail("$.instance_file", "cannot read " + p.string());
      } else {
        try {
          instance_doc = json::parse(in);
          have_instance = true;
        } catch (const json::parse_error& e) {
          r.Fail("$.instance_file", e.what());
        }
      }
    }
  } else {
    r.Fail("$.instance", "missing required field");
  }
  std::optional<InstanceSpec> instance;
  if (have_instance) instance = ParseInstance(r, instance_doc, "$.instance");
  if (instance) config.instance = *instance;

  // Algorithm.
  AlgorithmConfig& alg = config.algorithm;
  if (!doc.contains("algorithm")) {
    r.Fail("$.algorithm", "missing required field");
  } else if (r.IsObject(doc.at("algorithm"), "$.algorithm")) {
    const json& aj = doc.at("algorithm");
    r.CheckKeys(aj, "$.algorithm",
                {"primal", "dual", "switches", "delta", "squarecb"});
    if (auto p = r.String(aj, "primal", "$.algorithm", true)) {
      if (*p == "exp3p") {
        alg.primal = PrimalKind::kExp3P;
      } else if (*p == "exp3s") {
        alg.primal = PrimalKind::kExp3S;
      } else if (*p == "squarecb") {
        alg.primal = PrimalKind::kSquareCb;
      } else {
        r.Fail("$.algorithm.primal", "expected 'exp3p', 'exp3s' or 'squarecb'");
      }
    }
    if (auto dual = r.String(aj, "dual", "$.algorithm", false)) {
      if (*dual == "fixed_share") {
        alg.dual = DualKind::kFixedShare;
      } else if (*dual != "hedge") {
        r.Fail("$.algorithm.dual", "expected 'hedge' or 'fixed_share'");
      }
    }
    if (auto s = r.Integer(aj, "switches", "$.algorithm", false)) {
      if (*s < 1) {
        r.Fail("$.algorithm.switches", "must be at least 1");
      } else {
        alg.switches = static_cast<int>(*s);
      }
    }
    alg.delta = r.Number(aj, "delta", "$.algorithm", false).value_or(0.05);
    if (!(alg.delta > 0.0 && alg.delta < 1.0)) {
      r.Fail("$.algorithm.delta", "must lie in (0, 1)");
    }
    const bool needs_switches =
        alg.primal == PrimalKind::kExp3S || alg.dual == DualKind::kFixedShare;
    if (needs_switches && !alg.switches) {
      r.Fail("$.algorithm.switches", "exp3s and fixed_share need a switch count");
    }
    if (alg.primal == PrimalKind::kSquareCb) {
      if (!aj.contains("squarecb")) {
        r.Fail("$.algorithm.squarecb",
               "squarecb requires a declared regression class");
      } else {
        SquareCbConfig sc;
        ParseSquareCb(r, aj.at("squarecb"), "$.algorithm.squarecb",
                      instance ? &*instance : nullptr,
                      have_instance ? &instance_doc : nullptr, sc);
        alg.squarecb = std::move(sc);
      }
    } else {
      if (aj.contains("squarecb")) {
        r.Fail("$.algorithm.squarecb", "only used with primal 'squarecb'");
      }
      if (instance && instance->num_contexts() != 1) {
        r.Fail("$.algorithm.primal",
               "exp3p and exp3s need a single context");
      }
    }
  }

  // Run settings.
  RunConfig& run = config.run;
  bool eta_mode_given = false;
  if (doc.contains("run") && r.IsObject(doc.at("run"), "$.run")) {
    const json& rj = doc.at("run");
    r.CheckKeys(rj, "$.run",
                {"mode", "eta_mode", "zeta", "epsilon", "regret_estimate",
                 "delta", "support_range"});
    if (auto m = r.String(rj, "mode", "$.run", false)) {
      if (*m == "hard_stop") {
        run.mode = RunMode::kHardStop;
      } else if (*m == "zero_violation") {
        run.mode = RunMode::kZeroViolation;
      } else if (*m != "standard") {
        r.Fail("$.run.mode", "expected 'standard', 'hard_stop' or 'zero_violation'");
      }
    }
    if (auto e = r.String(rj, "eta_mode", "$.run", false)) {
      eta_mode_given = true;
      if (*e == "slater") {
        run.eta_mode = EtaMode::kSlater;
      } else if (*e == "general") {
        run.eta_mode = EtaMode::kGeneral;
      } else {
        r.Fail("$.run.eta_mode", "expected 'slater' or 'general'");
      }
    }
    run.zeta = r.Number(rj, "zeta", "$.run", false).value_or(0.0);
    run.epsilon = r.Number(rj, "epsilon", "$.run", false).value_or(0.0);
    run.regret_estimate =
        r.Number(rj, "regret_estimate", "$.run", false).value_or(0.0);
    run.delta = r.Number(rj, "delta", "$.run", false).value_or(0.05);
    run.support_range = r.Bool(rj, "support_range", "$.run").value_or(true);
    if (!(run.delta > 0.0 && run.delta < 1.0)) {
      r.Fail("$.run.delta", "must lie in (0, 1)");
    }
    if (run.mode == RunMode::kStandard) {
      if (run.eta_mode == EtaMode::kSlater && !(run.zeta > 0.0)) {
        r.Fail("$.run.zeta", "slater eta mode needs a positive zeta");
      }
      if (run.eta_mode == EtaMode::kGeneral && !(run.regret_estimate > 0.0)) {
        r.Fail("$.run.regret_estimate",
               "general eta mode needs a positive regret estimate");
      }
    } else if (eta_mode_given) {
      r.Fail("$.run.eta_mode", "only used in standard mode");
    }
    if (run.mode == RunMode::kZeroViolation) {
      if (!(run.zeta > 0.0)) {
        r.Fail("$.run.zeta", "zero_violation needs a positive zeta");
      }
      if (!(run.epsilon > 0.0 && run.epsilon <= 0.5)) {
        r.Fail("$.run.epsilon", "must lie in (0, 1/2]");
      } else if (run.zeta > 0.0 && run.epsilon > run.zeta / 2.0) {
        r.Fail("$.run.epsilon", "zero_violation requires epsilon <= zeta/2");
      }
    }
    if (run.mode == RunMode::kHardStop && instance) {
      if (!instance->null_arm) {
        r.Fail("$.instance.null_arm", "hard_stop mode requires a null arm");
      }
      for (int s : instance->constraints.signs) {
        if (s != 1) {
          r.Fail("$.instance.resources",
                 "hard_stop mode requires packing resources only");
          break;
        }
      }
    }
  } else if (!doc.contains("run")) {
    r.Fail("$.run.zeta", "slater eta mode needs a positive zeta");
  }

  if (auto n = r.Integer(doc, "replications", "$", false)) {
    if (*n < 1) {
      r.Fail("$.replications", "must be at least 1");
    } else {
      config.replications = static_cast<int>(*n);
    }
  }
  if (auto s = r.Integer(doc, "base_seed", "$", false)) {
    if (*s < 0) {
      r.Fail("$.base_seed", "must be nonnegative");
    } else {
      config.base_seed = static_cast<std::uint64_t>(*s);
    }
  }
  if (doc.contains("output") && r.IsObject(doc.at("output"), "$.output")) {
    r.CheckKeys(doc.at("output"), "$.output", {"dir"});
    if (auto d = r.String(doc.at("output"), "dir", "$.output", false)) {
      config.output_dir = *d;
    }
  }

  if (r.errors.empty() && alg.primal == PrimalKind::kSquareCb &&
      alg.squarecb->regression_class.kind ==
          RegressionClassConfig::Kind::kLinear &&
      !alg.squarecb->gamma && !alg.squarecb->error_bound) {
    r.Fail("$.algorithm.squarecb",
           "linear classes need 'gamma' or 'error_bound'");
  }
  if (!r.errors.empty()) throw ConfigError(r.errors);
  // Catch remaining mode/instance mismatches with the runtime checks.
  try {
    PrepareRun(config.instance, config.run);
  } catch (const std::invalid_argument& e) {
    throw ConfigError({std::string("$.run: ") + e.what()});
  }
  config.source_json = doc.dump(2);
  return config;
}

ExperimentConfig LoadConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({path + ": cannot read file"});
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::filesystem::path dir = std::filesystem::path(path).parent_path();
  return ParseConfig(buffer.str(), dir.empty() ? "." : dir.string());
}

double DefaultErrorBound(const ExperimentConfig& config) {
  const auto& sc = config.algorithm.squarecb;
  if (!sc) throw std::invalid_argument("not a squarecb config");
  if (sc->error_bound) return *sc->error_bound;
  if (sc->regression_class.kind != RegressionClassConfig::Kind::kFinite) {
    throw std::invalid_argument("linear classes need an explicit error bound");
  }
  size_t largest = 1;
  for (const auto& tables : sc->regression_class.functions) {
    largest = std::max(largest, tables.size());
  }
  const int coords = config.instance.num_resources() + 1;
  return std::log(static_cast<double>(largest) * coords / config.algorithm.delta);
}

namespace {

// Range of the oracle for outcome coordinate `coord` as the learners see it.
std::pair<double, double> OracleRange(const InstanceSpec& spec,
                                      const AlgorithmView& view, int coord) {
  if (coord == 0) return {0.0, 1.0};
  const int i = coord - 1;
  if (i == view.time_index) return {0.0, 1.0};
  const ConsumptionSupport support = InstanceSupport(spec);
  double lo = support.lo[i] < 0.0 ? -1.0 : 0.0;
  double hi = 1.0;
  if (view.signs[i] < 0) {
    lo -= view.covering_shift;
    hi -= view.covering_shift;
  }
  return {lo, hi};
}

OracleSet MakeOracles(const ExperimentConfig& config, const AlgorithmView& view) {
  const InstanceSpec& spec = config.instance;
  const RegressionClassConfig& rc = config.algorithm.squarecb->regression_class;
  const int contexts = spec.num_contexts();
  const int arms = spec.num_arms;
  OracleSet oracles;
  int next_declared = 0;
  for (int coord = 0; coord <= spec.num_resources(); ++coord) {
    const auto [lo, hi] = OracleRange(spec, view, coord);
    const int i = coord - 1;
    if (rc.kind == RegressionClassConfig::Kind::kLinear) {
      oracles.push_back(std::make_unique<LinearOracle>(
          contexts, arms, lo, hi, rc.features, rc.ridge, rc.mode));
      continue;
    }
    if (coord > 0 && i == view.time_index) {
      oracles.push_back(std::make_unique<FiniteClassOracle>(
          contexts, arms, lo, hi,
          std::vector<FunctionTable>{FunctionTable(
              static_cast<size_t>(contexts) * arms, view.reported_budget / view.horizon)},
          rc.share_alpha));
      continue;
    }
    std::vector<FunctionTable> tables = rc.functions.at(next_declared++);
    if (coord > 0 && view.signs[i] < 0) {
      for (FunctionTable& t : tables) {
        for (double& v : t) v -= view.covering_shift;
      }
    }
    oracles.push_back(std::make_unique<FiniteClassOracle>(
        contexts, arms, lo, hi, std::move(tables), rc.share_alpha));
  }
  return oracles;
}

}  // namespace

std::unique_ptr<PrimalAlgorithm> MakePrimal(const ExperimentConfig& config,
                                            const AlgorithmView& view) {
  const AlgorithmConfig& alg = config.algorithm;
  const InstanceSpec& spec = config.instance;
  switch (alg.primal) {
    case PrimalKind::kExp3P:
      return MakeExp3Primal(view, spec.num_arms, alg.delta, std::nullopt);
    case PrimalKind::kExp3S:
      return MakeExp3Primal(view, spec.num_arms, alg.delta, alg.switches);
    case PrimalKind::kSquareCb:
      break;
  }
  const SquareCbConfig& sc = *alg.squarecb;
  IgwConfig igw;
  igw.normalization = sc.normalization;
  igw.gamma = sc.gamma ? *sc.gamma
                       : SquareCbGamma(view.reported_budget, spec.horizon,
                                       spec.num_arms, spec.num_resources(),
                                       DefaultErrorBound(config));
  return std::make_unique<SquareCbPrimal>(MakeOracles(config, view), view.params,
                                          view.signs, igw);
}

std::unique_ptr<DualAlgorithm> MakeDual(const ExperimentConfig& config,
                                        const AlgorithmView& view) {
  const AlgorithmConfig& alg = config.algorithm;
  return MakeHedgeDual(view, alg.dual == DualKind::kFixedShare
                                 ? alg.switches
                                 : std::optional<int>());
}

int ExperimentResult::failures() const {
  int n = 0;
  for (const ReplicationResult& row : rows) n += row.ok ? 0 : 1;
  return n;
}

std::vector<std::string> RunsCsvHeader(int num_resources) {
  std::vector<std::string> h = {"replication", "seed",   "total_reward",
                                "opt",         "opt_pac", "regret"};
  for (int i = 1; i <= num_resources; ++i) h.push_back("v_" + std::to_string(i));
  for (const char* name : {"reg_out", "reg_pace", "primal_reg", "dual_reg",
                           "nu_measured", "stop_round"}) {
    h.push_back(name);
  }
  return h;
}

std::vector<double> RunsCsvValues(const ReplicationResult& row) {
  const MetricsReport& m = row.metrics;
  std::vector<double> v = {static_cast<double>(row.replication),
                           static_cast<double>(row.seed),
                           m.total_reward,
                           m.opt,
                           m.opt_pac,
                           m.regret};
  v.insert(v.end(), m.violations.begin(), m.violations.end());
  v.insert(v.end(), {m.reg_out, m.reg_pace, m.primal_regret, m.dual_regret,
                     m.nu_measured, static_cast<double>(m.stop_round)});
  return v;
}

std::string FormatNumber(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", value);
  return buf;
}

double Quantile(std::vector<double> values, double q) {
  if (values.empty()) throw std::invalid_argument("quantile of empty sample");
  std::sort(values.begin(), values.end());
  const double pos = q * (values.size() - 1);
  const size_t lo = static_cast<size_t>(std::floor(pos));
  const size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - lo) * (values[hi] - values[lo]);
}

ExperimentResult RunExperiment(const ExperimentConfig& config,
                               const RunOptions& options) {
  const InstanceSpec& spec = config.instance;
  ExperimentResult result;
  result.bench = ComputeBenchmarks(spec);
  const AlgorithmView view = PrepareRun(spec, config.run);
  result.rows.resize(config.replications);

  std::atomic<int> next{0};
  auto worker = [&]() {
    for (int r = next++; r < config.replications; r = next++) {
      ReplicationResult& row = result.rows[r];
      row.replication = r;
      row.seed = config.base_seed + static_cast<std::uint64_t>(r);
      try {
        RunConfig run = config.run;
        run.seed = row.seed;
        auto primal = MakePrimal(config, view);
        auto dual = MakeDual(config, view);
        RunLog log = Run(spec, view, *primal, *dual, run);
        row.metrics = ComputeMetrics(log, spec, result.bench);
        if (options.keep_logs) row.log = std::move(log);
        row.ok = true;
      } catch (const std::exception& e) {
        row.error = e.what();
      }
    }
  };
  const int threads = std::max(1, std::min(options.parallel, config.replications));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  const std::vector<std::string> header = RunsCsvHeader(spec.num_resources());
  for (size_t col = 2; col < header.size(); ++col) {
    std::vector<double> sample;
    for (const ReplicationResult& row : result.rows) {
      if (row.ok) sample.push_back(RunsCsvValues(row)[col]);
    }
    if (sample.empty()) continue;
    result.summary.push_back({header[col], Quantile(sample, 0.5),
                              Quantile(sample, 0.25), Quantile(sample, 0.75)});
  }
  return result;
}

namespace {

void WriteFile(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

json NumberOrNull(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

void EmitResults(const ExperimentConfig& config, const ExperimentResult& result,
                 const std::string& dir, bool trace) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create " + dir + ": " + ec.message());

  const int d = config.instance.num_resources();
  std::string csv;
  const std::vector<std::string> header = RunsCsvHeader(d);
  for (size_t i = 0; i < header.size(); ++i) {
    csv += (i ? "," : "") + header[i];
  }
  csv += "\n";
  for (const ReplicationResult& row : result.rows) {
    if (!row.ok) continue;
    const std::vector<double> values = RunsCsvValues(row);
    for (size_t i = 0; i < values.size(); ++i) {
      if (i) csv += ",";
      csv += i < 2 || i + 1 == values.size()
                 ? std::to_string(static_cast<long long>(values[i]))
                 : FormatNumber(values[i]);
    }
    csv += "\n";
  }
  WriteFile(fs::path(dir) / "runs.csv", csv);

  json summary;
  summary["config"] = json::parse(config.source_json);
  summary["benchmarks"] = {{"opt_lp", result.bench.opt_lp},
                           {"opt", result.bench.opt},
                           {"opt_pac", result.bench.opt_pac},
                           {"zeta", NumberOrNull(result.bench.zeta)}};
  summary["replications"] = config.replications;
  summary["succeeded"] = config.replications - result.failures();
  json metrics = json::object();
  for (const MetricSummary& m : result.summary) {
    metrics[m.name] = {{"median", m.median},
                       {"q25", m.q25},
                       {"q75", m.q75},
                       {"iqr", m.iqr()}};
  }
  summary["metrics"] = metrics;
  json failures = json::array();
  for (const ReplicationResult& row : result.rows) {
    if (!row.ok) {
      failures.push_back({{"replication", row.replication},
                          {"seed", row.seed},
                          {"error", row.error}});
    }
  }
  summary["failures"] = failures;
  WriteFile(fs::path(dir) / "summary.json", summary.dump(2) + "\n");

  if (!trace) return;
  const std::string path = (fs::path(dir) / "trace.csv.gz").string();
  gzFile gz = gzopen(path.c_str(), "wb");
  if (gz == nullptr) throw std::runtime_error("cannot write " + path);
  std::string line = "replication,round,context,arm,reward,payoff";
  for (int i = 1; i <= d; ++i) line += ",lambda_" + std::to_string(i);
  for (int i = 1; i <= d; ++i) line += ",c_" + std::to_string(i);
  line += "\n";
  bool ok = gzputs(gz, line.c_str()) >= 0;
  for (const ReplicationResult& row : result.rows) {
    if (!row.ok || !row.log) continue;
    const RunLog& log = *row.log;
    for (int t = 0; t < log.horizon && ok; ++t) {
      std::span<const double> outcome = log.Outcome(t);
      line = std::to_string(row.replication) + "," + std::to_string(t + 1) + "," +
             std::to_string(log.contexts[t]) + "," + std::to_string(log.arms[t]) +
             "," + FormatNumber(outcome[0]) + "," + FormatNumber(log.payoffs[t]);
      for (double l : log.Lambda(t)) line += "," + FormatNumber(l);
      for (int i = 1; i <= d; ++i) line += "," + FormatNumber(outcome[i]);
      line += "\n";
      ok = gzputs(gz, line.c_str()) >= 0;
    }
  }
  if (gzclose(gz) != Z_OK || !ok) throw std::runtime_error("write failed for " + path);
}

}  // namespace cbwlc
