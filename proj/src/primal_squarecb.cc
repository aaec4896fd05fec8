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

#include "cbwlc/primal_squarecb.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cbwlc {
namespace {

double PlugIn(std::span<const double> predicted, std::span<const double> lambda,
              const LagrangeParams& params, std::span<const int> signs) {
  double slack = 0.0;
  for (size_t i = 0; i < signs.size(); ++i) {
    slack += signs[i] * lambda[i] * (1.0 - params.ratio * predicted[i + 1]);
  }
  return predicted[0] + params.eta * slack;
}

int Leader(std::span<const double> estimates) {
  return static_cast<int>(std::max_element(estimates.begin(), estimates.end()) -
                          estimates.begin());
}

}  // namespace

OracleSet CloneOracles(const OracleSet& oracles) {
  OracleSet copy;
  copy.reserve(oracles.size());
  for (const auto& o : oracles) copy.push_back(o->Clone());
  return copy;
}

std::vector<double> EstimateLagrange(const OracleSet& oracles, int context,
                                     std::span<const double> lambda,
                                     const LagrangeParams& params,
                                     std::span<const int> signs) {
  const int k = oracles.front()->num_arms();
  std::vector<double> predicted(oracles.size());
  std::vector<double> out(k);
  for (int a = 0; a < k; ++a) {
    for (size_t j = 0; j < oracles.size(); ++j) {
      predicted[j] = oracles[j]->Predict(context, a);
    }
    out[a] = PlugIn(predicted, lambda, params, signs);
  }
  return out;
}

void IgwDistributionInto(std::span<const double> estimates,
                         const IgwConfig& config, std::span<double> out,
                         double* unnormalized_sum) {
  if (!(config.gamma > 0.0) || !std::isfinite(config.gamma)) {
    throw std::invalid_argument("IGW gamma must be positive and finite");
  }
  for (double e : estimates) {
    if (!std::isfinite(e)) throw std::invalid_argument("non-finite estimate");
  }
  const int k = static_cast<int>(estimates.size());
  const int leader = Leader(estimates);
  const double top = estimates[leader];
  const double gamma = config.gamma;

  if (config.normalization == IgwConfig::Normalization::kClosedForm) {
    double rest = 0.0;
    for (int a = 0; a < k; ++a) {
      if (a == leader) continue;
      out[a] = 1.0 / (k + gamma * (top - estimates[a]));
      rest += out[a];
    }
    out[leader] = 1.0 - rest;
    if (unnormalized_sum) *unnormalized_sum = 1.0;
    return;
  }

  auto total = [&](double c) {
    double s = 0.0;
    for (int a = 0; a < k; ++a) s += 1.0 / (c + gamma * (top - estimates[a]));
    return s;
  };
  double lo = 1.0;
  double hi = static_cast<double>(k);
  while (hi - lo > config.bisection_tolerance) {
    const double mid = 0.5 * (lo + hi);
    if (total(mid) > 1.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double c = 0.5 * (lo + hi);
  double sum = 0.0;
  for (int a = 0; a < k; ++a) {
    out[a] = 1.0 / (c + gamma * (top - estimates[a]));
    sum += out[a];
  }
  for (double& p : out) p /= sum;
  if (unnormalized_sum) *unnormalized_sum = sum;
}

std::vector<double> IgwDistribution(std::span<const double> estimates,
                                    const IgwConfig& config,
                                    double* unnormalized_sum) {
  std::vector<double> out(estimates.size());
  IgwDistributionInto(estimates, config, out, unnormalized_sum);
  return out;
}

double SquareCbGamma(double budget, int horizon, int num_arms,
                     int num_resources, double regression_error_bound) {
  if (!(regression_error_bound > 0.0)) {
    throw std::invalid_argument("regression error bound must be positive");
  }
  const double t = horizon;
  return (budget / t) *
         std::sqrt((num_arms * t / (num_resources + 1)) / regression_error_bound);
}

// ---------------------------------------------------------------------------

SquareCbPrimal::SquareCbPrimal(OracleSet oracles, LagrangeParams params,
                               std::vector<int> signs, IgwConfig igw)
    : oracles_(std::move(oracles)),
      params_(params),
      signs_(std::move(signs)),
      igw_(igw) {
  if (oracles_.size() != signs_.size() + 1) {
    throw std::invalid_argument("need one oracle per outcome coordinate");
  }
  num_arms_ = oracles_.front()->num_arms();
  for (const auto& o : oracles_) {
    if (o->num_arms() != num_arms_ ||
        o->num_contexts() != oracles_.front()->num_contexts()) {
      throw std::invalid_argument("oracles disagree on context/arm spaces");
    }
  }
  predictions_.assign(static_cast<size_t>(num_arms_) * oracles_.size(), 0.0);
  estimates_.assign(num_arms_, 0.0);
  distribution_.assign(num_arms_, 1.0 / num_arms_);
}

SquareCbPrimal::SquareCbPrimal(const SquareCbPrimal& other)
    : oracles_(CloneOracles(other.oracles_)),
      params_(other.params_),
      signs_(other.signs_),
      igw_(other.igw_),
      num_arms_(other.num_arms_),
      predictions_(other.predictions_),
      estimates_(other.estimates_),
      distribution_(other.distribution_) {}

int SquareCbPrimal::Act(int context, std::span<const double> lambda, Rng& rng) {
  const size_t coords = oracles_.size();
  for (int a = 0; a < num_arms_; ++a) {
    std::span<double> row(predictions_.data() + a * coords, coords);
    for (size_t j = 0; j < coords; ++j) row[j] = oracles_[j]->Predict(context, a);
    estimates_[a] = PlugIn(row, lambda, params_, signs_);
  }
  IgwDistributionInto(estimates_, igw_, distribution_);
  return rng.Categorical(distribution_);
}

void SquareCbPrimal::Observe(int context, int arm,
                             std::span<const double> outcome,
                             double /*payoff*/) {
  for (size_t j = 0; j < oracles_.size(); ++j) {
    oracles_[j]->Observe(context, arm, outcome[j]);
  }
}

void SquareCbPrimal::LastPredictions(int arm, std::span<double> out) const {
  const size_t coords = oracles_.size();
  std::copy_n(predictions_.begin() + arm * coords, coords, out.begin());
}

// ---------------------------------------------------------------------------

DirectSquareCbPrimal::DirectSquareCbPrimal(int num_contexts, int num_arms,
                                           int num_resources,
                                           LagrangeParams params,
                                           IgwConfig igw, double ridge)
    : num_arms_(num_arms),
      params_(params),
      igw_(igw),
      cells_(static_cast<size_t>(num_contexts) * num_arms,
             OnlineLeastSquares(num_resources, ridge,
                                OnlineLeastSquares::Mode::kVaw)),
      last_lambda_(Eigen::VectorXd::Zero(num_resources)),
      estimates_(num_arms, 0.0),
      distribution_(num_arms, 1.0 / num_arms) {}

int DirectSquareCbPrimal::Act(int context, std::span<const double> lambda,
                              Rng& rng) {
  last_lambda_ = Eigen::Map<const Eigen::VectorXd>(
      lambda.data(), static_cast<Eigen::Index>(lambda.size()));
  for (int a = 0; a < num_arms_; ++a) {
    const double raw =
        cells_[static_cast<size_t>(context) * num_arms_ + a].Predict(last_lambda_);
    estimates_[a] = std::clamp(raw, params_.payoff_lo, params_.payoff_hi);
  }
  IgwDistributionInto(estimates_, igw_, distribution_);
  return rng.Categorical(distribution_);
}

void DirectSquareCbPrimal::Observe(int context, int arm,
                                   std::span<const double> /*outcome*/,
                                   double payoff) {
  cells_[static_cast<size_t>(context) * num_arms_ + arm].Update(last_lambda_,
                                                                payoff);
}

// ---------------------------------------------------------------------------

double RealizedPolicyRegret(const RunLog& log,
                            std::span<const int> switch_rounds) {
  const int horizon = static_cast<int>(log.payoffs.size());
  const int k = log.num_arms;
  std::vector<int> bounds{0};
  for (int r : switch_rounds) {
    if (r - 1 > bounds.back() && r - 1 < horizon) bounds.push_back(r - 1);
  }
  bounds.push_back(horizon);
  std::vector<double> per_cell(static_cast<size_t>(log.num_contexts) * k);
  std::vector<bool> seen(log.num_contexts);
  double total = 0.0;
  for (size_t j = 0; j + 1 < bounds.size(); ++j) {
    std::fill(per_cell.begin(), per_cell.end(), 0.0);
    std::fill(seen.begin(), seen.end(), false);
    double played = 0.0;
    for (int t = bounds[j]; t < bounds[j + 1]; ++t) {
      const int x = log.contexts[t];
      seen[x] = true;
      played += log.payoffs[t];
      std::span<const double> row = log.Counterfactual(t);
      for (int a = 0; a < k; ++a) per_cell[static_cast<size_t>(x) * k + a] += row[a];
    }
    double best = 0.0;
    for (int x = 0; x < log.num_contexts; ++x) {
      if (!seen[x]) continue;
      auto first = per_cell.begin() + static_cast<size_t>(x) * k;
      best += *std::max_element(first, first + k);
    }
    total += best - played;
  }
  return total;
}

}  // namespace cbwlc
