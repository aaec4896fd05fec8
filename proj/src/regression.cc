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

#include "cbwlc/regression.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "log_weights.h"

namespace cbwlc {

RegressionOracle::RegressionOracle(int num_contexts, int num_arms, double lo,
                                   double hi)
    : num_contexts_(num_contexts), num_arms_(num_arms), lo_(lo), hi_(hi) {
  if (num_contexts < 1 || num_arms < 1) {
    throw std::invalid_argument("oracle needs at least one context and arm");
  }
  if (!(hi > lo)) throw std::invalid_argument("oracle range must be nonempty");
}

void RegressionOracle::CheckIds(int context, int arm) const {
  if (context < 0 || context >= num_contexts_) {
    throw std::out_of_range("unknown context id " + std::to_string(context));
  }
  if (arm < 0 || arm >= num_arms_) {
    throw std::out_of_range("unknown arm id " + std::to_string(arm));
  }
}

double RegressionOracle::Predict(int context, int arm) const {
  CheckIds(context, arm);
  return std::clamp(RawPredict(context, arm), lo_, hi_);
}

void RegressionOracle::Observe(int context, int arm, double score) {
  CheckIds(context, arm);
  if (!(score >= lo_ - 1e-9 && score <= hi_ + 1e-9)) {
    throw std::invalid_argument("score " + std::to_string(score) +
                                " outside oracle range [" + std::to_string(lo_) +
                                ", " + std::to_string(hi_) + "]");
  }
  Update(context, arm, std::clamp(score, lo_, hi_));
}

// ---------------------------------------------------------------------------

FiniteClassOracle::FiniteClassOracle(int num_contexts, int num_arms, double lo,
                                     double hi,
                                     std::vector<FunctionTable> candidates,
                                     double share_alpha)
    : RegressionOracle(num_contexts, num_arms, lo, hi),
      candidates_(std::move(candidates)),
      learning_rate_(2.0 / ((hi - lo) * (hi - lo))),
      share_alpha_(share_alpha) {
  if (candidates_.empty()) throw std::invalid_argument("empty function class");
  const size_t cells = static_cast<size_t>(num_contexts) * num_arms;
  for (const FunctionTable& f : candidates_) {
    if (f.size() != cells) {
      throw std::invalid_argument("candidate table has wrong size");
    }
  }
  if (share_alpha < 0.0 || share_alpha >= 1.0) {
    throw std::invalid_argument("share_alpha must lie in [0, 1)");
  }
  log_weights_.assign(candidates_.size(), 0.0);
  weights_.assign(candidates_.size(), 1.0 / candidates_.size());
}

std::vector<double> FiniteClassOracle::Weights() const { return weights_; }

double FiniteClassOracle::RawPredict(int context, int arm) const {
  const size_t cell = static_cast<size_t>(context) * num_arms() + arm;
  double prediction = 0.0;
  for (size_t f = 0; f < candidates_.size(); ++f) {
    prediction += weights_[f] * candidates_[f][cell];
  }
  return prediction;
}

void FiniteClassOracle::Update(int context, int arm, double score) {
  const size_t cell = static_cast<size_t>(context) * num_arms() + arm;
  for (size_t f = 0; f < candidates_.size(); ++f) {
    const double residual = candidates_[f][cell] - score;
    log_weights_[f] -= learning_rate_ * residual * residual;
  }
  internal::Renormalize(log_weights_);
  internal::FixedShareMix(log_weights_, share_alpha_);
  internal::Softmax(log_weights_, weights_);
}

// ---------------------------------------------------------------------------

OnlineLeastSquares::OnlineLeastSquares(int dimension, double ridge, Mode mode)
    : inverse_(Eigen::MatrixXd::Identity(dimension, dimension) / ridge),
      moment_(Eigen::VectorXd::Zero(dimension)),
      mode_(mode) {
  if (dimension < 1) throw std::invalid_argument("dimension must be positive");
  if (!(ridge > 0.0)) throw std::invalid_argument("ridge must be positive");
}

double OnlineLeastSquares::Predict(const Eigen::VectorXd& phi) const {
  const Eigen::VectorXd a_phi = inverse_ * phi;
  const double fit = a_phi.dot(moment_);
  if (mode_ == Mode::kRidge) return fit;
  // (A + phi phi^T)^{-1} applied through Sherman-Morrison.
  return fit / (1.0 + phi.dot(a_phi));
}

void OnlineLeastSquares::Update(const Eigen::VectorXd& phi, double score) {
  const Eigen::VectorXd a_phi = inverse_ * phi;
  inverse_.noalias() -= (a_phi * a_phi.transpose()) / (1.0 + phi.dot(a_phi));
  moment_ += score * phi;
}

FeatureTable OneHotFeatures(int num_contexts, int num_arms) {
  FeatureTable table;
  table.dimension = num_contexts * num_arms;
  table.rows.reserve(table.dimension);
  for (int cell = 0; cell < table.dimension; ++cell) {
    table.rows.push_back(Eigen::VectorXd::Unit(table.dimension, cell));
  }
  return table;
}

namespace {

void CheckFeatures(const FeatureTable& features, int num_contexts,
                   int num_arms) {
  if (features.rows.size() != static_cast<size_t>(num_contexts) * num_arms) {
    throw std::invalid_argument("feature table has wrong number of rows");
  }
  for (const Eigen::VectorXd& row : features.rows) {
    if (row.size() != features.dimension) {
      throw std::invalid_argument("feature row has wrong dimension");
    }
    if (row.norm() > 1.0 + 1e-9) {
      throw std::invalid_argument("feature norm exceeds 1");
    }
  }
}

}  // namespace

LinearOracle::LinearOracle(int num_contexts, int num_arms, double lo, double hi,
                           FeatureTable features, double ridge,
                           OnlineLeastSquares::Mode mode)
    : RegressionOracle(num_contexts, num_arms, lo, hi),
      features_(std::move(features)),
      solver_(features_.dimension, ridge, mode) {
  CheckFeatures(features_, num_contexts, num_arms);
}

double LinearOracle::RawPredict(int context, int arm) const {
  return solver_.Predict(features_.rows[context * num_arms() + arm]);
}

void LinearOracle::Update(int context, int arm, double score) {
  solver_.Update(features_.rows[context * num_arms() + arm], score);
}

OgdOracle::OgdOracle(int num_contexts, int num_arms, double lo, double hi,
                     FeatureTable features, double step, double radius)
    : RegressionOracle(num_contexts, num_arms, lo, hi),
      features_(std::move(features)),
      theta_(Eigen::VectorXd::Zero(features_.dimension)),
      step_(step),
      radius_(radius) {
  CheckFeatures(features_, num_contexts, num_arms);
  if (!(step > 0.0) || !(radius > 0.0)) {
    throw std::invalid_argument("step and radius must be positive");
  }
}

double OgdOracle::RawPredict(int context, int arm) const {
  return theta_.dot(features_.rows[context * num_arms() + arm]);
}

void OgdOracle::Update(int context, int arm, double score) {
  const Eigen::VectorXd& phi = features_.rows[context * num_arms() + arm];
  ++rounds_;
  const double residual = theta_.dot(phi) - score;
  theta_ -= (step_ / std::sqrt(static_cast<double>(rounds_))) * 2.0 * residual * phi;
  const double norm = theta_.norm();
  if (norm > radius_) theta_ *= radius_ / norm;
}

// ---------------------------------------------------------------------------

ErrorTrace SquaredErrorTrace(const RunLog& log, const InstanceSpec& spec) {
  if (!log.has_predictions()) {
    throw std::invalid_argument("run log carries no oracle predictions");
  }
  const int coords = log.num_coords();
  const AlgorithmView& view = log.view;
  ErrorTrace trace;
  trace.cumulative.resize(static_cast<size_t>(log.horizon) * coords);
  trace.totals.assign(coords, 0.0);
  std::vector<double> true_row(coords);
  std::vector<double> reported(coords);
  for (int t = 0; t < log.horizon; ++t) {
    const OutcomeModel& model =
        spec.segments[spec.SegmentIndex(t + 1)].model;
    const int x = log.contexts[t];
    const int a = log.arms[t];
    for (int j = 0; j < coords; ++j) true_row[j] = model.mean(x, a, j);
    view.Report(true_row, reported);
    std::span<const double> predicted = log.Predictions(t);
    for (int j = 0; j < coords; ++j) {
      const double diff = predicted[j] - reported[j];
      trace.totals[j] += diff * diff;
      trace.cumulative[static_cast<size_t>(t) * coords + j] = trace.totals[j];
    }
    const double truth = LagrangePayoffUnchecked(reported, log.Lambda(t),
                                                 view.params, view.signs);
    const double diff = log.estimates[t] - truth;
    trace.lagrange += diff * diff;
  }
  return trace;
}

double LagrangeErrorBound(const ErrorTrace& trace, const LagrangeParams& params) {
  double sum = 0.0;
  for (double e : trace.totals) sum += e;
  const double scale = std::max(1.0, params.eta_prime);
  return 2.0 * scale * scale * sum;
}

}  // namespace cbwlc
