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

// Online regression oracles over (context, arm) pairs. Each round the
// caller asks Predict for the played pair, then reveals the score through
// Observe. Predictions are clamped to the oracle's range.

#ifndef CBWLC_REGRESSION_H_
#define CBWLC_REGRESSION_H_

#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "cbwlc/env.h"
#include "cbwlc/run_log.h"

namespace cbwlc {

class RegressionOracle {
 public:
  RegressionOracle(int num_contexts, int num_arms, double lo, double hi);
  virtual ~RegressionOracle() = default;

  int num_contexts() const { return num_contexts_; }
  int num_arms() const { return num_arms_; }
  double lo() const { return lo_; }
  double hi() const { return hi_; }

  // Throws std::out_of_range for an unknown context or arm.
  double Predict(int context, int arm) const;
  // Throws std::out_of_range for unknown ids and std::invalid_argument for a
  // score outside [lo, hi].
  void Observe(int context, int arm, double score);

  virtual std::unique_ptr<RegressionOracle> Clone() const = 0;

 protected:
  // Unclamped prediction; ids already checked.
  virtual double RawPredict(int context, int arm) const = 0;
  virtual void Update(int context, int arm, double score) = 0;

 private:
  void CheckIds(int context, int arm) const;

  int num_contexts_;
  int num_arms_;
  double lo_;
  double hi_;
};

// A truth table over (context, arm), row-major.
using FunctionTable = std::vector<double>;

// Exponential weights over a finite class with the square-loss rate
// 2 / (hi - lo)^2 and the weighted-mean prediction. A positive share_alpha
// adds Fixed-Share mixing so the oracle tracks a class member that changes
// over time.
class FiniteClassOracle : public RegressionOracle {
 public:
  FiniteClassOracle(int num_contexts, int num_arms, double lo, double hi,
                    std::vector<FunctionTable> candidates,
                    double share_alpha = 0.0);

  int class_size() const { return static_cast<int>(candidates_.size()); }
  double learning_rate() const { return learning_rate_; }
  // Posterior weights, normalized.
  std::vector<double> Weights() const;

  std::unique_ptr<RegressionOracle> Clone() const override {
    return std::make_unique<FiniteClassOracle>(*this);
  }

 protected:
  double RawPredict(int context, int arm) const override;
  void Update(int context, int arm, double score) override;

 private:
  std::vector<FunctionTable> candidates_;
  std::vector<double> log_weights_;
  std::vector<double> weights_;
  double learning_rate_;
  double share_alpha_;
};

// Least squares with ridge regularization on a fixed feature vector. In
// kVaw mode the query feature is folded into the second-moment matrix before
// predicting (Vovk-Azoury-Warmuth); kRidge predicts with the plain ridge
// estimate. The inverse matrix is maintained by Sherman-Morrison.
class OnlineLeastSquares {
 public:
  enum class Mode { kVaw, kRidge };

  OnlineLeastSquares(int dimension, double ridge, Mode mode);

  int dimension() const { return static_cast<int>(moment_.size()); }
  double Predict(const Eigen::VectorXd& phi) const;
  void Update(const Eigen::VectorXd& phi, double score);
  const Eigen::MatrixXd& inverse() const { return inverse_; }

 private:
  Eigen::MatrixXd inverse_;
  Eigen::VectorXd moment_;
  Mode mode_;
};

// Feature vectors phi(x, a), each of dimension b, row-major over
// (context, arm).
struct FeatureTable {
  int dimension = 0;
  std::vector<Eigen::VectorXd> rows;
};

// One-hot features over (context, arm); any truth table is realizable.
FeatureTable OneHotFeatures(int num_contexts, int num_arms);

class LinearOracle : public RegressionOracle {
 public:
  // Throws std::invalid_argument when a feature has norm above 1 (beyond
  // round-off) or the table has the wrong number of rows.
  LinearOracle(int num_contexts, int num_arms, double lo, double hi,
               FeatureTable features, double ridge = 1.0,
               OnlineLeastSquares::Mode mode = OnlineLeastSquares::Mode::kVaw);

  const OnlineLeastSquares& solver() const { return solver_; }

  std::unique_ptr<RegressionOracle> Clone() const override {
    return std::make_unique<LinearOracle>(*this);
  }

 protected:
  double RawPredict(int context, int arm) const override;
  void Update(int context, int arm, double score) override;

 private:
  FeatureTable features_;
  OnlineLeastSquares solver_;
};

// Projected online gradient descent on the square loss, weights kept in the
// ball of the given radius, step size step / sqrt(t).
class OgdOracle : public RegressionOracle {
 public:
  OgdOracle(int num_contexts, int num_arms, double lo, double hi,
            FeatureTable features, double step, double radius = 1.0);

  std::unique_ptr<RegressionOracle> Clone() const override {
    return std::make_unique<OgdOracle>(*this);
  }

 protected:
  double RawPredict(int context, int arm) const override;
  void Update(int context, int arm, double score) override;

 private:
  FeatureTable features_;
  Eigen::VectorXd theta_;
  double step_;
  double radius_;
  int rounds_ = 0;
};

// Cumulative squared prediction errors of a regression-based run, measured at
// the played pair against the mean table of the segment in force, after the
// same reporting transform the learners saw.
struct ErrorTrace {
  // Per outcome coordinate, cumulative through round t (T x (d + 1)).
  std::vector<double> cumulative;
  // Final per-coordinate totals err_i.
  std::vector<double> totals;
  // Error of the plug-in Lagrange estimate of the played arm.
  double lagrange = 0.0;
};

// Throws std::invalid_argument when the log carries no predictions.
ErrorTrace SquaredErrorTrace(const RunLog& log, const InstanceSpec& spec);

// Right-hand side of the aggregation bound for the composed Lagrange
// estimate: 2 (eta T / B)^2 * sum_i err_i, with the reported budget.
double LagrangeErrorBound(const ErrorTrace& trace, const LagrangeParams& params);

}  // namespace cbwlc

#endif  // CBWLC_REGRESSION_H_
