#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "lvckit/featurize.hpp"

namespace lvc {

// Balanced weights: w_c = N / (2 * n_c), so each class carries total mass
// N/2 in the loss.
struct ClassWeights {
  double w_pos = 1.0;
  double w_neg = 1.0;
};

ClassWeights balanced_class_weights(const std::vector<int>& labels);

struct SplitSpec {
  double train_fraction = 0.8;
  std::uint64_t seed = 1;
};

struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

// Deterministic stratified split. Per class: indices are shuffled with
// splitmix64 seeded from spec.seed + class label, floor(f*n_c) go to train,
// plus one more when frac(f*n_c) >= 0.5. Output indices ascending; train
// and test partition the input.
SplitIndices stratified_split(const std::vector<int>& labels,
                              const SplitSpec& spec);

struct TrainConfig {
  double lambda = 1.0;     // L2 strength in the sum-loss parameterization
  std::size_t max_iter = 1000;
  double tol = 1e-6;       // stop when the gradient inf-norm drops below
};

struct LogRegModel {
  std::vector<double> weights;
  double bias = 0.0;
  double lambda = 1.0;
  double threshold = 0.5;  // tau; predict 1 iff p >= tau
  std::string feature_space_id;
  // training record
  std::size_t max_iter = 0;
  double tol = 0.0;
  std::size_t iterations = 0;
  double final_grad_norm = 0.0;
  double final_loss = 0.0;
  bool converged = false;
};

struct LossGrad {
  double loss = 0.0;
  std::vector<double> grad_weights;
  double grad_bias = 0.0;
};

// Class-weighted cross-entropy plus (lambda/2)*||w||^2; the bias is not
// regularized. The gradient is exact, including the bias coordinate.
LossGrad loss_and_grad(const std::vector<double>& weights, double bias,
                       double lambda, const std::vector<SparseVector>& X,
                       const std::vector<int>& y, const ClassWeights& cw);

// Full-batch gradient descent with backtracking line search (halving,
// Armijo constant 1e-4) from zero initialization. Deterministic: identical
// inputs give bitwise-identical models. loss_history, when given, receives
// the accepted loss value per iteration (non-increasing by construction).
LogRegModel train_logreg(const std::vector<SparseVector>& X,
                         const std::vector<int>& y, const TrainConfig& cfg,
                         const ClassWeights& cw,
                         std::vector<double>* loss_history = nullptr);

double sigmoid(double z);
double predict_proba(const LogRegModel& m, const SparseVector& x);
int predict_label(const LogRegModel& m, const SparseVector& x);

// DataError when the model was trained against a different feature space.
void check_feature_space(const LogRegModel& m, const std::string& space_id);

}  // namespace lvc
