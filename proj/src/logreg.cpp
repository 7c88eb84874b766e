#include "lvckit/logreg.hpp"

#include <algorithm>
#include <cmath>

#include "lvckit/errors.hpp"
#include "lvckit/log.hpp"
#include "lvckit/prng.hpp"

namespace lvc {

namespace {

// ln(1 + e^z) without overflow.
double softplus(double z) {
  return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z)));
}

std::size_t count_label(const std::vector<int>& labels, int value) {
  return static_cast<std::size_t>(
      std::count(labels.begin(), labels.end(), value));
}

double grad_inf_norm(const LossGrad& g) {
  double m = std::abs(g.grad_bias);
  for (double v : g.grad_weights) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

ClassWeights balanced_class_weights(const std::vector<int>& labels) {
  const std::size_t n_pos = count_label(labels, 1);
  const std::size_t n_neg = labels.size() - n_pos;
  if (n_pos == 0 || n_neg == 0)
    throw DataError("balanced class weights need both classes present");
  const double n = static_cast<double>(labels.size());
  return {n / (2.0 * static_cast<double>(n_pos)),
          n / (2.0 * static_cast<double>(n_neg))};
}

SplitIndices stratified_split(const std::vector<int>& labels,
                              const SplitSpec& spec) {
  if (!(spec.train_fraction > 0.0 && spec.train_fraction < 1.0))
    throw ConfigError("train_fraction must lie strictly between 0 and 1");
  std::vector<std::size_t> by_class[2];
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != 0 && labels[i] != 1)
      throw DataError("labels must be 0 or 1");
    by_class[labels[i]].push_back(i);
  }
  for (int c = 0; c < 2; ++c) {
    if (by_class[c].size() < 2)
      throw DataError("stratified split needs at least 2 items of class " +
                      std::to_string(c) + ", got " +
                      std::to_string(by_class[c].size()));
  }

  SplitIndices out;
  for (int c = 0; c < 2; ++c) {
    auto& indices = by_class[c];
    SplitMix64 rng(spec.seed + static_cast<std::uint64_t>(c));
    rng.shuffle(indices);
    const double want =
        spec.train_fraction * static_cast<double>(indices.size());
    std::size_t take = static_cast<std::size_t>(std::floor(want));
    if (want - std::floor(want) >= 0.5) ++take;  // round half up
    take = std::min(take, indices.size());
    out.train.insert(out.train.end(), indices.begin(),
                     indices.begin() + static_cast<std::ptrdiff_t>(take));
    out.test.insert(out.test.end(),
                    indices.begin() + static_cast<std::ptrdiff_t>(take),
                    indices.end());
  }
  std::sort(out.train.begin(), out.train.end());
  std::sort(out.test.begin(), out.test.end());
  return out;
}

LossGrad loss_and_grad(const std::vector<double>& weights, double bias,
                       double lambda, const std::vector<SparseVector>& X,
                       const std::vector<int>& y, const ClassWeights& cw) {
  if (X.size() != y.size())
    throw DataError("feature/label count mismatch");
  LossGrad out;
  out.grad_weights.assign(weights.size(), 0.0);
  for (std::size_t i = 0; i < X.size(); ++i) {
    const SparseVector& x = X[i];
    if (x.dimension != weights.size())
      throw DataError("feature dimension mismatch at example " +
                      std::to_string(i));
    const double z = x.dot_dense(weights) + bias;
    const double c = y[i] == 1 ? cw.w_pos : cw.w_neg;
    // -ln p = softplus(-z); -ln(1-p) = softplus(z)
    out.loss += c * softplus(y[i] == 1 ? -z : z);
    const double residual = c * (sigmoid(z) - static_cast<double>(y[i]));
    for (const auto& [idx, value] : x.entries)
      out.grad_weights[idx] += residual * value;
    out.grad_bias += residual;
  }
  double w_sq = 0.0;
  for (std::size_t j = 0; j < weights.size(); ++j) {
    w_sq += weights[j] * weights[j];
    out.grad_weights[j] += lambda * weights[j];
  }
  out.loss += 0.5 * lambda * w_sq;
  if (!std::isfinite(out.loss))
    throw NumericError("non-finite loss encountered");
  return out;
}

LogRegModel train_logreg(const std::vector<SparseVector>& X,
                         const std::vector<int>& y, const TrainConfig& cfg,
                         const ClassWeights& cw,
                         std::vector<double>* loss_history) {
  if (X.empty()) throw DataError("cannot train on an empty dataset");
  if (count_label(y, 1) == 0 || count_label(y, 0) == 0)
    throw DataError("training needs at least one example per class");
  if (!(cfg.lambda > 0.0))
    throw ConfigError("lambda must be positive");

  LogRegModel model;
  model.weights.assign(X.front().dimension, 0.0);
  model.lambda = cfg.lambda;
  model.max_iter = cfg.max_iter;
  model.tol = cfg.tol;

  LossGrad cur = loss_and_grad(model.weights, model.bias, cfg.lambda, X, y, cw);
  if (loss_history) loss_history->push_back(cur.loss);
  constexpr double kArmijo = 1e-4;
  constexpr int kMaxHalvings = 100;

  std::size_t iter = 0;
  for (; iter < cfg.max_iter; ++iter) {
    const double gnorm = grad_inf_norm(cur);
    if (gnorm <= cfg.tol) {
      model.converged = true;
      break;
    }
    double g_sq = cur.grad_bias * cur.grad_bias;
    for (double g : cur.grad_weights) g_sq += g * g;

    double step = 1.0;
    bool accepted = false;
    std::vector<double> trial_w(model.weights.size());
    for (int halving = 0; halving <= kMaxHalvings; ++halving) {
      for (std::size_t j = 0; j < model.weights.size(); ++j)
        trial_w[j] = model.weights[j] - step * cur.grad_weights[j];
      const double trial_b = model.bias - step * cur.grad_bias;
      LossGrad trial;
      try {
        trial = loss_and_grad(trial_w, trial_b, cfg.lambda, X, y, cw);
      } catch (const NumericError& e) {
        throw NumericError(std::string(e.what()) + " at iteration " +
                           std::to_string(iter));
      }
      if (trial.loss <= cur.loss - kArmijo * step * g_sq) {
        model.weights.swap(trial_w);
        model.bias = trial_b;
        cur = std::move(trial);
        if (loss_history) loss_history->push_back(cur.loss);
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      // No acceptable decrease at machine-precision steps: converged if the
      // gradient is already negligible, divergent otherwise.
      if (gnorm <= 1e-8) {
        model.converged = true;
        break;
      }
      throw NumericError(
          "line search failed to decrease the loss at iteration " +
          std::to_string(iter) + " (gradient inf-norm " +
          std::to_string(gnorm) + ")");
    }
  }
  model.iterations = iter;
  model.final_grad_norm = grad_inf_norm(cur);
  model.final_loss = cur.loss;
  if (model.final_grad_norm <= cfg.tol) model.converged = true;
  if (!model.converged)
    log_info("training stopped at max_iter=" + std::to_string(cfg.max_iter) +
             " with gradient inf-norm " + std::to_string(model.final_grad_norm));
  return model;
}

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double predict_proba(const LogRegModel& m, const SparseVector& x) {
  if (x.dimension != m.weights.size())
    throw DataError("feature dimension mismatch: model has " +
                    std::to_string(m.weights.size()) + ", vector has " +
                    std::to_string(x.dimension));
  return sigmoid(x.dot_dense(m.weights) + m.bias);
}

int predict_label(const LogRegModel& m, const SparseVector& x) {
  return predict_proba(m, x) >= m.threshold ? 1 : 0;
}

void check_feature_space(const LogRegModel& m, const std::string& space_id) {
  if (m.feature_space_id != space_id)
    throw DataError("model was trained against feature space " +
                    m.feature_space_id + ", not " + space_id);
}

}  // namespace lvc
