#include "coda/sandy/train.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <random>
#include <unordered_set>

#include "coda/nn/adam.hpp"
#include "coda/nn/ops.hpp"

namespace coda::sandy {

namespace {

std::string row_key(const Dataset& d, int i) {
  std::string key(reinterpret_cast<const char*>(d.x.ptr() + static_cast<std::size_t>(i) * d.x.dim(1)),
                  sizeof(double) * d.x.dim(1));
  key.append(reinterpret_cast<const char*>(d.y.ptr() + static_cast<std::size_t>(i) * d.y.dim(1)),
             sizeof(double) * d.y.dim(1));
  return key;
}

void check_disjoint(const Dataset& train, const Dataset& val) {
  std::unordered_set<std::string> keys;
  keys.reserve(train.size());
  for (int i = 0; i < train.size(); ++i) keys.insert(row_key(train, i));
  for (int i = 0; i < val.size(); ++i) {
    if (keys.count(row_key(val, i))) throw std::invalid_argument("train_sandy: train and validation sets overlap");
  }
}

}  // namespace

void TrainConfig::validate() const {
  if (reg.lambda1 < 0 || reg.lambda2 < 0 || reg.lambda3 < 0) {
    throw std::invalid_argument("train: regularization weights must be non-negative");
  }
  if (!(lr > 0)) throw std::invalid_argument("train: lr must be positive");
  if (batch_size < 1 || max_epochs < 1) throw std::invalid_argument("train: batch size and epochs must be positive");
  if (patience < 0 || steps_per_epoch < 0 || train_eval_rows < 0) throw std::invalid_argument("train: negative count");
}

double evaluate_mse(DynamicsModel& model, const Dataset& data, int max_rows) {
  const int rows = max_rows > 0 ? std::min(max_rows, data.size()) : data.size();
  if (rows == 0) throw std::invalid_argument("evaluate_mse: empty dataset");
  constexpr int kChunk = 2048;
  double total = 0.0;
  std::vector<int> idx(rows);
  std::iota(idx.begin(), idx.end(), 0);
  for (int begin = 0; begin < rows; begin += kChunk) {
    const int end = std::min(rows, begin + kChunk);
    const Tensor pred = model.predict(gather_rows(data.x, idx, begin, end));
    const Tensor y = gather_rows(data.y, idx, begin, end);
    for (std::size_t k = 0; k < y.size(); ++k) total += (pred[k] - y[k]) * (pred[k] - y[k]);
  }
  return total / rows;
}

TrainResult train_sandy(DynamicsModel& model, const Dataset& train, const Dataset& val, const TrainConfig& config) {
  config.validate();
  if (train.size() == 0 || val.size() == 0) throw std::invalid_argument("train_sandy: empty dataset");
  if (!(*train.space == *model.space()) || !(*val.space == *model.space())) {
    throw DimensionError("train_sandy: data does not match the model's space");
  }
  check_disjoint(train, val);

  const Tensor xs = model.input_norm().apply(train.x);
  const Tensor ys = model.output_norm().apply(train.y);
  auto params = model.parameters();
  nn::AdamConfig ac;
  ac.lr = config.lr;
  nn::Adam adam(params, ac);
  std::mt19937_64 rng(config.seed);

  const int n = train.size();
  const int batch = std::min(config.batch_size, n);
  const int steps = config.steps_per_epoch > 0 ? config.steps_per_epoch : (n + batch - 1) / batch;
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::size_t cursor = 0;

  TrainResult result;
  result.best_val_mse = INFINITY;
  std::vector<nn::Tensor> best;
  for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
    double objective_sum = 0.0;
    for (int step = 0; step < steps; ++step) {
      if (cursor + batch > order.size()) {
        std::shuffle(order.begin(), order.end(), rng);
        cursor = 0;
      }
      nn::Tape tape;
      const nn::Var x = tape.constant(gather_rows(xs, order, cursor, cursor + batch));
      const nn::Var y = tape.constant(gather_rows(ys, order, cursor, cursor + batch));
      cursor += batch;
      adam.zero_grad();
      const nn::Var loss = model.objective(tape, x, y, config.reg);
      const double v = loss.value().item();
      if (!std::isfinite(v)) {
        throw TrainingDiverged("training diverged: objective is " + std::to_string(v) + " at epoch " +
                               std::to_string(epoch) + ", step " + std::to_string(step) + " (lr " +
                               std::to_string(config.lr) + ")");
      }
      objective_sum += v;
      tape.backward(loss);
      adam.step();
    }
    EpochRecord rec;
    rec.epoch = epoch;
    rec.objective = objective_sum / steps;
    rec.train_mse = evaluate_mse(model, train, config.train_eval_rows);
    rec.val_mse = evaluate_mse(model, val);
    if (!std::isfinite(rec.val_mse)) {
      throw TrainingDiverged("training diverged: validation MSE is not finite at epoch " + std::to_string(epoch));
    }
    result.curve.push_back(rec);
    if (config.on_epoch) config.on_epoch(rec);
    if (rec.val_mse < result.best_val_mse) {
      result.best_val_mse = rec.val_mse;
      result.best_epoch = epoch;
      if (config.restore_best) {
        best.clear();
        for (auto* p : params) best.push_back(p->value);
      }
    } else if (config.patience > 0 && epoch - result.best_epoch >= config.patience) {
      result.early_stopped = true;
      break;
    }
  }
  if (config.restore_best && !best.empty()) {
    for (std::size_t k = 0; k < params.size(); ++k) params[k]->value = best[k];
  }
  adam.zero_grad();
  return result;
}

void write_curve_csv(std::ostream& out, const std::vector<EpochRecord>& curve) {
  out << "epoch,train_mse,val_mse\n";
  out.precision(10);
  for (const auto& r : curve) out << r.epoch << ',' << r.train_mse << ',' << r.val_mse << '\n';
}

}  // namespace coda::sandy
