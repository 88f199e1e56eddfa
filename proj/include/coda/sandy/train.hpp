#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "coda/sandy/model.hpp"

namespace coda::sandy {

class TrainingDiverged : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct EpochRecord {
  int epoch = 0;
  double train_mse = 0.0;  // raw units, squared error summed over outputs, averaged over rows
  double val_mse = 0.0;
  double objective = 0.0;  // mean training objective over the epoch (standardized units)
};

struct TrainConfig {
  Regularization reg;
  double lr = 1e-3;
  int batch_size = 128;
  int max_epochs = 100;
  /// Stop after this many epochs without a new best validation MSE; 0 disables.
  int patience = 10;
  /// Batches per epoch; 0 means one pass over the training rows.
  int steps_per_epoch = 0;
  /// Rows of the training set used for the per-epoch train_mse (0 = all).
  int train_eval_rows = 10000;
  bool restore_best = true;
  double tau_default = 0.05;
  std::uint64_t seed = 0;
  std::function<void(const EpochRecord&)> on_epoch;

  void validate() const;
};

struct TrainResult {
  std::vector<EpochRecord> curve;
  int best_epoch = 0;
  double best_val_mse = 0.0;
  bool early_stopped = false;
};

/// Adam on the model's objective with early stopping on validation MSE.
/// Throws TrainingDiverged as soon as the objective is not finite.
TrainResult train_sandy(DynamicsModel& model, const Dataset& train, const Dataset& val, const TrainConfig& config);

/// Squared error summed over outputs, averaged over rows, in raw units.
double evaluate_mse(DynamicsModel& model, const Dataset& data, int max_rows = 0);

void write_curve_csv(std::ostream& out, const std::vector<EpochRecord>& curve);

}  // namespace coda::sandy
