#pragma once

#include <memory>
#include <string>
#include <vector>

#include "json.hpp"

#include "coda/core/mask.hpp"
#include "coda/nn/tape.hpp"
#include "coda/sandy/data.hpp"

namespace coda::sandy {

/// Weights of the extra objective terms; zero means the term is skipped.
struct Regularization {
  double lambda1 = 0.0;  // L1 on the expert Jacobian bounds
  double lambda2 = 0.0;  // gating entropy term
  double lambda3 = 0.0;  // L2 norm of all parameters
};

/// Next-state predictor h(s, a) ~ s'. Networks work in standardized units;
/// predict() maps raw inputs to raw outputs.
class DynamicsModel {
 public:
  DynamicsModel(SpacePtr space, Standardizer in, Standardizer out);
  virtual ~DynamicsModel() = default;

  virtual std::string kind() const = 0;
  /// Standardized [B, in] -> standardized [B, out].
  virtual nn::Var forward(nn::Tape& tape, const nn::Var& x) = 0;
  virtual std::vector<nn::Parameter*> parameters() = 0;
  /// Model hyperparameters; the space and standardizers are stored separately.
  virtual nlohmann::json hyper_json() const = 0;

  /// Training objective on a standardized batch: mean over rows of the
  /// squared error summed over outputs, plus model specific terms.
  virtual nn::Var objective(nn::Tape& tape, const nn::Var& x, const nn::Var& y, const Regularization& reg);

  Tensor predict(const Tensor& x_raw);
  FactoredVector predict(const FactoredVector& s, const FactoredVector& a);

  const SpacePtr& space() const { return space_; }
  const Standardizer& input_norm() const { return in_; }
  const Standardizer& output_norm() const { return out_; }
  int in_dim() const { return in_.dim(); }
  int out_dim() const { return out_.dim(); }

 protected:
  SpacePtr space_;
  Standardizer in_;
  Standardizer out_;
};

/// A dynamics model that also scores local dependencies.
class MaskModel : public DynamicsModel {
 public:
  using DynamicsModel::DynamicsModel;

  /// Component-level scores, one [n+m, n] tensor per raw input row (rows are
  /// time-t nodes, columns next-state components, as in LocalMask).
  virtual std::vector<Tensor> mask_scores(const Tensor& x_raw) = 0;

  LocalMask mask(const FactoredVector& s, const FactoredVector& a, double tau);
};

/// Entry (r, c) set iff scores(r, c) > tau.
LocalMask threshold_scores(const Tensor& scores, int num_state, int num_action, double tau);

/// Max of a flat [in, out] matrix over each (node, next-state component) block.
Tensor aggregate_to_components(const FactoredSpace& space, const Tensor& flat);

nlohmann::json to_json(const Standardizer& s);
Standardizer standardizer_from_json(const nlohmann::json& j);

void save_model(const std::string& path, DynamicsModel& model);
/// Rebuilds a mixture, transformer or MLP model from a checkpoint.
std::unique_ptr<DynamicsModel> load_model(const std::string& path);

}  // namespace coda::sandy
