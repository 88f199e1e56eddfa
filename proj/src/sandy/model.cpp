#include "coda/sandy/model.hpp"

#include <fstream>

#include "coda/core/space_json.hpp"
#include "coda/nn/checkpoint.hpp"
#include "coda/nn/ops.hpp"
#include "coda/sandy/dynamics.hpp"
#include "coda/sandy/mixture.hpp"
#include "coda/sandy/transformer.hpp"

namespace coda::sandy {

DynamicsModel::DynamicsModel(SpacePtr space, Standardizer in, Standardizer out)
    : space_(std::move(space)), in_(std::move(in)), out_(std::move(out)) {
  if (!space_) throw std::invalid_argument("model: missing space");
  if (in_.dim() != space_->state_dim() + space_->action_dim() || out_.dim() != space_->state_dim()) {
    throw DimensionError("model: standardizers do not match the space");
  }
}

nn::Var DynamicsModel::objective(nn::Tape& tape, const nn::Var& x, const nn::Var& y, const Regularization&) {
  const nn::Var d = nn::sub(forward(tape, x), y);
  return nn::scale(nn::sum(nn::square(d)), 1.0 / x.value().dim(0));
}

Tensor DynamicsModel::predict(const Tensor& x_raw) {
  nn::Tape tape(false);
  const nn::Var y = forward(tape, tape.constant(in_.apply(x_raw)));
  return out_.invert(y.value());
}

FactoredVector DynamicsModel::predict(const FactoredVector& s, const FactoredVector& a) {
  const Tensor y = predict(input_row(s, a));
  return FactoredVector(space_, VectorKind::State, std::vector<double>(y.data().begin(), y.data().end()));
}

LocalMask MaskModel::mask(const FactoredVector& s, const FactoredVector& a, double tau) {
  const auto scores = mask_scores(input_row(s, a));
  return threshold_scores(scores.front(), space_->num_state_components(), space_->num_action_components(), tau);
}

LocalMask threshold_scores(const Tensor& scores, int num_state, int num_action, double tau) {
  if (scores.rank() != 2 || scores.dim(0) != num_state + num_action || scores.dim(1) != num_state) {
    throw DimensionError("threshold_scores: expected [n+m, n] scores, got " + scores.shape_string());
  }
  LocalMask m(num_state, num_action);
  for (int r = 0; r < num_state + num_action; ++r)
    for (int c = 0; c < num_state; ++c)
      if (scores.at(r, c) > tau) m.set(r, c);
  return m;
}

Tensor aggregate_to_components(const FactoredSpace& space, const Tensor& flat) {
  const int n = space.num_state_components();
  const int m = space.num_action_components();
  const int ds = space.state_dim();
  if (flat.rank() != 2 || flat.dim(0) != ds + space.action_dim() || flat.dim(1) != ds) {
    throw DimensionError("aggregate_to_components: flat matrix does not match the space");
  }
  auto row_range = [&](int node) {
    return node < n ? std::pair{space.state_offset(node), space.state_offset(node + 1)}
                    : std::pair{ds + space.action_offset(node - n), ds + space.action_offset(node - n + 1)};
  };
  Tensor out({n + m, n});
  for (int r = 0; r < n + m; ++r) {
    const auto [r0, r1] = row_range(r);
    for (int c = 0; c < n; ++c) {
      double best = 0.0;
      for (int i = r0; i < r1; ++i)
        for (int j = space.state_offset(c); j < space.state_offset(c + 1); ++j) best = std::max(best, flat.at(i, j));
      out.at(r, c) = best;
    }
  }
  return out;
}

nlohmann::json to_json(const Standardizer& s) { return {{"mean", s.mean}, {"scale", s.scale}}; }

Standardizer standardizer_from_json(const nlohmann::json& j) {
  Standardizer s{j.at("mean").get<std::vector<double>>(), j.at("scale").get<std::vector<double>>()};
  if (s.mean.size() != s.scale.size()) throw std::invalid_argument("standardizer json: mean/scale size mismatch");
  return s;
}

void save_model(const std::string& path, DynamicsModel& model) {
  nn::CheckpointHeader h;
  h.kind = model.kind();
  h.config = {{"space", space_to_json(*model.space())},
              {"input_norm", to_json(model.input_norm())},
              {"output_norm", to_json(model.output_norm())},
              {"hyper", model.hyper_json()}};
  nn::save_checkpoint(path, h, model.parameters());
}

std::unique_ptr<DynamicsModel> load_model(const std::string& path) {
  const nn::CheckpointHeader h = nn::peek_checkpoint(path);
  std::unique_ptr<DynamicsModel> model;
  try {
    auto space = space_from_json(h.config.at("space"));
    auto in = standardizer_from_json(h.config.at("input_norm"));
    auto out = standardizer_from_json(h.config.at("output_norm"));
    const auto& hyper = h.config.at("hyper");
    if (h.kind == "mixture") {
      MixtureConfig c;
      c.experts = hyper.at("experts").get<int>();
      c.expert_hidden = hyper.at("expert_hidden").get<std::vector<int>>();
      c.gate_hidden = hyper.at("gate_hidden").get<std::vector<int>>();
      c.expert_activation = nn::activation_from_string(hyper.at("expert_activation").get<std::string>());
      model = std::make_unique<MixtureModel>(space, in, out, c, 0);
    } else if (h.kind == "transformer") {
      TransformerConfig c;
      c.width = hyper.at("width").get<int>();
      c.key_dim = hyper.at("key_dim").get<int>();
      c.hidden = hyper.at("hidden").get<int>();
      c.blocks = hyper.at("blocks").get<int>();
      model = std::make_unique<TransformerModel>(space, in, out, c, 0);
    } else if (h.kind == "mlp") {
      MlpDynamicsConfig c;
      c.hidden = hyper.at("hidden").get<std::vector<int>>();
      c.activation = nn::activation_from_string(hyper.at("activation").get<std::string>());
      model = std::make_unique<MlpDynamics>(space, in, out, c, 0);
    } else {
      throw nn::CheckpointError("load_model: unknown model kind '" + h.kind + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw nn::CheckpointError(std::string("load_model: malformed header: ") + e.what());
  }
  nn::load_checkpoint(path, model->parameters());
  return model;
}

}  // namespace coda::sandy
