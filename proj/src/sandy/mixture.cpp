#include "coda/sandy/mixture.hpp"

#include <cmath>

#include "coda/nn/ops.hpp"

namespace coda::sandy {

using nn::Var;

namespace {

std::vector<int> layer_sizes(int in, const std::vector<int>& hidden, int out) {
  std::vector<int> sizes{in};
  sizes.insert(sizes.end(), hidden.begin(), hidden.end());
  sizes.push_back(out);
  return sizes;
}

}  // namespace

void MixtureConfig::validate() const {
  if (experts < 1) throw std::invalid_argument("mixture: need at least one expert");
  for (int h : expert_hidden)
    if (h < 1) throw std::invalid_argument("mixture: hidden widths must be positive");
  for (int h : gate_hidden)
    if (h < 1) throw std::invalid_argument("mixture: hidden widths must be positive");
  if (expert_activation == nn::Activation::Gelu) {
    throw nn::UnsupportedActivation("mixture: expert activation must have a derivative bounded by 1");
  }
}

MixtureModel::MixtureModel(SpacePtr space, Standardizer in, Standardizer out, MixtureConfig config,
                           std::uint64_t seed)
    : MaskModel(std::move(space), std::move(in), std::move(out)), config_(std::move(config)) {
  config_.validate();
  std::mt19937_64 rng(seed);
  for (int k = 0; k < config_.experts; ++k) {
    experts_.emplace_back(layer_sizes(in_dim(), config_.expert_hidden, out_dim()), config_.expert_activation,
                          nn::Activation::Identity, rng, "expert" + std::to_string(k));
  }
  gate_ = nn::Mlp(layer_sizes(in_dim(), config_.gate_hidden, config_.experts), nn::Activation::Tanh,
                  nn::Activation::Identity, rng, "gate");
}

MixtureModel::Pass MixtureModel::run(nn::Tape& tape, const Var& x) {
  Var logits = gate_.forward(tape, x);
  Var alpha = nn::softmax(logits);
  const Var ones = tape.constant(Tensor({1, out_dim()}, 1.0));
  Var pred;
  for (int k = 0; k < config_.experts; ++k) {
    Var weight = nn::matmul(nn::slice_last(alpha, k, k + 1), ones);  // [B, out]
    Var term = nn::mul(weight, experts_[k].forward(tape, x));
    pred = pred.valid() ? nn::add(pred, term) : term;
  }
  return {pred, logits};
}

Var MixtureModel::forward(nn::Tape& tape, const Var& x) { return run(tape, x).prediction; }

Var MixtureModel::sparsity_term(nn::Tape& tape) {
  Var total;
  for (auto& e : experts_) {
    Var j;
    for (auto& layer : e.layers()) {
      Var w = nn::abs(tape.param(layer.weight));
      j = j.valid() ? nn::matmul(j, w) : w;
    }
    Var s = nn::sum(j);
    total = total.valid() ? nn::add(total, s) : s;
  }
  return nn::scale(total, 1.0 / config_.experts);
}

Var MixtureModel::gate_term(const Var& logits) {
  const int b = logits.value().dim(0);
  const int k = logits.value().dim(1);
  nn::Tape& tape = *logits.tape();
  const Var avg = tape.constant(Tensor({k, 1}, 1.0 / k));
  Var ms = nn::matmul(nn::square(logits), avg);  // [B, 1]
  return nn::scale(nn::sum(nn::sqrt(nn::add_scalar(ms, 1e-12))), 1.0 / b);
}

Var l2_term(nn::Tape& tape, const std::vector<nn::Parameter*>& params) {
  Var total;
  for (auto* p : params) {
    Var s = nn::sum(nn::square(tape.param(*p)));
    total = total.valid() ? nn::add(total, s) : s;
  }
  return nn::sqrt(nn::add_scalar(total, 1e-12));
}

Var MixtureModel::objective(nn::Tape& tape, const Var& x, const Var& y, const Regularization& reg) {
  const Pass pass = run(tape, x);
  Var loss = nn::scale(nn::sum(nn::square(nn::sub(pass.prediction, y))), 1.0 / x.value().dim(0));
  if (reg.lambda1 > 0) loss = nn::add(loss, nn::scale(sparsity_term(tape), reg.lambda1));
  if (reg.lambda2 > 0) loss = nn::add(loss, nn::scale(gate_term(pass.logits), reg.lambda2));
  if (reg.lambda3 > 0) loss = nn::add(loss, nn::scale(l2_term(tape, parameters()), reg.lambda3));
  return loss;
}

std::vector<nn::Parameter*> MixtureModel::parameters() {
  std::vector<nn::Parameter*> out;
  for (auto& e : experts_)
    for (auto* p : e.parameters()) out.push_back(p);
  for (auto* p : gate_.parameters()) out.push_back(p);
  return out;
}

nlohmann::json MixtureModel::hyper_json() const {
  return {{"experts", config_.experts},
          {"expert_hidden", config_.expert_hidden},
          {"gate_hidden", config_.gate_hidden},
          {"expert_activation", nn::to_string(config_.expert_activation)}};
}

Tensor MixtureModel::gate_probabilities(const Tensor& x_raw) {
  nn::Tape tape(false);
  return nn::softmax(gate_.forward(tape, tape.constant(in_.apply(x_raw)))).value();
}

Tensor MixtureModel::flat_jacobian_bound(const Tensor& x_raw_row) {
  const Tensor alpha = gate_probabilities(x_raw_row);
  Tensor j({in_dim(), out_dim()});
  for (int k = 0; k < config_.experts; ++k) {
    const Tensor jk = nn::jacobian_bound(experts_[k]);
    for (std::size_t e = 0; e < j.size(); ++e) j[e] += alpha.at(0, k) * jk[e];
  }
  return j;
}

std::vector<Tensor> MixtureModel::mask_scores(const Tensor& x_raw) {
  if (x_raw.rank() != 2 || x_raw.dim(1) != in_dim()) throw DimensionError("mixture mask: input width mismatch");
  const Tensor alpha = gate_probabilities(x_raw);
  std::vector<Tensor> bounds;
  for (auto& e : experts_) bounds.push_back(nn::jacobian_bound(e));
  std::vector<Tensor> out;
  out.reserve(x_raw.dim(0));
  Tensor j({in_dim(), out_dim()});
  for (int b = 0; b < x_raw.dim(0); ++b) {
    j.fill(0.0);
    for (int k = 0; k < config_.experts; ++k) {
      const double w = alpha.at(b, k);
      for (std::size_t e = 0; e < j.size(); ++e) j[e] += w * bounds[k][e];
    }
    out.push_back(aggregate_to_components(*space_, j));
  }
  return out;
}

}  // namespace coda::sandy
