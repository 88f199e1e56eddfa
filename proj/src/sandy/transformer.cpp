#include "coda/sandy/transformer.hpp"

#include <cmath>

#include "coda/nn/ops.hpp"

namespace coda::sandy {

using nn::Var;

void TransformerConfig::validate() const {
  if (width < 1 || key_dim < 1 || hidden < 1) throw std::invalid_argument("transformer: sizes must be positive");
  if (blocks < 1) throw std::invalid_argument("transformer: need at least one block");
}

TransformerModel::TransformerModel(SpacePtr space, Standardizer in, Standardizer out, TransformerConfig config,
                                   std::uint64_t seed)
    : MaskModel(std::move(space), std::move(in), std::move(out)), config_(config) {
  config_.validate();
  std::mt19937_64 rng(seed);
  auto uniform = [&](std::vector<int> shape, int fan_in) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    std::uniform_real_distribution<double> u(-bound, bound);
    Tensor t(std::move(shape));
    for (auto& v : t.data()) v = u(rng);
    return t;
  };
  const int n = space_->num_state_components();
  for (int k = 0; k < space_->num_nodes(); ++k) {
    const int d = space_->node_dim(k);
    embed_w_.emplace_back("embed" + std::to_string(k) + ".w", uniform({d, config_.width}, d));
    embed_b_.emplace_back("embed" + std::to_string(k) + ".b", uniform({config_.width}, d));
  }
  for (int b = 0; b < config_.blocks; ++b) {
    nn::AttentionConfig ac{config_.width, config_.key_dim, config_.width, config_.hidden};
    blocks_.emplace_back(ac, rng, "block" + std::to_string(b));
  }
  for (int i = 0; i < n; ++i) {
    const int d = space_->state_component(i).dim;
    head_w_.emplace_back("head" + std::to_string(i) + ".w", uniform({config_.width, d}, config_.width));
    head_b_.emplace_back("head" + std::to_string(i) + ".b", uniform({d}, config_.width));
  }
}

TransformerModel::Pass TransformerModel::run(nn::Tape& tape, const Var& x) {
  const int batch = x.value().dim(0);
  const int n = space_->num_state_components();
  const int nodes = space_->num_nodes();
  const int ds = space_->state_dim();
  std::vector<Var> tokens;
  for (int k = 0; k < nodes; ++k) {
    const int begin = k < n ? space_->state_offset(k) : ds + space_->action_offset(k - n);
    Var xk = nn::slice_last(x, begin, begin + space_->node_dim(k));
    tokens.push_back(nn::add_bias(nn::matmul(xk, tape.param(embed_w_[k])), tape.param(embed_b_[k])));
  }
  Var h = nn::reshape(nn::concat_last(tokens), {batch, nodes, config_.width});
  Pass pass;
  for (auto& block : blocks_) {
    auto o = block.forward(tape, h);
    pass.attention.push_back(o.a);
    h = o.y;
  }
  Var flat = nn::reshape(h, {batch, nodes * config_.width});
  std::vector<Var> outs;
  for (int i = 0; i < n; ++i) {
    Var hi = nn::slice_last(flat, i * config_.width, (i + 1) * config_.width);
    outs.push_back(nn::add_bias(nn::matmul(hi, tape.param(head_w_[i])), tape.param(head_b_[i])));
  }
  pass.prediction = outs.size() == 1 ? outs.front() : nn::concat_last(outs);
  return pass;
}

Var TransformerModel::forward(nn::Tape& tape, const Var& x) { return run(tape, x).prediction; }

std::vector<nn::Parameter*> TransformerModel::parameters() {
  std::vector<nn::Parameter*> out;
  for (std::size_t k = 0; k < embed_w_.size(); ++k) {
    out.push_back(&embed_w_[k]);
    out.push_back(&embed_b_[k]);
  }
  for (auto& b : blocks_)
    for (auto* p : b.parameters()) out.push_back(p);
  for (std::size_t i = 0; i < head_w_.size(); ++i) {
    out.push_back(&head_w_[i]);
    out.push_back(&head_b_[i]);
  }
  return out;
}

nlohmann::json TransformerModel::hyper_json() const {
  return {{"width", config_.width}, {"key_dim", config_.key_dim}, {"hidden", config_.hidden}, {"blocks", config_.blocks}};
}

Tensor attention_product(const std::vector<Tensor>& attention) {
  if (attention.empty()) throw nn::ShapeError("attention_product: no matrices");
  Tensor p = attention.front();
  const int n = p.dim(0);
  for (std::size_t b = 1; b < attention.size(); ++b) {
    const Tensor& a = attention[b];
    if (a.rank() != 2 || a.dim(0) != n || a.dim(1) != n) throw nn::ShapeError("attention_product: shape mismatch");
    Tensor next({n, n});
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j) next.at(i, j) += a.at(i, k) * p.at(k, j);
    p = std::move(next);
  }
  return p;
}

std::vector<Tensor> TransformerModel::mask_scores(const Tensor& x_raw) {
  if (x_raw.rank() != 2 || x_raw.dim(1) != in_dim()) throw DimensionError("transformer mask: input width mismatch");
  nn::Tape tape(false);
  const Pass pass = run(tape, tape.constant(in_.apply(x_raw)));
  const int nodes = space_->num_nodes();
  const int n = space_->num_state_components();
  std::vector<Tensor> out;
  out.reserve(x_raw.dim(0));
  for (int b = 0; b < x_raw.dim(0); ++b) {
    std::vector<Tensor> per_block;
    for (const auto& a : pass.attention) {
      Tensor m({nodes, nodes});
      for (int i = 0; i < nodes; ++i)
        for (int j = 0; j < nodes; ++j) m.at(i, j) = a.value().at(b, i, j);
      per_block.push_back(std::move(m));
    }
    const Tensor p = attention_product(per_block);  // [output token, input token]
    Tensor scores({nodes, n});
    for (int r = 0; r < nodes; ++r)
      for (int c = 0; c < n; ++c) scores.at(r, c) = p.at(c, r);
    out.push_back(std::move(scores));
  }
  return out;
}

}  // namespace coda::sandy
