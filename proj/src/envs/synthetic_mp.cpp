#include "coda/envs/synthetic_mp.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace coda::envs {

namespace {

double gelu(double x) { return 0.5 * x * (1.0 + std::erf(x / std::sqrt(2.0))); }

}  // namespace

void SyntheticMPConfig::validate() const {
  if (block_dims.empty()) throw std::invalid_argument("synthetic MP: need at least one block");
  for (int d : block_dims)
    if (d < 1) throw std::invalid_argument("synthetic MP: block dims must be >= 1");
  if (hidden_units < 1) throw std::invalid_argument("synthetic MP: hidden_units must be >= 1");
  if (epsilon && !(*epsilon > 0.0)) throw std::invalid_argument("synthetic MP: epsilon must be positive");
  if (probe_samples < 1) throw std::invalid_argument("synthetic MP: probe_samples must be >= 1");
}

void SyntheticMP::Net::eval(const double* x, double* y) const {
  std::vector<double> h(b1);
  for (int i = 0; i < in; ++i) {
    const double xi = x[i];
    for (int k = 0; k < hidden; ++k) h[k] += xi * w1[i * hidden + k];
  }
  for (double& v : h) v = gelu(v);
  for (int o = 0; o < out; ++o) {
    double acc = b2[o];
    for (int k = 0; k < hidden; ++k) acc += h[k] * w2[k * out + o];
    y[o] += scale * acc;
  }
}

SyntheticMP::Net SyntheticMP::make_net(int in, int out, Rng& rng) const {
  Net net;
  net.in = in;
  net.hidden = config_.hidden_units;
  net.out = out;
  std::normal_distribution<double> normal(0.0, 1.0);
  const double s1 = 1.0 / std::sqrt(static_cast<double>(in));
  const double s2 = 1.0 / std::sqrt(static_cast<double>(net.hidden));
  net.w1.resize(static_cast<std::size_t>(in) * net.hidden);
  net.b1.resize(net.hidden);
  net.w2.resize(static_cast<std::size_t>(net.hidden) * out);
  net.b2.resize(out);
  for (auto& v : net.w1) v = normal(rng) * s1;
  for (auto& v : net.b1) v = normal(rng) * s1;
  for (auto& v : net.w2) v = normal(rng) * s2;
  for (auto& v : net.b2) v = normal(rng) * s2;
  return net;
}

void SyntheticMP::normalize(Net& net, Rng& probe) const {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> x(net.in), y(net.out);
  net.scale = 1.0;
  double sq = 0.0;
  for (int t = 0; t < config_.probe_samples; ++t) {
    for (auto& v : x) v = normal(probe);
    std::fill(y.begin(), y.end(), 0.0);
    net.eval(x.data(), y.data());
    for (double v : y) sq += v * v;
  }
  const double ms = sq / (static_cast<double>(config_.probe_samples) * net.out);
  net.scale = ms > 0.0 ? 1.0 / std::sqrt(ms) : 1.0;
}

SyntheticMP::SyntheticMP(SyntheticMPConfig config) : config_(std::move(config)) {
  config_.validate();
  const int total = std::accumulate(config_.block_dims.begin(), config_.block_dims.end(), 0);
  std::vector<ComponentSpec> comps;
  for (int i = 0; i < total; ++i) comps.push_back({"s" + std::to_string(i), 1});
  space_ = make_space(std::move(comps), {});
  offsets_.push_back(0);
  for (int d : config_.block_dims) offsets_.push_back(offsets_.back() + d);

  Rng rng(config_.weight_seed);
  Rng probe(config_.weight_seed ^ 0x9e3779b97f4a7c15ULL);
  for (int d : config_.block_dims) {
    local_.push_back(make_net(d, d, rng));
    normalize(local_.back(), probe);
  }
  for (int d : config_.block_dims) {
    global_.push_back(make_net(d, total, rng));
    normalize(global_.back(), probe);
  }
}

bool SyntheticMP::indicator(const FactoredVector& s, int b) const {
  if (!config_.epsilon) return false;
  double sq = 0.0;
  for (int i = offsets_[b]; i < offsets_[b + 1]; ++i) sq += s[i] * s[i];
  return std::sqrt(sq) > *config_.epsilon;
}

StepResult SyntheticMP::step(const FactoredVector& s, const FactoredVector& a) const {
  if (s.kind() != VectorKind::State || s.size() != space_->state_dim()) {
    throw DimensionError("synthetic MP: state must have " + std::to_string(space_->state_dim()) + " values");
  }
  if (a.size() != 0) throw DimensionError("synthetic MP: takes no action");
  const int total = space_->state_dim();
  std::vector<double> next(total, 0.0);
  LocalMask mask(total, 0);
  const double* x = s.values().data();
  for (int b = 0; b < num_blocks(); ++b) {
    const int lo = offsets_[b];
    const int hi = offsets_[b + 1];
    local_[b].eval(x + lo, next.data() + lo);
    const bool fired = indicator(s, b);
    if (fired) global_[b].eval(x + lo, next.data());
    for (int r = lo; r < hi; ++r) {
      if (fired) {
        for (int c = 0; c < total; ++c) mask.set(r, c);
      } else {
        for (int c = lo; c < hi; ++c) mask.set(r, c);
      }
    }
  }
  return {FactoredVector(space_, VectorKind::State, std::move(next)), mask};
}

StepResult SyntheticMP::step(const FactoredVector& s) const {
  return step(s, FactoredVector::zeros(space_, VectorKind::Action));
}

FactoredVector SyntheticMP::reset(Rng& rng) const {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> x(space_->state_dim());
  for (auto& v : x) v = normal(rng);
  return FactoredVector(space_, VectorKind::State, std::move(x));
}

FactoredVector SyntheticMP::sample_action(Rng&) const { return FactoredVector::zeros(space_, VectorKind::Action); }

}  // namespace coda::envs
