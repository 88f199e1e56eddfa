#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "coda/nn/ops.hpp"
#include "coda/nn/tape.hpp"

namespace gradcheck {

using coda::nn::Tape;
using coda::nn::Tensor;
using coda::nn::Var;

inline Tensor random_tensor(std::vector<int> shape, std::mt19937_64& rng, double lo = -1.0, double hi = 1.0) {
  Tensor t(std::move(shape));
  std::uniform_real_distribution<double> u(lo, hi);
  for (auto& v : t.data()) v = u(rng);
  return t;
}

// Max over entries of |analytic - numeric| / max(1, |analytic|, |numeric|).
// `f` maps input Vars to a scalar loss Var.
inline double max_rel_error(const std::function<Var(Tape&, const std::vector<Var>&)>& f, std::vector<Tensor> inputs,
                            double h = 1e-5) {
  std::vector<Tensor> analytic;
  {
    Tape tape;
    std::vector<Var> vars;
    for (const auto& t : inputs) vars.push_back(tape.input(t));
    tape.backward(f(tape, vars));
    for (const auto& v : vars) analytic.push_back(v.grad());
  }
  auto eval = [&](const std::vector<Tensor>& xs) {
    Tape tape(false);
    std::vector<Var> vars;
    for (const auto& t : xs) vars.push_back(tape.constant(t));
    return f(tape, vars).value().item();
  };
  double worst = 0.0;
  for (std::size_t k = 0; k < inputs.size(); ++k) {
    for (std::size_t i = 0; i < inputs[k].size(); ++i) {
      const double orig = inputs[k][i];
      inputs[k][i] = orig + h;
      const double up = eval(inputs);
      inputs[k][i] = orig - h;
      const double down = eval(inputs);
      inputs[k][i] = orig;
      const double num = (up - down) / (2 * h);
      const double ana = analytic[k][i];
      worst = std::max(worst, std::fabs(ana - num) / std::max({1.0, std::fabs(ana), std::fabs(num)}));
    }
  }
  return worst;
}

// Same measure for parameters: `loss` builds the scalar on the given tape and
// must read the parameters through tape.param().
inline double max_param_rel_error(const std::vector<coda::nn::Parameter*>& params,
                                  const std::function<Var(Tape&)>& loss, double h = 1e-6) {
  for (auto* p : params) p->zero_grad();
  {
    Tape tape;
    tape.backward(loss(tape));
  }
  std::vector<Tensor> analytic;
  for (auto* p : params) analytic.push_back(p->grad);
  auto eval = [&] {
    Tape tape(false);
    return loss(tape).value().item();
  };
  double worst = 0.0;
  for (std::size_t k = 0; k < params.size(); ++k) {
    auto& value = params[k]->value;
    for (std::size_t i = 0; i < value.size(); ++i) {
      const double orig = value[i];
      value[i] = orig + h;
      const double up = eval();
      value[i] = orig - h;
      const double down = eval();
      value[i] = orig;
      const double num = (up - down) / (2 * h);
      const double ana = analytic[k][i];
      worst = std::max(worst, std::fabs(ana - num) / std::max({1.0, std::fabs(ana), std::fabs(num)}));
    }
  }
  for (auto* p : params) p->zero_grad();
  return worst;
}

// Contracts a tensor-valued op with fixed random weights to get a scalar loss
// that exercises every output entry with a distinct upstream gradient.
inline Var project(Tape& tape, const Var& y, std::uint64_t seed = 99) {
  std::mt19937_64 rng(seed);
  Var w = tape.constant(random_tensor(y.value().shape(), rng));
  return coda::nn::sum(coda::nn::mul(y, w));
}

}  // namespace gradcheck
