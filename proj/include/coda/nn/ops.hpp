#pragma once

#include <vector>

#include "coda/nn/tape.hpp"

namespace coda::nn {

// Differentiable primitives. All operands must live on the same tape.

/// [M,K] x [K,N] -> [M,N], or batched [B,M,K] x [B,K,N] -> [B,M,N].
Var matmul(const Var& a, const Var& b);
/// Swaps the last two axes of a rank-2 or rank-3 tensor.
Var transpose(const Var& a);
Var reshape(const Var& a, std::vector<int> shape);

Var add(const Var& a, const Var& b);
Var sub(const Var& a, const Var& b);
Var mul(const Var& a, const Var& b);
/// Adds a rank-1 bias of size N along the last axis of a [..., N] tensor.
Var add_bias(const Var& a, const Var& bias);
Var scale(const Var& a, double factor);
Var add_scalar(const Var& a, double value);

Var tanh(const Var& a);
Var relu(const Var& a);
Var sigmoid(const Var& a);
/// Exact GELU, x * Phi(x) with the Gaussian CDF.
Var gelu(const Var& a);
Var square(const Var& a);
Var abs(const Var& a);
Var sqrt(const Var& a);

/// Softmax over the last axis.
Var softmax(const Var& a);

/// Columns [begin, end) of the last axis.
Var slice_last(const Var& a, int begin, int end);
/// Concatenation along the last axis; leading shapes must agree.
Var concat_last(const std::vector<Var>& parts);

Var sum(const Var& a);
Var mean(const Var& a);

// Scalar helpers shared by the primitives and their tests.
double gelu_value(double x);
double gelu_derivative(double x);

}  // namespace coda::nn
