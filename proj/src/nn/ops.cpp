#include "coda/nn/ops.hpp"

#include <Eigen/Core>
#include <cmath>
#include <numbers>

namespace coda::nn {

namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MapMat = Eigen::Map<RowMat>;
using CMapMat = Eigen::Map<const RowMat>;

Tape& same_tape(const Var& a, const Var& b) {
  if (a.tape() != b.tape() || a.tape() == nullptr) throw std::invalid_argument("operands on different tapes");
  return *a.tape();
}

void require_same_shape(const Tensor& a, const Tensor& b, const char* op) {
  if (!a.same_shape(b)) {
    throw ShapeError(std::string(op) + ": shape mismatch " + a.shape_string() + " vs " + b.shape_string());
  }
}

// Elementwise unary op with derivative expressed through input x and output y.
template <class F, class DF>
Var unary(const Var& a, F f, DF df) {
  Tape& t = *a.tape();
  const Tensor& x = a.value();
  Tensor y(x.shape());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = f(x[i]);
  const int ia = a.id();
  return t.record(std::move(y), {ia}, [ia, df](Tape& tp, int self) {
    if (!tp.requires_grad(ia)) return;
    const Tensor& g = tp.grad(self);
    const Tensor& xin = tp.value(ia);
    const Tensor& yout = tp.value(self);
    Tensor& ga = tp.grad(ia);
    for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * df(xin[i], yout[i]);
  });
}

struct MatDims {
  int batch, m, k, n;
};

}  // namespace

double gelu_value(double x) { return 0.5 * x * (1.0 + std::erf(x / std::numbers::sqrt2)); }

double gelu_derivative(double x) {
  const double cdf = 0.5 * (1.0 + std::erf(x / std::numbers::sqrt2));
  const double pdf = std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
  return cdf + x * pdf;
}

Var matmul(const Var& a, const Var& b) {
  Tape& t = same_tape(a, b);
  const Tensor& A = a.value();
  const Tensor& B = b.value();
  MatDims d{};
  if (A.rank() == 2 && B.rank() == 2) {
    d = {1, A.dim(0), A.dim(1), B.dim(1)};
    if (B.dim(0) != d.k) throw ShapeError("matmul: " + A.shape_string() + " x " + B.shape_string());
  } else if (A.rank() == 3 && B.rank() == 3) {
    d = {A.dim(0), A.dim(1), A.dim(2), B.dim(2)};
    if (B.dim(0) != d.batch || B.dim(1) != d.k) {
      throw ShapeError("matmul: " + A.shape_string() + " x " + B.shape_string());
    }
  } else {
    throw ShapeError("matmul: unsupported ranks " + A.shape_string() + " x " + B.shape_string());
  }
  Tensor C = A.rank() == 2 ? Tensor({d.m, d.n}) : Tensor({d.batch, d.m, d.n});
  const std::size_t sa = static_cast<std::size_t>(d.m) * d.k;
  const std::size_t sb = static_cast<std::size_t>(d.k) * d.n;
  const std::size_t sc = static_cast<std::size_t>(d.m) * d.n;
  for (int bi = 0; bi < d.batch; ++bi) {
    MapMat(C.ptr() + bi * sc, d.m, d.n).noalias() =
        CMapMat(A.ptr() + bi * sa, d.m, d.k) * CMapMat(B.ptr() + bi * sb, d.k, d.n);
  }
  const int ia = a.id();
  const int ib = b.id();
  return t.record(std::move(C), {ia, ib}, [ia, ib, d, sa, sb, sc](Tape& tp, int self) {
    const Tensor& G = tp.grad(self);
    for (int bi = 0; bi < d.batch; ++bi) {
      CMapMat g(G.ptr() + bi * sc, d.m, d.n);
      if (tp.requires_grad(ia)) {
        MapMat(tp.grad(ia).ptr() + bi * sa, d.m, d.k).noalias() +=
            g * CMapMat(tp.value(ib).ptr() + bi * sb, d.k, d.n).transpose();
      }
      if (tp.requires_grad(ib)) {
        MapMat(tp.grad(ib).ptr() + bi * sb, d.k, d.n).noalias() +=
            CMapMat(tp.value(ia).ptr() + bi * sa, d.m, d.k).transpose() * g;
      }
    }
  });
}

Var transpose(const Var& a) {
  Tape& t = *a.tape();
  const Tensor& A = a.value();
  if (A.rank() != 2 && A.rank() != 3) throw ShapeError("transpose: rank must be 2 or 3");
  const int batch = A.rank() == 3 ? A.dim(0) : 1;
  const int r = A.dim(-2);
  const int c = A.dim(-1);
  Tensor T = A.rank() == 2 ? Tensor({c, r}) : Tensor({batch, c, r});
  const std::size_t s = static_cast<std::size_t>(r) * c;
  for (int bi = 0; bi < batch; ++bi) {
    MapMat(T.ptr() + bi * s, c, r) = CMapMat(A.ptr() + bi * s, r, c).transpose();
  }
  const int ia = a.id();
  return t.record(std::move(T), {ia}, [ia, batch, r, c, s](Tape& tp, int self) {
    if (!tp.requires_grad(ia)) return;
    const Tensor& G = tp.grad(self);
    Tensor& ga = tp.grad(ia);
    for (int bi = 0; bi < batch; ++bi) {
      MapMat(ga.ptr() + bi * s, r, c) += CMapMat(G.ptr() + bi * s, c, r).transpose();
    }
  });
}

Var reshape(const Var& a, std::vector<int> shape) {
  Tape& t = *a.tape();
  Tensor out = a.value().reshaped(std::move(shape));
  const int ia = a.id();
  return t.record(std::move(out), {ia}, [ia](Tape& tp, int self) {
    if (!tp.requires_grad(ia)) return;
    const Tensor& g = tp.grad(self);
    Tensor& ga = tp.grad(ia);
    for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i];
  });
}

namespace {

template <class F, class DA, class DB>
Var binary(const Var& a, const Var& b, const char* name, F f, DA da, DB db) {
  Tape& t = same_tape(a, b);
  const Tensor& A = a.value();
  const Tensor& B = b.value();
  require_same_shape(A, B, name);
  Tensor C(A.shape());
  for (std::size_t i = 0; i < A.size(); ++i) C[i] = f(A[i], B[i]);
  const int ia = a.id();
  const int ib = b.id();
  return t.record(std::move(C), {ia, ib}, [ia, ib, da, db](Tape& tp, int self) {
    const Tensor& g = tp.grad(self);
    const Tensor& x = tp.value(ia);
    const Tensor& y = tp.value(ib);
    if (tp.requires_grad(ia)) {
      Tensor& gx = tp.grad(ia);
      for (std::size_t i = 0; i < g.size(); ++i) gx[i] += g[i] * da(x[i], y[i]);
    }
    if (tp.requires_grad(ib)) {
      Tensor& gy = tp.grad(ib);
      for (std::size_t i = 0; i < g.size(); ++i) gy[i] += g[i] * db(x[i], y[i]);
    }
  });
}

}  // namespace

Var add(const Var& a, const Var& b) {
  return binary(
      a, b, "add", [](double x, double y) { return x + y; }, [](double, double) { return 1.0; },
      [](double, double) { return 1.0; });
}

Var sub(const Var& a, const Var& b) {
  return binary(
      a, b, "sub", [](double x, double y) { return x - y; }, [](double, double) { return 1.0; },
      [](double, double) { return -1.0; });
}

Var mul(const Var& a, const Var& b) {
  return binary(
      a, b, "mul", [](double x, double y) { return x * y; }, [](double, double y) { return y; },
      [](double x, double) { return x; });
}

Var add_bias(const Var& a, const Var& bias) {
  Tape& t = same_tape(a, bias);
  const Tensor& A = a.value();
  const Tensor& b = bias.value();
  if (b.rank() != 1 || A.rank() < 1 || A.dim(-1) != b.dim(0)) {
    throw ShapeError("add_bias: " + A.shape_string() + " + " + b.shape_string());
  }
  const int n = b.dim(0);
  Tensor C = A;
  for (std::size_t i = 0; i < C.size(); ++i) C[i] += b[i % n];
  const int ia = a.id();
  const int ib = bias.id();
  return t.record(std::move(C), {ia, ib}, [ia, ib, n](Tape& tp, int self) {
    const Tensor& g = tp.grad(self);
    if (tp.requires_grad(ia)) {
      Tensor& ga = tp.grad(ia);
      for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i];
    }
    if (tp.requires_grad(ib)) {
      Tensor& gb = tp.grad(ib);
      for (std::size_t i = 0; i < g.size(); ++i) gb[i % n] += g[i];
    }
  });
}

Var scale(const Var& a, double factor) {
  return unary(a, [factor](double x) { return factor * x; }, [factor](double, double) { return factor; });
}

Var add_scalar(const Var& a, double value) {
  return unary(a, [value](double x) { return x + value; }, [](double, double) { return 1.0; });
}

Var tanh(const Var& a) {
  return unary(a, [](double x) { return std::tanh(x); }, [](double, double y) { return 1.0 - y * y; });
}

Var relu(const Var& a) {
  return unary(a, [](double x) { return x > 0.0 ? x : 0.0; }, [](double x, double) { return x > 0.0 ? 1.0 : 0.0; });
}

Var sigmoid(const Var& a) {
  return unary(
      a, [](double x) { return 1.0 / (1.0 + std::exp(-x)); }, [](double, double y) { return y * (1.0 - y); });
}

Var gelu(const Var& a) {
  return unary(a, [](double x) { return gelu_value(x); }, [](double x, double) { return gelu_derivative(x); });
}

Var square(const Var& a) {
  return unary(a, [](double x) { return x * x; }, [](double x, double) { return 2.0 * x; });
}

Var abs(const Var& a) {
  return unary(
      a, [](double x) { return std::fabs(x); },
      [](double x, double) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); });
}

Var sqrt(const Var& a) {
  return unary(a, [](double x) { return std::sqrt(x); }, [](double, double y) { return 0.5 / y; });
}

Var softmax(const Var& a) {
  Tape& t = *a.tape();
  const Tensor& X = a.value();
  if (X.rank() < 1) throw ShapeError("softmax: needs rank >= 1");
  const int n = X.dim(-1);
  const std::size_t rows = X.size() / static_cast<std::size_t>(n);
  Tensor Y(X.shape());
  for (std::size_t r = 0; r < rows; ++r) {
    const double* x = X.ptr() + r * n;
    double* y = Y.ptr() + r * n;
    double mx = x[0];
    for (int j = 1; j < n; ++j) mx = std::max(mx, x[j]);
    double z = 0.0;
    for (int j = 0; j < n; ++j) z += (y[j] = std::exp(x[j] - mx));
    for (int j = 0; j < n; ++j) y[j] /= z;
  }
  const int ia = a.id();
  return t.record(std::move(Y), {ia}, [ia, n, rows](Tape& tp, int self) {
    if (!tp.requires_grad(ia)) return;
    const Tensor& G = tp.grad(self);
    const Tensor& Yv = tp.value(self);
    Tensor& ga = tp.grad(ia);
    for (std::size_t r = 0; r < rows; ++r) {
      const double* g = G.ptr() + r * n;
      const double* y = Yv.ptr() + r * n;
      double dot = 0.0;
      for (int j = 0; j < n; ++j) dot += g[j] * y[j];
      double* out = ga.ptr() + r * n;
      for (int j = 0; j < n; ++j) out[j] += y[j] * (g[j] - dot);
    }
  });
}

Var slice_last(const Var& a, int begin, int end) {
  Tape& t = *a.tape();
  const Tensor& X = a.value();
  const int n = X.dim(-1);
  if (begin < 0 || end > n || begin >= end) throw ShapeError("slice_last: bad range");
  const int w = end - begin;
  const std::size_t rows = X.size() / static_cast<std::size_t>(n);
  std::vector<int> shape = X.shape();
  shape.back() = w;
  Tensor Y(shape);
  for (std::size_t r = 0; r < rows; ++r) {
    for (int j = 0; j < w; ++j) Y[r * w + j] = X[r * n + begin + j];
  }
  const int ia = a.id();
  return t.record(std::move(Y), {ia}, [ia, n, w, begin, rows](Tape& tp, int self) {
    if (!tp.requires_grad(ia)) return;
    const Tensor& g = tp.grad(self);
    Tensor& ga = tp.grad(ia);
    for (std::size_t r = 0; r < rows; ++r) {
      for (int j = 0; j < w; ++j) ga[r * n + begin + j] += g[r * w + j];
    }
  });
}

Var concat_last(const std::vector<Var>& parts) {
  if (parts.empty()) throw ShapeError("concat_last: no operands");
  Tape& t = *parts.front().tape();
  const Tensor& first = parts.front().value();
  std::vector<int> lead(first.shape().begin(), first.shape().end() - 1);
  std::vector<int> widths;
  std::vector<int> ids;
  int total = 0;
  for (const auto& p : parts) {
    if (p.tape() != &t) throw std::invalid_argument("concat_last: operands on different tapes");
    const Tensor& v = p.value();
    if (std::vector<int>(v.shape().begin(), v.shape().end() - 1) != lead) {
      throw ShapeError("concat_last: leading shapes differ");
    }
    widths.push_back(v.dim(-1));
    ids.push_back(p.id());
    total += v.dim(-1);
  }
  std::vector<int> shape = lead;
  shape.push_back(total);
  Tensor Y(shape);
  const std::size_t rows = Y.size() / static_cast<std::size_t>(total);
  int offset = 0;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    const Tensor& v = parts[k].value();
    for (std::size_t r = 0; r < rows; ++r) {
      for (int j = 0; j < widths[k]; ++j) Y[r * total + offset + j] = v[r * widths[k] + j];
    }
    offset += widths[k];
  }
  return t.record(std::move(Y), ids, [ids, widths, total, rows](Tape& tp, int self) {
    const Tensor& g = tp.grad(self);
    int off = 0;
    for (std::size_t k = 0; k < ids.size(); ++k) {
      if (tp.requires_grad(ids[k])) {
        Tensor& gk = tp.grad(ids[k]);
        for (std::size_t r = 0; r < rows; ++r) {
          for (int j = 0; j < widths[k]; ++j) gk[r * widths[k] + j] += g[r * total + off + j];
        }
      }
      off += widths[k];
    }
  });
}

Var sum(const Var& a) {
  Tape& t = *a.tape();
  const Tensor& X = a.value();
  double s = 0.0;
  for (double v : X.data()) s += v;
  const int ia = a.id();
  return t.record(Tensor::scalar(s), {ia}, [ia](Tape& tp, int self) {
    if (!tp.requires_grad(ia)) return;
    const double g = tp.grad(self)[0];
    Tensor& ga = tp.grad(ia);
    for (std::size_t i = 0; i < ga.size(); ++i) ga[i] += g;
  });
}

Var mean(const Var& a) {
  const auto n = static_cast<double>(a.value().size());
  return scale(sum(a), 1.0 / n);
}

}  // namespace coda::nn
