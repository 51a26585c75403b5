// Copyright 2026 The asgcap Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "asgcap/numcore/ops.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "asgcap/common/error.h"

namespace asgcap::num {
namespace {

void require(bool ok, std::string_view op, const std::string& msg) {
  if (!ok) throw ContractError(std::string(op) + ": " + msg);
}

std::string shapes(const Tensor& a, const Tensor& b) {
  return shape_string(a.shape()) + " vs " + shape_string(b.shape());
}

// C(n x m) += A(n x k) * B(k x m)
void gemm_acc(const double* a, const double* b, double* c, std::size_t n, std::size_t k,
              std::size_t m) {
  for (std::size_t i = 0; i < n; ++i) {
    double* ci = c + i * m;
    const double* ai = a + i * k;
    for (std::size_t p = 0; p < k; ++p) {
      const double aip = ai[p];
      if (aip == 0.0) continue;
      const double* bp = b + p * m;
      for (std::size_t j = 0; j < m; ++j) ci[j] += aip * bp[j];
    }
  }
}

// Four partial sums keep the dependency chain short enough to pipeline.
double dot(const double* x, const double* y, std::size_t n) {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    s0 += x[j] * y[j];
    s1 += x[j + 1] * y[j + 1];
    s2 += x[j + 2] * y[j + 2];
    s3 += x[j + 3] * y[j + 3];
  }
  for (; j < n; ++j) s0 += x[j] * y[j];
  return (s0 + s1) + (s2 + s3);
}

template <typename F, typename D>
Var unary(std::string_view op, Var x, F f, D dfdx) {
  Var in[] = {x};
  return x.tape().record(
      op, in,
      [f](std::span<const Tensor* const> v) {
        Tensor out(v[0]->shape());
        const double* src = v[0]->data();
        double* dst = out.data();
        for (std::size_t i = 0; i < out.size(); ++i) dst[i] = f(src[i]);
        return out;
      },
      [dfdx](const BackwardArgs& a) {
        auto& dx = *a.input_adjoints[0];
        const double* xs = a.inputs[0]->data();
        const double* ys = a.output.data();
        for (std::size_t i = 0; i < dx.size(); ++i) {
          dx[i] += a.output_adjoint[i] * dfdx(xs[i], ys[i]);
        }
      });
}

double stable_sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace

Var matmul(Var a, Var b) {
  const Tensor& ta = a.value();
  const Tensor& tb = b.value();
  require(ta.rank() <= 2 && tb.rank() <= 2, "matmul", "operands must be rank 1 or 2");
  const std::size_t n = ta.rank() == 2 ? ta.shape()[0] : 1;
  const std::size_t k = ta.cols();
  const std::size_t kb = tb.shape()[0];
  const std::size_t m = tb.rank() == 2 ? tb.shape()[1] : 1;
  require(k == kb, "matmul", "inner dimensions differ: " + shapes(ta, tb));
  Shape out_shape;
  if (ta.rank() == 2 && tb.rank() == 2) {
    out_shape = {n, m};
  } else if (ta.rank() == 2) {
    out_shape = {n};
  } else {
    out_shape = {m};
  }
  Var in[] = {a, b};
  return a.tape().record(
      "matmul", in,
      [n, k, m, out_shape](std::span<const Tensor* const> v) {
        Tensor out(out_shape);
        gemm_acc(v[0]->data(), v[1]->data(), out.data(), n, k, m);
        return out;
      },
      [n, k, m](const BackwardArgs& g) {
        const double* A = g.inputs[0]->data();
        const double* B = g.inputs[1]->data();
        const double* dC = g.output_adjoint.data();
        if (auto* dA = g.input_adjoints[0]) {
          // dA = dC * B^T
          for (std::size_t i = 0; i < n; ++i) {
            const double* dci = dC + i * m;
            for (std::size_t p = 0; p < k; ++p) (*dA)[i * k + p] += dot(dci, B + p * m, m);
          }
        }
        if (auto* dB = g.input_adjoints[1]) {
          // dB = A^T * dC
          double* db = dB->data();
          for (std::size_t i = 0; i < n; ++i) {
            const double* dci = dC + i * m;
            for (std::size_t p = 0; p < k; ++p) {
              const double aip = A[i * k + p];
              if (aip == 0.0) continue;
              double* dbp = db + p * m;
              for (std::size_t j = 0; j < m; ++j) dbp[j] += aip * dci[j];
            }
          }
        }
      });
}

namespace {

template <typename F>
Var binary_same_shape(std::string_view op, Var a, Var b, F f, double sign_b, bool product) {
  require(a.shape() == b.shape(), op, "shape mismatch " + shapes(a.value(), b.value()));
  Var in[] = {a, b};
  return a.tape().record(
      op, in,
      [f](std::span<const Tensor* const> v) {
        Tensor out(v[0]->shape());
        const double* x = v[0]->data();
        const double* y = v[1]->data();
        double* o = out.data();
        for (std::size_t i = 0; i < out.size(); ++i) o[i] = f(x[i], y[i]);
        return out;
      },
      [sign_b, product](const BackwardArgs& g) {
        const auto& dy = g.output_adjoint;
        const double* x = g.inputs[0]->data();
        const double* y = g.inputs[1]->data();
        if (auto* da = g.input_adjoints[0]) {
          for (std::size_t i = 0; i < dy.size(); ++i) (*da)[i] += product ? dy[i] * y[i] : dy[i];
        }
        if (auto* db = g.input_adjoints[1]) {
          for (std::size_t i = 0; i < dy.size(); ++i) {
            (*db)[i] += product ? dy[i] * x[i] : sign_b * dy[i];
          }
        }
      });
}

}  // namespace

Var add(Var a, Var b) {
  return binary_same_shape("add", a, b, [](double x, double y) { return x + y; }, 1.0, false);
}

Var sub(Var a, Var b) {
  return binary_same_shape("sub", a, b, [](double x, double y) { return x - y; }, -1.0, false);
}

Var mul(Var a, Var b) {
  return binary_same_shape("mul", a, b, [](double x, double y) { return x * y; }, 1.0, true);
}

Var add_row(Var m, Var v) {
  require(m.value().rank() == 2 && v.value().rank() == 1 && m.value().cols() == v.size(),
          "add_row", "expected n x k and k, got " + shapes(m.value(), v.value()));
  Var in[] = {m, v};
  return m.tape().record(
      "add_row", in,
      [](std::span<const Tensor* const> x) {
        Tensor out = *x[0];
        const std::size_t cols = out.cols();
        for (std::size_t r = 0; r < out.rows(); ++r) {
          for (std::size_t c = 0; c < cols; ++c) out.at(r, c) += (*x[1])[c];
        }
        return out;
      },
      [](const BackwardArgs& g) {
        const std::size_t cols = g.output.cols();
        const std::size_t rows = g.output.rows();
        if (auto* dm = g.input_adjoints[0]) {
          for (std::size_t i = 0; i < dm->size(); ++i) (*dm)[i] += g.output_adjoint[i];
        }
        if (auto* dv = g.input_adjoints[1]) {
          for (std::size_t r = 0; r < rows; ++r) {
            for (std::size_t c = 0; c < cols; ++c) (*dv)[c] += g.output_adjoint[r * cols + c];
          }
        }
      });
}

Var mul_rows(Var m, Var v) {
  require(m.value().rank() == 2 && v.value().rank() == 1 && m.value().rows() == v.size(),
          "mul_rows", "expected n x k and n, got " + shapes(m.value(), v.value()));
  Var in[] = {m, v};
  return m.tape().record(
      "mul_rows", in,
      [](std::span<const Tensor* const> x) {
        Tensor out = *x[0];
        const std::size_t cols = out.cols();
        for (std::size_t r = 0; r < out.rows(); ++r) {
          const double s = (*x[1])[r];
          for (std::size_t c = 0; c < cols; ++c) out.at(r, c) *= s;
        }
        return out;
      },
      [](const BackwardArgs& g) {
        const Tensor& mat = *g.inputs[0];
        const Tensor& vec = *g.inputs[1];
        const std::size_t cols = mat.cols();
        for (std::size_t r = 0; r < mat.rows(); ++r) {
          double acc = 0.0;
          for (std::size_t c = 0; c < cols; ++c) {
            const double dy = g.output_adjoint[r * cols + c];
            if (auto* dm = g.input_adjoints[0]) (*dm)[r * cols + c] += dy * vec[r];
            acc += dy * mat.at(r, c);
          }
          if (auto* dv = g.input_adjoints[1]) (*dv)[r] += acc;
        }
      });
}

Var scale(Var x, Var s) {
  require(s.size() == 1, "scale", "scale factor must have one element, got " +
                                      shape_string(s.shape()));
  Var in[] = {x, s};
  return x.tape().record(
      "scale", in,
      [](std::span<const Tensor* const> v) {
        Tensor out = *v[0];
        const double c = (*v[1])[0];
        for (double& e : out.values()) e *= c;
        return out;
      },
      [](const BackwardArgs& g) {
        const Tensor& xv = *g.inputs[0];
        const double c = (*g.inputs[1])[0];
        double acc = 0.0;
        for (std::size_t i = 0; i < xv.size(); ++i) {
          if (auto* dx = g.input_adjoints[0]) (*dx)[i] += c * g.output_adjoint[i];
          acc += xv[i] * g.output_adjoint[i];
        }
        if (auto* ds = g.input_adjoints[1]) (*ds)[0] += acc;
      });
}

Var scalar_mul(Var x, double c) {
  Var in[] = {x};
  return x.tape().record(
      "scalar_mul", in,
      [c](std::span<const Tensor* const> v) {
        Tensor out = *v[0];
        for (double& e : out.values()) e *= c;
        return out;
      },
      [c](const BackwardArgs& g) {
        auto& dx = *g.input_adjoints[0];
        for (std::size_t i = 0; i < dx.size(); ++i) dx[i] += c * g.output_adjoint[i];
      });
}

Var add_scalar(Var x, double c) {
  Var in[] = {x};
  return x.tape().record(
      "add_scalar", in,
      [c](std::span<const Tensor* const> v) {
        Tensor out = *v[0];
        for (double& e : out.values()) e += c;
        return out;
      },
      [](const BackwardArgs& g) {
        auto& dx = *g.input_adjoints[0];
        for (std::size_t i = 0; i < dx.size(); ++i) dx[i] += g.output_adjoint[i];
      });
}

Var concat(std::span<const Var> parts) {
  require(!parts.empty(), "concat", "no inputs");
  const std::size_t rank = parts[0].value().rank();
  require(rank <= 2, "concat", "operands must be rank 1 or 2");
  std::size_t total = 0;
  for (const Var& p : parts) {
    require(p.value().rank() == rank, "concat", "mixed ranks");
    if (rank == 2) {
      require(p.value().cols() == parts[0].value().cols(), "concat",
              "column mismatch " + shapes(parts[0].value(), p.value()));
      total += p.value().rows();
    } else {
      total += p.size();
    }
  }
  Shape out_shape = rank == 2 ? Shape{total, parts[0].value().cols()} : Shape{total};
  return parts[0].tape().record(
      "concat", parts,
      [out_shape](std::span<const Tensor* const> v) {
        Tensor out(out_shape);
        double* dst = out.data();
        for (const Tensor* t : v) dst = std::copy(t->data(), t->data() + t->size(), dst);
        return out;
      },
      [](const BackwardArgs& g) {
        std::size_t offset = 0;
        for (std::size_t k = 0; k < g.inputs.size(); ++k) {
          const std::size_t n = g.inputs[k]->size();
          if (auto* d = g.input_adjoints[k]) {
            for (std::size_t i = 0; i < n; ++i) (*d)[i] += g.output_adjoint[offset + i];
          }
          offset += n;
        }
      });
}

Var concat(std::initializer_list<Var> parts) {
  return concat(std::span<const Var>(parts.begin(), parts.size()));
}

Var slice(Var x, std::size_t begin, std::size_t end) {
  const Tensor& t = x.value();
  require(t.rank() <= 2, "slice", "operand must be rank 1 or 2");
  const std::size_t extent = t.rank() == 2 ? t.rows() : t.size();
  require(begin < end && end <= extent, "slice",
          "range [" + std::to_string(begin) + ", " + std::to_string(end) + ") outside " +
              shape_string(t.shape()));
  const std::size_t stride = t.rank() == 2 ? t.cols() : 1;
  Shape out_shape = t.rank() == 2 ? Shape{end - begin, t.cols()} : Shape{end - begin};
  const std::size_t lo = begin * stride;
  const std::size_t hi = end * stride;
  Var in[] = {x};
  return x.tape().record(
      "slice", in,
      [out_shape, lo, hi](std::span<const Tensor* const> v) {
        return Tensor(out_shape, std::vector<double>(v[0]->data() + lo, v[0]->data() + hi));
      },
      [lo, hi](const BackwardArgs& g) {
        auto& dx = *g.input_adjoints[0];
        for (std::size_t i = lo; i < hi; ++i) dx[i] += g.output_adjoint[i - lo];
      });
}

Var reshape(Var x, Shape shape) {
  require(shape_numel(shape) == x.size(), "reshape",
          "cannot view " + shape_string(x.shape()) + " as " + shape_string(shape));
  Var in[] = {x};
  return x.tape().record(
      "reshape", in,
      [shape](std::span<const Tensor* const> v) {
        return Tensor(shape, std::vector<double>(v[0]->values().begin(), v[0]->values().end()));
      },
      [](const BackwardArgs& g) {
        auto& dx = *g.input_adjoints[0];
        for (std::size_t i = 0; i < dx.size(); ++i) dx[i] += g.output_adjoint[i];
      });
}

Var embedding(Var table, std::size_t index) {
  const Tensor& t = table.value();
  require(t.rank() == 2, "embedding", "table must be a matrix");
  require(index < t.rows(), "embedding",
          "index " + std::to_string(index) + " outside table " + shape_string(t.shape()));
  const std::size_t cols = t.cols();
  Var in[] = {table};
  return table.tape().record(
      "embedding", in,
      [index, cols](std::span<const Tensor* const> v) {
        const double* row = v[0]->data() + index * cols;
        return Tensor({cols}, std::vector<double>(row, row + cols));
      },
      [index, cols](const BackwardArgs& g) {
        auto& dt = *g.input_adjoints[0];
        for (std::size_t c = 0; c < cols; ++c) dt[index * cols + c] += g.output_adjoint[c];
      });
}

Var tanh(Var x) {
  return unary(
      "tanh", x, [](double v) { return std::tanh(v); },
      [](double, double y) { return 1.0 - y * y; });
}

Var sigmoid(Var x) {
  return unary("sigmoid", x, stable_sigmoid, [](double, double y) { return y * (1.0 - y); });
}

Var relu(Var x) {
  return unary(
      "relu", x, [](double v) { return v > 0.0 ? v : 0.0; },
      [](double v, double) { return v > 0.0 ? 1.0 : 0.0; });
}

Var softmax(Var x) {
  require(x.value().rank() <= 2, "softmax", "operand must be rank 1 or 2");
  Var in[] = {x};
  return x.tape().record(
      "softmax", in,
      [](std::span<const Tensor* const> v) {
        Tensor out = *v[0];
        const std::size_t cols = out.cols();
        for (std::size_t r = 0; r < out.rows(); ++r) {
          double* row = out.data() + r * cols;
          const double mx = *std::max_element(row, row + cols);
          double total = 0.0;
          for (std::size_t c = 0; c < cols; ++c) {
            row[c] = std::exp(row[c] - mx);
            total += row[c];
          }
          for (std::size_t c = 0; c < cols; ++c) row[c] /= total;
        }
        return out;
      },
      [](const BackwardArgs& g) {
        auto& dx = *g.input_adjoints[0];
        const std::size_t cols = g.output.cols();
        for (std::size_t r = 0; r < g.output.rows(); ++r) {
          const double* y = g.output.data() + r * cols;
          const double* dy = g.output_adjoint.data() + r * cols;
          double dot = 0.0;
          for (std::size_t c = 0; c < cols; ++c) dot += y[c] * dy[c];
          for (std::size_t c = 0; c < cols; ++c) dx[r * cols + c] += y[c] * (dy[c] - dot);
        }
      });
}

Var sum(Var x) {
  Var in[] = {x};
  return x.tape().record(
      "sum", in,
      [](std::span<const Tensor* const> v) {
        double total = 0.0;
        for (double e : v[0]->values()) total += e;
        return Tensor::scalar(total);
      },
      [](const BackwardArgs& g) {
        auto& dx = *g.input_adjoints[0];
        for (double& d : dx) d += g.output_adjoint[0];
      });
}

Var mean(Var x) {
  const double inv = 1.0 / static_cast<double>(x.size());
  Var in[] = {x};
  return x.tape().record(
      "mean", in,
      [inv](std::span<const Tensor* const> v) {
        double total = 0.0;
        for (double e : v[0]->values()) total += e;
        return Tensor::scalar(total * inv);
      },
      [inv](const BackwardArgs& g) {
        auto& dx = *g.input_adjoints[0];
        for (double& d : dx) d += g.output_adjoint[0] * inv;
      });
}

Var mean_rows(Var x) {
  require(x.value().rank() == 2, "mean_rows", "operand must be a matrix");
  const std::size_t rows = x.value().rows();
  const std::size_t cols = x.value().cols();
  const double inv = 1.0 / static_cast<double>(rows);
  Var in[] = {x};
  return x.tape().record(
      "mean_rows", in,
      [rows, cols, inv](std::span<const Tensor* const> v) {
        Tensor out({cols});
        for (std::size_t r = 0; r < rows; ++r) {
          for (std::size_t c = 0; c < cols; ++c) out[c] += v[0]->at(r, c);
        }
        for (double& e : out.values()) e *= inv;
        return out;
      },
      [rows, cols, inv](const BackwardArgs& g) {
        auto& dx = *g.input_adjoints[0];
        for (std::size_t r = 0; r < rows; ++r) {
          for (std::size_t c = 0; c < cols; ++c) dx[r * cols + c] += g.output_adjoint[c] * inv;
        }
      });
}

Var normalize(Var x) {
  require(x.value().rank() == 1, "normalize", "operand must be a vector");
  Var in[] = {x};
  return x.tape().record(
      "normalize", in,
      [](std::span<const Tensor* const> v) {
        double total = 0.0;
        for (double e : v[0]->values()) total += e;
        if (!(total > 0.0)) throw NumericError("normalize: non-positive total mass");
        Tensor out = *v[0];
        for (double& e : out.values()) e /= total;
        return out;
      },
      [](const BackwardArgs& g) {
        auto& dx = *g.input_adjoints[0];
        double total = 0.0;
        for (double e : g.inputs[0]->values()) total += e;
        double dot = 0.0;
        for (std::size_t i = 0; i < dx.size(); ++i) dot += g.output_adjoint[i] * g.output[i];
        for (std::size_t i = 0; i < dx.size(); ++i) dx[i] += (g.output_adjoint[i] - dot) / total;
      });
}

Var cross_entropy(Var logits, std::size_t target) {
  require(logits.value().rank() == 1, "cross_entropy", "logits must be a vector");
  require(target < logits.size(), "cross_entropy",
          "target " + std::to_string(target) + " outside " + shape_string(logits.shape()));
  Var in[] = {logits};
  return logits.tape().record(
      "cross_entropy", in,
      [target](std::span<const Tensor* const> v) {
        const auto z = v[0]->values();
        const double mx = *std::max_element(z.begin(), z.end());
        double total = 0.0;
        for (double e : z) total += std::exp(e - mx);
        return Tensor::scalar(mx + std::log(total) - z[target]);
      },
      [target](const BackwardArgs& g) {
        auto& dx = *g.input_adjoints[0];
        const auto z = g.inputs[0]->values();
        const double mx = *std::max_element(z.begin(), z.end());
        double total = 0.0;
        for (double e : z) total += std::exp(e - mx);
        const double dy = g.output_adjoint[0];
        for (std::size_t i = 0; i < z.size(); ++i) {
          const double p = std::exp(z[i] - mx) / total;
          dx[i] += dy * (p - (i == target ? 1.0 : 0.0));
        }
      });
}

}  // namespace asgcap::num
