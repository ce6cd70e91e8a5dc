#include "aac/numerics/ops.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace aac {

namespace {

using detail::TensorImpl;

TensorImpl& input(const TensorImpl& out, std::size_t i) { return *out.grad_fn->inputs[i]; }

void require_same_shape(const Tensor& a, const Tensor& b, const char* op) {
  if (a.shape() != b.shape()) {
    throw std::invalid_argument(
        fmt::format("{}: shape mismatch {} vs {}", op, shape_str(a.shape()), shape_str(b.shape())));
  }
}

void require_matrix(const Tensor& x, const char* op) {
  if (x.rank() != 2) throw std::invalid_argument(fmt::format("{}: expected a matrix, got {}", op, shape_str(x.shape())));
}

}  // namespace

Tensor add(const Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "add");
  std::vector<double> out(a.data().begin(), a.data().end());
  const auto bd = b.data();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += bd[i];
  return Tensor::make_result(a.shape(), std::move(out), {a, b}, [](const TensorImpl& o) {
    for (std::size_t k = 0; k < 2; ++k) {
      auto& in = input(o, k);
      if (!in.requires_grad) continue;
      for (std::size_t i = 0; i < o.grad.size(); ++i) in.grad[i] += o.grad[i];
    }
  });
}

Tensor sub(const Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "sub");
  std::vector<double> out(a.data().begin(), a.data().end());
  const auto bd = b.data();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= bd[i];
  return Tensor::make_result(a.shape(), std::move(out), {a, b}, [](const TensorImpl& o) {
    auto& pa = input(o, 0);
    auto& pb = input(o, 1);
    if (pa.requires_grad)
      for (std::size_t i = 0; i < o.grad.size(); ++i) pa.grad[i] += o.grad[i];
    if (pb.requires_grad)
      for (std::size_t i = 0; i < o.grad.size(); ++i) pb.grad[i] -= o.grad[i];
  });
}

Tensor mul(const Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "mul");
  std::vector<double> out(a.data().begin(), a.data().end());
  const auto bd = b.data();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= bd[i];
  return Tensor::make_result(a.shape(), std::move(out), {a, b}, [](const TensorImpl& o) {
    auto& pa = input(o, 0);
    auto& pb = input(o, 1);
    if (pa.requires_grad)
      for (std::size_t i = 0; i < o.grad.size(); ++i) pa.grad[i] += o.grad[i] * pb.data[i];
    if (pb.requires_grad)
      for (std::size_t i = 0; i < o.grad.size(); ++i) pb.grad[i] += o.grad[i] * pa.data[i];
  });
}

Tensor scale(const Tensor& x, double factor) {
  std::vector<double> out(x.data().begin(), x.data().end());
  for (double& v : out) v *= factor;
  return Tensor::make_result(x.shape(), std::move(out), {x}, [factor](const TensorImpl& o) {
    auto& px = input(o, 0);
    for (std::size_t i = 0; i < o.grad.size(); ++i) px.grad[i] += factor * o.grad[i];
  });
}

Tensor relu(const Tensor& x) {
  std::vector<double> out(x.data().begin(), x.data().end());
  for (double& v : out) v = v > 0.0 || std::isnan(v) ? v : 0.0;
  return Tensor::make_result(x.shape(), std::move(out), {x}, [](const TensorImpl& o) {
    auto& px = input(o, 0);
    for (std::size_t i = 0; i < o.grad.size(); ++i)
      if (px.data[i] > 0.0) px.grad[i] += o.grad[i];
  });
}

Tensor add_row_vector(const Tensor& x, const Tensor& row) {
  require_matrix(x, "add_row_vector");
  const std::size_t m = x.rows(), n = x.cols();
  if (row.numel() != n) {
    throw std::invalid_argument(
        fmt::format("add_row_vector: row of {} values for {} columns", row.numel(), n));
  }
  std::vector<double> out(x.data().begin(), x.data().end());
  const auto r = row.data();
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) out[i * n + j] += r[j];
  return Tensor::make_result(x.shape(), std::move(out), {x, row}, [m, n](const TensorImpl& o) {
    auto& px = input(o, 0);
    auto& pr = input(o, 1);
    if (px.requires_grad)
      for (std::size_t i = 0; i < o.grad.size(); ++i) px.grad[i] += o.grad[i];
    if (pr.requires_grad)
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) pr.grad[j] += o.grad[i * n + j];
  });
}

namespace {

// c(m x n) += a(m x k) * b(k x n)
void gemm_nn(const double* a, const double* b, double* c, std::size_t m, std::size_t k, std::size_t n) {
  for (std::size_t i = 0; i < m; ++i) {
    double* ci = c + i * n;
    for (std::size_t p = 0; p < k; ++p) {
      const double aip = a[i * k + p];
      if (aip == 0.0) continue;
      const double* bp = b + p * n;
      for (std::size_t j = 0; j < n; ++j) ci[j] += aip * bp[j];
    }
  }
}

// c(m x k) += g(m x n) * b(k x n)^T
void gemm_nt(const double* g, const double* b, double* c, std::size_t m, std::size_t n, std::size_t k) {
  for (std::size_t i = 0; i < m; ++i) {
    const double* gi = g + i * n;
    for (std::size_t p = 0; p < k; ++p) {
      const double* bp = b + p * n;
      double acc = 0.0;
      for (std::size_t j = 0; j < n; ++j) acc += gi[j] * bp[j];
      c[i * k + p] += acc;
    }
  }
}

// c(k x n) += a(m x k)^T * g(m x n)
void gemm_tn(const double* a, const double* g, double* c, std::size_t m, std::size_t k, std::size_t n) {
  for (std::size_t i = 0; i < m; ++i) {
    const double* gi = g + i * n;
    for (std::size_t p = 0; p < k; ++p) {
      const double aip = a[i * k + p];
      if (aip == 0.0) continue;
      double* cp = c + p * n;
      for (std::size_t j = 0; j < n; ++j) cp[j] += aip * gi[j];
    }
  }
}

}  // namespace

Tensor matmul(const Tensor& a, const Tensor& b) {
  require_matrix(a, "matmul");
  require_matrix(b, "matmul");
  const std::size_t m = a.rows(), k = a.cols(), n = b.cols();
  if (b.rows() != k) {
    throw std::invalid_argument(
        fmt::format("matmul: inner dimensions differ, {} * {}", shape_str(a.shape()), shape_str(b.shape())));
  }
  std::vector<double> out(m * n, 0.0);
  gemm_nn(a.data().data(), b.data().data(), out.data(), m, k, n);
  return Tensor::make_result({m, n}, std::move(out), {a, b}, [m, k, n](const TensorImpl& o) {
    auto& pa = input(o, 0);
    auto& pb = input(o, 1);
    if (pa.requires_grad) gemm_nt(o.grad.data(), pb.data.data(), pa.grad.data(), m, n, k);
    if (pb.requires_grad) gemm_tn(pa.data.data(), o.grad.data(), pb.grad.data(), m, k, n);
  });
}

Tensor transpose(const Tensor& x) {
  require_matrix(x, "transpose");
  const std::size_t m = x.rows(), n = x.cols();
  std::vector<double> out(m * n);
  const auto d = x.data();
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) out[j * m + i] = d[i * n + j];
  return Tensor::make_result({n, m}, std::move(out), {x}, [m, n](const TensorImpl& o) {
    auto& px = input(o, 0);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j) px.grad[i * n + j] += o.grad[j * m + i];
  });
}

Tensor sum(const Tensor& x) {
  double total = 0.0;
  for (double v : x.data()) total += v;
  return Tensor::make_result({1}, {total}, {x}, [](const TensorImpl& o) {
    auto& px = input(o, 0);
    for (double& g : px.grad) g += o.grad[0];
  });
}

Tensor slice_cols(const Tensor& x, std::size_t offset, std::size_t count) {
  require_matrix(x, "slice_cols");
  const std::size_t m = x.rows(), n = x.cols();
  if (count == 0 || offset + count > n) {
    throw std::invalid_argument(fmt::format("slice_cols: [{}, {}) outside {} columns", offset, offset + count, n));
  }
  std::vector<double> out(m * count);
  const auto d = x.data();
  for (std::size_t i = 0; i < m; ++i)
    std::copy_n(d.begin() + static_cast<std::ptrdiff_t>(i * n + offset), count, out.begin() + static_cast<std::ptrdiff_t>(i * count));
  return Tensor::make_result({m, count}, std::move(out), {x}, [m, n, offset, count](const TensorImpl& o) {
    auto& px = input(o, 0);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < count; ++j) px.grad[i * n + offset + j] += o.grad[i * count + j];
  });
}

Tensor concat_cols(std::span<const Tensor> parts) {
  if (parts.empty()) throw std::invalid_argument("concat_cols: no inputs");
  const std::size_t m = parts.front().rows();
  std::vector<std::size_t> widths;
  std::size_t n = 0;
  for (const auto& p : parts) {
    if (p.rows() != m) throw std::invalid_argument("concat_cols: row counts differ");
    widths.push_back(p.cols());
    n += p.cols();
  }
  std::vector<double> out(m * n);
  std::size_t offset = 0;
  for (const auto& p : parts) {
    const std::size_t w = p.cols();
    const auto d = p.data();
    for (std::size_t i = 0; i < m; ++i)
      std::copy_n(d.begin() + static_cast<std::ptrdiff_t>(i * w), w, out.begin() + static_cast<std::ptrdiff_t>(i * n + offset));
    offset += w;
  }
  std::vector<Tensor> inputs(parts.begin(), parts.end());
  return Tensor::make_result({m, n}, std::move(out), std::move(inputs), [m, n, widths](const TensorImpl& o) {
    std::size_t off = 0;
    for (std::size_t k = 0; k < widths.size(); ++k) {
      auto& p = input(o, k);
      const std::size_t w = widths[k];
      if (p.requires_grad)
        for (std::size_t i = 0; i < m; ++i)
          for (std::size_t j = 0; j < w; ++j) p.grad[i * w + j] += o.grad[i * n + off + j];
      off += w;
    }
  });
}

Tensor concat_rows(std::span<const Tensor> parts) {
  if (parts.empty()) throw std::invalid_argument("concat_rows: no inputs");
  const std::size_t n = parts.front().cols();
  std::size_t m = 0;
  std::vector<double> out;
  std::vector<std::size_t> sizes;
  for (const auto& p : parts) {
    if (p.cols() != n) throw std::invalid_argument("concat_rows: column counts differ");
    m += p.rows();
    sizes.push_back(p.numel());
    out.insert(out.end(), p.data().begin(), p.data().end());
  }
  std::vector<Tensor> inputs(parts.begin(), parts.end());
  return Tensor::make_result({m, n}, std::move(out), std::move(inputs), [sizes](const TensorImpl& o) {
    std::size_t off = 0;
    for (std::size_t k = 0; k < sizes.size(); ++k) {
      auto& p = input(o, k);
      if (p.requires_grad)
        for (std::size_t i = 0; i < sizes[k]; ++i) p.grad[i] += o.grad[off + i];
      off += sizes[k];
    }
  });
}

Tensor gather_rows(const Tensor& table, std::span<const std::size_t> indices) {
  require_matrix(table, "gather_rows");
  const std::size_t rows = table.rows(), n = table.cols();
  if (indices.empty()) throw std::invalid_argument("gather_rows: no indices");
  std::vector<std::size_t> idx(indices.begin(), indices.end());
  std::vector<double> out(idx.size() * n);
  const auto d = table.data();
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (idx[i] >= rows) throw std::out_of_range(fmt::format("gather_rows: index {} outside {} rows", idx[i], rows));
    std::copy_n(d.begin() + static_cast<std::ptrdiff_t>(idx[i] * n), n, out.begin() + static_cast<std::ptrdiff_t>(i * n));
  }
  const std::size_t m = idx.size();
  return Tensor::make_result({m, n}, std::move(out), {table}, [idx = std::move(idx), n](const TensorImpl& o) {
    auto& pt = input(o, 0);
    for (std::size_t i = 0; i < idx.size(); ++i)
      for (std::size_t j = 0; j < n; ++j) pt.grad[idx[i] * n + j] += o.grad[i * n + j];
  });
}

Tensor softmax(const Tensor& x, std::size_t axis) {
  const Shape& shape = x.shape();
  if (axis >= shape.size()) {
    throw std::invalid_argument(fmt::format("softmax: axis {} invalid for shape {}", axis, shape_str(shape)));
  }
  std::size_t outer = 1, inner = 1;
  for (std::size_t i = 0; i < axis; ++i) outer *= shape[i];
  for (std::size_t i = axis + 1; i < shape.size(); ++i) inner *= shape[i];
  const std::size_t len = shape[axis];

  const auto d = x.data();
  std::vector<double> out(d.size());
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t in = 0; in < inner; ++in) {
      const std::size_t base = o * len * inner + in;
      double mx = -std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < len; ++k) mx = std::max(mx, d[base + k * inner]);
      double total = 0.0;
      for (std::size_t k = 0; k < len; ++k) {
        const double e = std::exp(d[base + k * inner] - mx);
        out[base + k * inner] = e;
        total += e;
      }
      for (std::size_t k = 0; k < len; ++k) out[base + k * inner] /= total;
    }
  }
  return Tensor::make_result(shape, std::move(out), {x}, [outer, inner, len](const TensorImpl& o) {
    auto& px = input(o, 0);
    for (std::size_t a = 0; a < outer; ++a) {
      for (std::size_t in = 0; in < inner; ++in) {
        const std::size_t base = a * len * inner + in;
        double dot = 0.0;
        for (std::size_t k = 0; k < len; ++k) dot += o.grad[base + k * inner] * o.data[base + k * inner];
        for (std::size_t k = 0; k < len; ++k) {
          const std::size_t i = base + k * inner;
          px.grad[i] += o.data[i] * (o.grad[i] - dot);
        }
      }
    }
  });
}

Tensor masked_softmax_rows(const Tensor& x, const std::vector<bool>& allowed) {
  require_matrix(x, "masked_softmax_rows");
  const std::size_t m = x.rows(), n = x.cols();
  if (allowed.size() != m * n) {
    throw std::invalid_argument(fmt::format("masked_softmax_rows: mask has {} entries for {}x{} scores", allowed.size(), m, n));
  }
  const auto d = x.data();
  std::vector<double> out(m * n, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    double mx = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j)
      if (allowed[i * n + j]) mx = std::max(mx, d[i * n + j]);
    if (mx == -std::numeric_limits<double>::infinity()) {
      throw std::invalid_argument(fmt::format("masked_softmax_rows: row {} has every position masked", i));
    }
    double total = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (!allowed[i * n + j]) continue;
      const double e = std::exp(d[i * n + j] - mx);
      out[i * n + j] = e;
      total += e;
    }
    for (std::size_t j = 0; j < n; ++j) out[i * n + j] /= total;
  }
  return Tensor::make_result({m, n}, std::move(out), {x}, [m, n](const TensorImpl& o) {
    auto& px = input(o, 0);
    for (std::size_t i = 0; i < m; ++i) {
      double dot = 0.0;
      for (std::size_t j = 0; j < n; ++j) dot += o.grad[i * n + j] * o.data[i * n + j];
      for (std::size_t j = 0; j < n; ++j) px.grad[i * n + j] += o.data[i * n + j] * (o.grad[i * n + j] - dot);
    }
  });
}

Tensor layer_norm(const Tensor& x, const Tensor& gain, const Tensor& bias, double eps) {
  const std::size_t n = x.shape().back();
  if (gain.numel() != n || bias.numel() != n) {
    throw std::invalid_argument(fmt::format("layer_norm: gain/bias must have {} values", n));
  }
  if (eps < 0.0) throw std::invalid_argument("layer_norm: eps must be nonnegative");
  const std::size_t m = x.numel() / n;
  const auto d = x.data();
  const auto g = gain.data();
  const auto b = bias.data();
  std::vector<double> normalized(d.size());
  std::vector<double> inv_std(m);
  std::vector<double> out(d.size());
  for (std::size_t i = 0; i < m; ++i) {
    double mean = 0.0;
    for (std::size_t j = 0; j < n; ++j) mean += d[i * n + j];
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double c = d[i * n + j] - mean;
      var += c * c;
    }
    var /= static_cast<double>(n);
    if (var + eps <= 0.0) {
      throw std::invalid_argument(fmt::format("layer_norm: row {} has zero variance and eps is 0", i));
    }
    inv_std[i] = 1.0 / std::sqrt(var + eps);
    for (std::size_t j = 0; j < n; ++j) {
      const double xh = (d[i * n + j] - mean) * inv_std[i];
      normalized[i * n + j] = xh;
      out[i * n + j] = xh * g[j] + b[j];
    }
  }
  return Tensor::make_result(
      x.shape(), std::move(out), {x, gain, bias},
      [m, n, normalized = std::move(normalized), inv_std = std::move(inv_std)](const TensorImpl& o) {
        auto& px = input(o, 0);
        auto& pg = input(o, 1);
        auto& pb = input(o, 2);
        for (std::size_t i = 0; i < m; ++i) {
          const double* go = o.grad.data() + i * n;
          const double* xh = normalized.data() + i * n;
          if (pg.requires_grad)
            for (std::size_t j = 0; j < n; ++j) pg.grad[j] += go[j] * xh[j];
          if (pb.requires_grad)
            for (std::size_t j = 0; j < n; ++j) pb.grad[j] += go[j];
          if (!px.requires_grad) continue;
          // dx = inv_std * (dxh - mean(dxh) - xh * mean(dxh * xh)), dxh = go * gain
          double mean_dxh = 0.0, mean_dxh_xh = 0.0;
          for (std::size_t j = 0; j < n; ++j) {
            const double dxh = go[j] * pg.data[j];
            mean_dxh += dxh;
            mean_dxh_xh += dxh * xh[j];
          }
          mean_dxh /= static_cast<double>(n);
          mean_dxh_xh /= static_cast<double>(n);
          for (std::size_t j = 0; j < n; ++j) {
            const double dxh = go[j] * pg.data[j];
            px.grad[i * n + j] += inv_std[i] * (dxh - mean_dxh - xh[j] * mean_dxh_xh);
          }
        }
      });
}

Tensor cross_entropy_masked(const Tensor& logits, std::span<const std::size_t> targets,
                            const std::vector<bool>& mask) {
  require_matrix(logits, "cross_entropy_masked");
  const std::size_t k = logits.rows(), w = logits.cols();
  if (targets.size() != k || mask.size() != k) {
    throw std::invalid_argument(
        fmt::format("cross_entropy_masked: {} logit rows but {} targets and {} mask entries", k, targets.size(), mask.size()));
  }
  std::size_t active = 0;
  for (std::size_t i = 0; i < k; ++i) {
    if (!mask[i]) continue;
    ++active;
    if (targets[i] >= w) {
      throw std::out_of_range(fmt::format("cross_entropy_masked: target {} at position {} outside vocabulary of {}", targets[i], i, w));
    }
  }
  if (active == 0) throw std::invalid_argument("cross_entropy_masked: every position is masked");

  const auto d = logits.data();
  std::vector<double> probs(k * w, 0.0);
  double loss = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    if (!mask[i]) continue;
    const double* row = d.data() + i * w;
    const double mx = *std::max_element(row, row + w);
    double total = 0.0;
    for (std::size_t j = 0; j < w; ++j) total += std::exp(row[j] - mx);
    const double log_z = mx + std::log(total);
    for (std::size_t j = 0; j < w; ++j) probs[i * w + j] = std::exp(row[j] - log_z);
    loss += log_z - row[targets[i]];
  }
  const double inv_active = 1.0 / static_cast<double>(active);
  loss *= inv_active;
  std::vector<std::size_t> tgt(targets.begin(), targets.end());
  return Tensor::make_result(
      {1}, {loss}, {logits},
      [k, w, inv_active, mask, tgt = std::move(tgt), probs = std::move(probs)](const TensorImpl& o) {
        auto& pl = input(o, 0);
        const double g = o.grad[0] * inv_active;
        for (std::size_t i = 0; i < k; ++i) {
          if (!mask[i]) continue;
          for (std::size_t j = 0; j < w; ++j) pl.grad[i * w + j] += g * probs[i * w + j];
          pl.grad[i * w + tgt[i]] -= g;
        }
      });
}

}  // namespace aac
