#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "aac/numerics/tensor.hpp"

namespace aac {

// Elementwise arithmetic; operands must have identical shapes.
Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);
Tensor scale(const Tensor& x, double factor);
Tensor relu(const Tensor& x);

/// Adds a length-n vector to every row of an m x n matrix.
Tensor add_row_vector(const Tensor& x, const Tensor& row);

/// (m x k) * (k x n) -> (m x n)
Tensor matmul(const Tensor& a, const Tensor& b);
Tensor transpose(const Tensor& x);

Tensor sum(const Tensor& x);

/// Column block [offset, offset + count) of a matrix.
Tensor slice_cols(const Tensor& x, std::size_t offset, std::size_t count);
Tensor concat_cols(std::span<const Tensor> parts);
Tensor concat_rows(std::span<const Tensor> parts);
/// Row i of the result is row indices[i] of `table`.
Tensor gather_rows(const Tensor& table, std::span<const std::size_t> indices);

/// Numerically stable softmax along `axis` (max-subtracted).
Tensor softmax(const Tensor& x, std::size_t axis);

/// Row-wise softmax of a matrix where entries with allowed[r * cols + c] ==
/// false get exactly zero weight. Every row must allow at least one entry.
Tensor masked_softmax_rows(const Tensor& x, const std::vector<bool>& allowed);

/// Normalizes over the last dimension with population variance, eps inside the
/// square root, then applies gain and bias.
Tensor layer_norm(const Tensor& x, const Tensor& gain, const Tensor& bias, double eps);

/// Mean over positions with mask[k] == true of -log softmax(logits[k])[targets[k]].
Tensor cross_entropy_masked(const Tensor& logits, std::span<const std::size_t> targets,
                            const std::vector<bool>& mask);

}  // namespace aac
