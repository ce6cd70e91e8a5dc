#include "aac/numerics/tensor.hpp"

#include <fmt/format.h>

#include <stdexcept>
#include <unordered_set>

namespace aac {

namespace {
thread_local bool g_grad_enabled = true;
}

std::size_t shape_numel(const Shape& shape) {
  if (shape.empty()) throw std::invalid_argument("tensor shape must have at least one dimension");
  std::size_t n = 1;
  for (std::size_t d : shape) {
    if (d == 0) throw std::invalid_argument(fmt::format("tensor shape {} has a zero dimension", shape_str(shape)));
    n *= d;
  }
  return n;
}

std::string shape_str(const Shape& shape) {
  std::string out = "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) out += "x";
    out += std::to_string(shape[i]);
  }
  return out + "]";
}

Tensor Tensor::zeros(Shape shape, bool requires_grad) { return full(std::move(shape), 0.0, requires_grad); }

Tensor Tensor::full(Shape shape, double value, bool requires_grad) {
  const std::size_t n = shape_numel(shape);
  return from(std::move(shape), std::vector<double>(n, value), requires_grad);
}

Tensor Tensor::from(Shape shape, std::vector<double> values, bool requires_grad) {
  const std::size_t n = shape_numel(shape);
  if (values.size() != n) {
    throw std::invalid_argument(
        fmt::format("tensor of shape {} needs {} values, got {}", shape_str(shape), n, values.size()));
  }
  auto impl = std::make_shared<detail::TensorImpl>();
  impl->shape = std::move(shape);
  impl->data = std::move(values);
  impl->requires_grad = requires_grad;
  if (requires_grad) impl->grad.assign(n, 0.0);
  return Tensor(std::move(impl));
}

Tensor Tensor::scalar(double value, bool requires_grad) { return from({1}, {value}, requires_grad); }

detail::TensorImpl& Tensor::checked() const {
  if (!impl_) throw std::logic_error("use of an undefined tensor");
  return *impl_;
}

const Shape& Tensor::shape() const { return checked().shape; }
std::size_t Tensor::numel() const { return checked().data.size(); }

std::size_t Tensor::dim(std::size_t axis) const {
  const auto& s = shape();
  if (axis >= s.size()) throw std::out_of_range(fmt::format("axis {} out of range for shape {}", axis, shape_str(s)));
  return s[axis];
}

std::size_t Tensor::rows() const {
  if (rank() != 2) throw std::invalid_argument(fmt::format("expected a matrix, got shape {}", shape_str(shape())));
  return shape()[0];
}

std::size_t Tensor::cols() const {
  if (rank() != 2) throw std::invalid_argument(fmt::format("expected a matrix, got shape {}", shape_str(shape())));
  return shape()[1];
}

std::span<const double> Tensor::data() const { return checked().data; }
std::span<double> Tensor::mutable_data() { return checked().data; }

double Tensor::item() const {
  if (numel() != 1) throw std::invalid_argument(fmt::format("item() on tensor of shape {}", shape_str(shape())));
  return checked().data[0];
}

double Tensor::at(std::size_t row, std::size_t col) const {
  const std::size_t c = cols();
  if (row >= rows() || col >= c) throw std::out_of_range("tensor index out of range");
  return checked().data[row * c + col];
}

bool Tensor::requires_grad() const { return checked().requires_grad; }

void Tensor::set_requires_grad(bool flag) {
  auto& impl = checked();
  if (impl.grad_fn) throw std::logic_error("set_requires_grad on a non-leaf tensor");
  impl.requires_grad = flag;
  if (flag) {
    impl.grad.assign(impl.data.size(), 0.0);
  } else {
    impl.grad.clear();
    impl.grad.shrink_to_fit();
  }
}

bool Tensor::has_grad() const { return checked().requires_grad; }

std::span<const double> Tensor::grad() const {
  auto& impl = checked();
  if (!impl.requires_grad) throw std::logic_error("tensor does not require grad");
  return impl.grad;
}

std::span<double> Tensor::mutable_grad() {
  auto& impl = checked();
  if (!impl.requires_grad) throw std::logic_error("tensor does not require grad");
  return impl.grad;
}

void Tensor::zero_grad() {
  auto& impl = checked();
  std::fill(impl.grad.begin(), impl.grad.end(), 0.0);
}

bool Tensor::is_leaf() const { return checked().grad_fn == nullptr; }

Tensor Tensor::detach() const { return from(shape(), checked().data, false); }

Tensor Tensor::clone() const { return from(shape(), checked().data, requires_grad()); }

Tensor Tensor::make_result(Shape shape, std::vector<double> values, std::vector<Tensor> inputs,
                           std::function<void(const detail::TensorImpl&)> backward_fn) {
  bool needs_grad = false;
  if (g_grad_enabled) {
    for (const auto& in : inputs) needs_grad = needs_grad || in.requires_grad();
  }
  Tensor out = from(std::move(shape), std::move(values), needs_grad);
  if (needs_grad) {
    auto fn = std::make_shared<detail::GradFn>();
    fn->inputs.reserve(inputs.size());
    for (auto& in : inputs) fn->inputs.push_back(in.impl_);
    fn->backward = std::move(backward_fn);
    out.impl_->grad_fn = std::move(fn);
  }
  return out;
}

bool grad_enabled() { return g_grad_enabled; }

NoGradGuard::NoGradGuard() : previous_(g_grad_enabled) { g_grad_enabled = false; }
NoGradGuard::~NoGradGuard() { g_grad_enabled = previous_; }

void backward(const Tensor& loss) {
  if (!loss.defined()) throw std::invalid_argument("backward on an undefined tensor");
  if (loss.numel() != 1) {
    throw std::invalid_argument(fmt::format("backward needs a scalar loss, got shape {}", shape_str(loss.shape())));
  }
  if (!loss.requires_grad()) throw std::invalid_argument("loss does not depend on any tensor that requires grad");

  // Iterative post-order DFS gives a topological order of the recorded graph.
  std::vector<detail::TensorImpl*> order;
  std::unordered_set<detail::TensorImpl*> visited;
  std::vector<std::pair<detail::TensorImpl*, std::size_t>> stack;
  stack.emplace_back(loss.impl().get(), 0);
  visited.insert(loss.impl().get());
  while (!stack.empty()) {
    auto& [node, next_child] = stack.back();
    const auto* fn = node->grad_fn.get();
    if (fn && next_child < fn->inputs.size()) {
      detail::TensorImpl* child = fn->inputs[next_child++].get();
      if (child->requires_grad && visited.insert(child).second) stack.emplace_back(child, 0);
    } else {
      order.push_back(node);
      stack.pop_back();
    }
  }

  loss.impl()->grad[0] += 1.0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    detail::TensorImpl* node = *it;
    if (node->grad_fn) {
      node->grad_fn->backward(*node);
    }
  }
  for (detail::TensorImpl* node : order) node->grad_fn.reset();
}

}  // namespace aac
