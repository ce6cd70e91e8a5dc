#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace aac {

using Shape = std::vector<std::size_t>;

std::size_t shape_numel(const Shape& shape);
std::string shape_str(const Shape& shape);

namespace detail {

struct TensorImpl;

// One recorded operation. `inputs` keeps the operands alive until the tape is
// consumed by backward(); `backward` reads the output's grad and accumulates
// into the operands' grads.
struct GradFn {
  std::vector<std::shared_ptr<TensorImpl>> inputs;
  std::function<void(const TensorImpl& out)> backward;
};

struct TensorImpl {
  Shape shape;
  std::vector<double> data;
  std::vector<double> grad;  // sized like data iff requires_grad
  bool requires_grad = false;
  std::shared_ptr<GradFn> grad_fn;
};

}  // namespace detail

/// Dense row-major float64 tensor with reverse-mode autodiff.
///
/// Tensor is a cheap handle: copies share storage. Operations in ops.hpp record
/// a grad function on their output whenever any operand requires grad and
/// gradient recording is enabled on the calling thread.
class Tensor {
 public:
  Tensor() = default;

  static Tensor zeros(Shape shape, bool requires_grad = false);
  static Tensor full(Shape shape, double value, bool requires_grad = false);
  static Tensor from(Shape shape, std::vector<double> values, bool requires_grad = false);
  static Tensor scalar(double value, bool requires_grad = false);

  bool defined() const { return impl_ != nullptr; }
  const Shape& shape() const;
  std::size_t rank() const { return shape().size(); }
  std::size_t numel() const;
  std::size_t dim(std::size_t axis) const;
  // 2-D helpers; throw unless rank() == 2.
  std::size_t rows() const;
  std::size_t cols() const;

  std::span<const double> data() const;
  std::span<double> mutable_data();
  double item() const;
  double at(std::size_t row, std::size_t col) const;

  bool requires_grad() const;
  // Turns a leaf into a trainable parameter (allocates a zeroed grad) or back.
  void set_requires_grad(bool flag);
  bool has_grad() const;
  std::span<const double> grad() const;
  std::span<double> mutable_grad();
  void zero_grad();
  bool is_leaf() const;

  /// Deep copy of the values with no grad history.
  Tensor detach() const;
  /// Deep copy that keeps the requires_grad flag (fresh zero grad).
  Tensor clone() const;

  // Internal plumbing for ops.
  static Tensor make_result(Shape shape, std::vector<double> values,
                            std::vector<Tensor> inputs,
                            std::function<void(const detail::TensorImpl&)> backward);
  const std::shared_ptr<detail::TensorImpl>& impl() const { return impl_; }

 private:
  explicit Tensor(std::shared_ptr<detail::TensorImpl> impl) : impl_(std::move(impl)) {}
  detail::TensorImpl& checked() const;

  std::shared_ptr<detail::TensorImpl> impl_;
};

/// Whether ops on this thread record grad functions.
bool grad_enabled();

/// Disables grad recording on the current thread for its lifetime.
class NoGradGuard {
 public:
  NoGradGuard();
  ~NoGradGuard();
  NoGradGuard(const NoGradGuard&) = delete;
  NoGradGuard& operator=(const NoGradGuard&) = delete;

 private:
  bool previous_;
};

/// Populates grads of every requires_grad leaf reachable from `loss` with
/// d(loss)/d(leaf), accumulating into existing grads. The recorded tape is
/// released afterwards, so a second call on the same loss has nothing to
/// propagate.
void backward(const Tensor& loss);

}  // namespace aac
