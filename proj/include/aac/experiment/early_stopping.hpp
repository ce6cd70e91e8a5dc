#pragma once

#include <cstddef>
#include <limits>

namespace aac {

/// Patience bookkeeping. Epochs are 1-based; only a strictly lower
/// validation loss counts as an improvement.
class TrainState {
 public:
  TrainState(std::size_t patience, std::size_t max_epochs);

  struct Update {
    bool improved = false;  // caller should snapshot the model
    bool stop = false;
  };
  /// Records the validation loss of the next epoch. Throws once stopped.
  Update record(double validation_loss);

  std::size_t epoch() const { return epoch_; }
  std::size_t best_epoch() const { return best_epoch_; }
  double best_loss() const { return best_loss_; }
  std::size_t epochs_since_improvement() const { return since_; }
  bool stopped() const { return stopped_; }

 private:
  std::size_t patience_;
  std::size_t max_epochs_;
  std::size_t epoch_ = 0;
  std::size_t best_epoch_ = 0;
  double best_loss_ = std::numeric_limits<double>::infinity();
  std::size_t since_ = 0;
  bool stopped_ = false;
};

}  // namespace aac
