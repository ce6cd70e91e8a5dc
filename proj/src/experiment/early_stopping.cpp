#include "aac/experiment/early_stopping.hpp"

#include <stdexcept>

namespace aac {

TrainState::TrainState(std::size_t patience, std::size_t max_epochs) : patience_(patience), max_epochs_(max_epochs) {
  if (patience == 0) throw std::invalid_argument("patience must be at least 1");
  if (max_epochs == 0) throw std::invalid_argument("max_epochs must be at least 1");
}

TrainState::Update TrainState::record(double validation_loss) {
  if (stopped_) throw std::logic_error("training already stopped");
  ++epoch_;
  Update u;
  if (validation_loss < best_loss_) {
    best_loss_ = validation_loss;
    best_epoch_ = epoch_;
    since_ = 0;
    u.improved = true;
  } else {
    ++since_;
  }
  u.stop = since_ >= patience_ || epoch_ >= max_epochs_;
  stopped_ = u.stop;
  return u;
}

}  // namespace aac
