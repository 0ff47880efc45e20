#pragma once

#include <cstddef>
#include <vector>

#include "sapdrl/agents/action.hpp"
#include "sapdrl/numkit/rng.hpp"

namespace sapdrl::agents {

/// One environment step. done marks a real episode end; virtualDone marks
/// a stored-as-terminal transition produced by virtual stopping. Either
/// flag cuts bootstrapping.
struct Transition {
  std::vector<double> state;
  ActionValue action;
  double reward = 0.0;
  std::vector<double> nextState;
  bool done = false;
  bool virtualDone = false;
};

/// Fixed-capacity ring with strict FIFO eviction.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity) : capacity_(capacity) {}

  void push(Transition t) {
    if (data_.size() < capacity_) {
      data_.push_back(std::move(t));
    } else {
      data_[head_] = std::move(t);
      head_ = (head_ + 1) % capacity_;
    }
  }

  std::size_t size() const { return data_.size(); }
  std::size_t capacity() const { return capacity_; }

  /// Logical indexing, 0 = oldest element.
  const Transition& at(std::size_t i) const { return data_[(head_ + i) % data_.size()]; }

  /// Uniform sample of k distinct logical indices (Floyd's algorithm).
  std::vector<std::size_t> sampleIndices(std::size_t k, numkit::Rng& rng) const {
    std::vector<std::size_t> out;
    out.reserve(k);
    const std::size_t n = data_.size();
    for (std::size_t i = n - k; i < n; ++i) {
      const std::size_t j = static_cast<std::size_t>(rng.uniformInt(i + 1));
      bool seen = false;
      for (std::size_t s : out)
        if (s == j) {
          seen = true;
          break;
        }
      out.push_back(seen ? i : j);
    }
    return out;
  }

 private:
  std::size_t capacity_;
  std::size_t head_ = 0;  // index of the oldest element once full
  std::vector<Transition> data_;
};

}  // namespace sapdrl::agents
