#pragma once

#include <span>

#include <cstdint>
#include <optional>
#include <vector>

#include "sapdrl/agents/exploration.hpp"
#include "sapdrl/agents/replay.hpp"
#include "sapdrl/numkit/adam.hpp"
#include "sapdrl/numkit/mlp.hpp"

namespace sapdrl::agents {

struct DdqnConfig {
  double gamma = 0.99;
  double lr = 0.0005;
  double tau = 0.001;
  std::size_t batchSize = 128;
  std::size_t replayCapacity = 50000;
  EpsilonSchedule epsilon;
};

/// Double-Q targets: the online net picks the argmax action at s', the
/// target net values it. Bootstrapping is cut on done or virtualDone.
std::vector<double> ddqnTargets(const std::vector<const Transition*>& batch, numkit::Mlp& qNet,
                                numkit::Mlp& targetNet, double gamma);

class DdqnAgent {
 public:
  DdqnAgent(numkit::Mlp qNet, DdqnConfig cfg);

  /// Epsilon-greedy action for step t. Ties at the argmax break toward the
  /// lowest index.
  int act(std::span<const double> state, std::int64_t t, numkit::Rng& explorationRng);

  /// Greedy action, no exploration.
  int greedyAction(std::span<const double> state);

  void observe(Transition t) { replay_.push(std::move(t)); }

  /// One minibatch update; returns the TD loss, or nullopt while the
  /// replay buffer holds fewer than batchSize transitions.
  std::optional<double> trainStep(numkit::Rng& replayRng);

  const numkit::Mlp& qNet() const { return qNet_; }
  numkit::Mlp& qNet() { return qNet_; }
  const numkit::Mlp& targetNet() const { return targetNet_; }
  const ReplayBuffer& replay() const { return replay_; }
  const DdqnConfig& config() const { return cfg_; }
  int actionCount() const { return static_cast<int>(qNet_.outputDim()); }

 private:
  DdqnConfig cfg_;
  numkit::Mlp qNet_, targetNet_;
  numkit::AdamState opt_;
  ReplayBuffer replay_;
  numkit::MlpGrads grads_;
  std::vector<double> flatParams_, flatGrads_;
};

}  // namespace sapdrl::agents
