#pragma once

#include <span>

#include <cstdint>
#include <optional>

#include "sapdrl/agents/exploration.hpp"
#include "sapdrl/agents/replay.hpp"
#include "sapdrl/numkit/adam.hpp"
#include "sapdrl/numkit/branch_net.hpp"
#include "sapdrl/numkit/mlp.hpp"

namespace sapdrl::agents {

struct DdpgConfig {
  double gamma = 0.9;
  double lrActor = 0.0001;
  double lrCritic = 0.001;
  double tau = 0.001;
  std::size_t batchSize = 128;
  std::size_t replayCapacity = 100000;
  double actionLo = -1.0;
  double actionHi = 1.0;
  std::int64_t exploreSteps = 1200;  // OU noise is added only while t <= exploreSteps
  double ouTheta = 0.15;
  double ouSigma = 0.3;
  /// Rewards are multiplied by this factor when forming critic targets;
  /// keeps value magnitudes trainable for reward functions in the hundreds.
  double rewardScale = 1.0;
};

/// Deterministic-policy actor-critic. The actor ends in a tanh unit scaled
/// to the action bounds; the critic is a two-branch net over (state,
/// action). Targets are soft-updated copies of both.
class DdpgAgent {
 public:
  DdpgAgent(numkit::Mlp actor, numkit::BranchNet critic, DdpgConfig cfg);

  /// Policy action plus OU exploration noise during the exploration phase,
  /// clamped to the action bounds.
  double act(std::span<const double> state, std::int64_t t, bool explore, numkit::Rng& noiseRng);

  /// Noise-free policy action.
  double policyAction(std::span<const double> state);

  void observe(Transition t) { replay_.push(std::move(t)); }
  void resetNoise() { noise_.reset(); }

  struct TrainResult {
    double criticLoss;
    double actorObjective;  // mean critic value of the actor's actions
  };
  std::optional<TrainResult> trainStep(numkit::Rng& replayRng);

  /// Gradient of the mean critic value with respect to the actor
  /// parameters, for the given states. Exposed so the analytic actor
  /// gradient can be checked against finite differences. Optionally
  /// reports the mean critic value itself.
  numkit::MlpGrads actorGradient(const numkit::Matrix& states, double* objectiveOut = nullptr);

  const numkit::Mlp& actor() const { return actor_; }
  numkit::Mlp& actor() { return actor_; }
  const numkit::BranchNet& critic() const { return critic_; }
  numkit::BranchNet& critic() { return critic_; }
  const ReplayBuffer& replay() const { return replay_; }
  const DdpgConfig& config() const { return cfg_; }

 private:
  double squashToBounds(double raw) const;

  DdpgConfig cfg_;
  numkit::Mlp actor_, actorTarget_;
  numkit::BranchNet critic_, criticTarget_;
  numkit::AdamState actorOpt_, criticOpt_;
  ReplayBuffer replay_;
  OuNoise noise_;
  numkit::MlpGrads actorGrads_;
  numkit::BranchGrads criticGrads_, criticScratch_;
  std::vector<double> actorFlatP_, actorFlatG_, criticFlatP_, criticFlatG_;
};

}  // namespace sapdrl::agents
