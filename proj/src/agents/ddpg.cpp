#include "sapdrl/agents/ddpg.hpp"

#include <algorithm>
#include <cmath>

#include "sapdrl/errors.hpp"

namespace sapdrl::agents {

using numkit::Matrix;

DdpgAgent::DdpgAgent(numkit::Mlp actor, numkit::BranchNet critic, DdpgConfig cfg)
    : cfg_(cfg),
      actor_(std::move(actor)),
      actorTarget_(actor_),
      critic_(std::move(critic)),
      criticTarget_(critic_),
      actorOpt_(actor_.paramCount()),
      criticOpt_(critic_.paramCount()),
      replay_(cfg.replayCapacity),
      noise_(cfg.ouTheta, cfg.ouSigma),
      actorGrads_(actor_.makeGrads()),
      criticGrads_(critic_.makeGrads()),
      criticScratch_(critic_.makeGrads()),
      actorFlatP_(actor_.paramCount()),
      actorFlatG_(actor_.paramCount()),
      criticFlatP_(critic_.paramCount()),
      criticFlatG_(critic_.paramCount()) {
  if (actor_.outputDim() != 1 || critic_.actionDim() != 1)
    throw ConfigError("DdpgAgent: one-dimensional actions only");
  if (actor_.activation(actor_.layerCount() - 1) != numkit::Activation::Tanh)
    throw ConfigError("DdpgAgent: actor output layer must be tanh");
}

double DdpgAgent::squashToBounds(double raw) const {
  const double mid = 0.5 * (cfg_.actionLo + cfg_.actionHi);
  const double half = 0.5 * (cfg_.actionHi - cfg_.actionLo);
  return mid + half * raw;
}

double DdpgAgent::policyAction(std::span<const double> state) {
  return squashToBounds(actor_.forward(state)[0]);
}

double DdpgAgent::act(std::span<const double> state, std::int64_t t, bool explore,
                      numkit::Rng& noiseRng) {
  double a = policyAction(state);
  if (explore && t <= cfg_.exploreSteps) a += noise_.step(noiseRng);
  return std::clamp(a, cfg_.actionLo, cfg_.actionHi);
}

std::optional<DdpgAgent::TrainResult> DdpgAgent::trainStep(numkit::Rng& replayRng) {
  if (replay_.size() < cfg_.batchSize) return std::nullopt;

  const auto idx = replay_.sampleIndices(cfg_.batchSize, replayRng);
  const std::size_t n = idx.size();
  const std::size_t sDim = critic_.stateDim();

  Matrix states(n, sDim), nexts(n, sDim), actions(n, 1);
  std::vector<double> rewards(n);
  std::vector<bool> terminal(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Transition& tr = replay_.at(idx[i]);
    std::copy(tr.state.begin(), tr.state.end(), states.row(i).begin());
    std::copy(tr.nextState.begin(), tr.nextState.end(), nexts.row(i).begin());
    actions(i, 0) = tr.action.value;
    rewards[i] = tr.reward * cfg_.rewardScale;
    terminal[i] = tr.done || tr.virtualDone;
  }

  // Critic targets through the target networks.
  Matrix nextActionsRaw = actorTarget_.forward(nexts);
  Matrix nextActions(n, 1);
  for (std::size_t i = 0; i < n; ++i) nextActions(i, 0) = squashToBounds(nextActionsRaw(i, 0));
  Matrix nextQ = criticTarget_.forward(nexts, nextActions);
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i)
    y[i] = terminal[i] ? rewards[i] : rewards[i] + cfg_.gamma * nextQ(i, 0);

  // Critic regression step.
  Matrix q = critic_.forward(states, actions);
  double criticLoss = 0.0;
  Matrix qGrad(n, 1);
  for (std::size_t i = 0; i < n; ++i) {
    const double d = q(i, 0) - y[i];
    criticLoss += d * d;
    qGrad(i, 0) = 2.0 * d / static_cast<double>(n);
  }
  criticLoss /= static_cast<double>(n);

  criticGrads_.setZero();
  critic_.backward(qGrad, criticGrads_);
  critic_.copyParams(criticFlatP_);
  criticGrads_.copyTo(criticFlatG_);
  numkit::adamStep(criticOpt_, criticFlatP_, criticFlatG_, cfg_.lrCritic);
  critic_.assignParams(criticFlatP_);

  // Actor ascent on the mean critic value.
  double actorObjective = 0.0;
  numkit::MlpGrads ascent = actorGradient(states, &actorObjective);
  ascent.scale(-1.0);  // Adam minimizes
  actor_.copyParams(actorFlatP_);
  ascent.copyTo(actorFlatG_);
  numkit::adamStep(actorOpt_, actorFlatP_, actorFlatG_, cfg_.lrActor);
  actor_.assignParams(actorFlatP_);

  numkit::softUpdate(criticTarget_, critic_, cfg_.tau);
  numkit::softUpdate(actorTarget_, actor_, cfg_.tau);

  return TrainResult{criticLoss, actorObjective};
}

numkit::MlpGrads DdpgAgent::actorGradient(const Matrix& states, double* objectiveOut) {
  const std::size_t n = states.rows();
  const double half = 0.5 * (cfg_.actionHi - cfg_.actionLo);

  Matrix raw = actor_.forward(states);
  Matrix acts(n, 1);
  for (std::size_t i = 0; i < n; ++i) acts(i, 0) = squashToBounds(raw(i, 0));

  Matrix qa = critic_.forward(states, acts);
  if (objectiveOut) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += qa(i, 0);
    *objectiveOut = sum / static_cast<double>(n);
  }
  Matrix ones(n, 1, 1.0 / static_cast<double>(n));
  criticScratch_.setZero();
  auto inputGrads = critic_.backward(ones, criticScratch_);  // critic params untouched

  // dQ/d(raw actor output) through the bound scaling.
  Matrix seed(n, 1);
  for (std::size_t i = 0; i < n; ++i) seed(i, 0) = inputGrads.action(i, 0) * half;

  numkit::MlpGrads grads = actor_.makeGrads();
  actor_.backward(seed, grads);
  return grads;
}

}  // namespace sapdrl::agents
