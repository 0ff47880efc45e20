#include "sapdrl/agents/ddqn.hpp"

#include <algorithm>

#include "sapdrl/errors.hpp"
#include "sapdrl/numkit/losses.hpp"

namespace sapdrl::agents {

using numkit::Matrix;

namespace {

std::size_t argmaxLowest(std::span<const double> v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] > v[best]) best = i;
  return best;
}

Matrix stackStates(const std::vector<const Transition*>& batch, bool next) {
  const std::size_t dim = next ? batch[0]->nextState.size() : batch[0]->state.size();
  Matrix m(batch.size(), dim);
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const auto& s = next ? batch[i]->nextState : batch[i]->state;
    std::copy(s.begin(), s.end(), m.row(i).begin());
  }
  return m;
}

}  // namespace

std::vector<double> ddqnTargets(const std::vector<const Transition*>& batch, numkit::Mlp& qNet,
                                numkit::Mlp& targetNet, double gamma) {
  if (batch.empty()) throw ContractError("ddqnTargets: empty batch");
  Matrix nexts = stackStates(batch, true);
  Matrix online = qNet.forward(nexts);
  Matrix target = targetNet.forward(nexts);
  std::vector<double> y(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const Transition& tr = *batch[i];
    if (tr.done || tr.virtualDone) {
      y[i] = tr.reward;
    } else {
      const std::size_t aStar = argmaxLowest(online.row(i));
      y[i] = tr.reward + gamma * target(i, aStar);
    }
  }
  return y;
}

DdqnAgent::DdqnAgent(numkit::Mlp qNet, DdqnConfig cfg)
    : cfg_(cfg),
      qNet_(std::move(qNet)),
      targetNet_(qNet_),
      opt_(qNet_.paramCount()),
      replay_(cfg.replayCapacity),
      grads_(qNet_.makeGrads()),
      flatParams_(qNet_.paramCount()),
      flatGrads_(qNet_.paramCount()) {}

int DdqnAgent::act(std::span<const double> state, std::int64_t t, numkit::Rng& explorationRng) {
  const double eps = cfg_.epsilon.at(t);
  if (explorationRng.uniform() < eps)
    return static_cast<int>(explorationRng.uniformInt(static_cast<std::uint64_t>(actionCount())));
  return greedyAction(state);
}

int DdqnAgent::greedyAction(std::span<const double> state) {
  const auto q = qNet_.forward(state);
  return static_cast<int>(argmaxLowest(q));
}

std::optional<double> DdqnAgent::trainStep(numkit::Rng& replayRng) {
  if (replay_.size() < cfg_.batchSize) return std::nullopt;

  const auto idx = replay_.sampleIndices(cfg_.batchSize, replayRng);
  std::vector<const Transition*> batch;
  batch.reserve(idx.size());
  for (std::size_t i : idx) batch.push_back(&replay_.at(i));

  const std::vector<double> y = ddqnTargets(batch, qNet_, targetNet_, cfg_.gamma);

  Matrix states = stackStates(batch, false);
  Matrix q = qNet_.forward(states);

  // MSE on the Q-value of the taken action only.
  const double n = static_cast<double>(batch.size());
  Matrix outGrad(q.rows(), q.cols());
  double loss = 0.0;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const int a = batch[i]->action.index;
    const double d = q(i, static_cast<std::size_t>(a)) - y[i];
    loss += d * d;
    outGrad(i, static_cast<std::size_t>(a)) = 2.0 * d / n;
  }
  loss /= n;

  grads_.setZero();
  qNet_.backward(outGrad, grads_);

  qNet_.copyParams(flatParams_);
  grads_.copyTo(flatGrads_);
  numkit::adamStep(opt_, flatParams_, flatGrads_, cfg_.lr);
  qNet_.assignParams(flatParams_);

  numkit::softUpdate(targetNet_, qNet_, cfg_.tau);
  return loss;
}

}  // namespace sapdrl::agents
