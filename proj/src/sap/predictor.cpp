#include "sapdrl/sap/predictor.hpp"

#include <algorithm>

#include "sapdrl/errors.hpp"
#include "sapdrl/numkit/losses.hpp"

namespace sapdrl::sap {

using numkit::Matrix;

ApPredictor::ApPredictor(numkit::BranchNet net, agents::ActionSpace space, Config cfg)
    : net_(std::move(net)),
      space_(space),
      cfg_(cfg),
      opt_(net_.paramCount()),
      grads_(net_.makeGrads()),
      flatP_(net_.paramCount()),
      flatG_(net_.paramCount()) {
  if (net_.outputDim() != 2) throw ConfigError("ApPredictor: the head must produce two logits");
  const std::size_t expect = space_.isDiscrete() ? static_cast<std::size_t>(space_.count) : 1;
  if (net_.actionDim() != expect)
    throw ConfigError("ApPredictor: action branch dim does not match the action encoding");
}

std::vector<double> ApPredictor::encodeAction(const agents::ActionValue& action) const {
  if (space_.isDiscrete()) {
    std::vector<double> onehot(static_cast<std::size_t>(space_.count), 0.0);
    onehot[static_cast<std::size_t>(action.index)] = 1.0;
    return onehot;
  }
  return {action.value};
}

std::array<double, 2> ApPredictor::probabilities(std::span<const double> state,
                                                 const agents::ActionValue& action) {
  const auto logits = net_.forward(state, encodeAction(action));
  return numkit::softmax2(logits);
}

ApLabel ApPredictor::predict(std::span<const double> state, const agents::ActionValue& action) {
  const auto p = probabilities(state, action);
  return p[1] >= 0.5 ? ApLabel::Permissible : ApLabel::NonPermissible;
}

std::vector<ApLabel> ApPredictor::predictBatch(std::span<const double> state,
                                               const std::vector<agents::ActionValue>& actions) {
  const std::size_t n = actions.size();
  Matrix states(n, state.size());
  Matrix acts(n, net_.actionDim());
  for (std::size_t i = 0; i < n; ++i) {
    std::copy(state.begin(), state.end(), states.row(i).begin());
    const auto enc = encodeAction(actions[i]);
    std::copy(enc.begin(), enc.end(), acts.row(i).begin());
  }
  Matrix logits = net_.forward(states, acts);
  std::vector<ApLabel> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto p = numkit::softmax2(logits.row(i));
    out[i] = p[1] >= 0.5 ? ApLabel::Permissible : ApLabel::NonPermissible;
  }
  return out;
}

double ApPredictor::train(std::span<const KnowledgeTuple> dataset) {
  if (dataset.empty()) throw ContractError("ApPredictor::train: empty dataset");
  const std::size_t n = dataset.size();

  Matrix states(n, net_.stateDim());
  Matrix acts(n, net_.actionDim());
  for (std::size_t i = 0; i < n; ++i) {
    std::copy(dataset[i].state.begin(), dataset[i].state.end(), states.row(i).begin());
    const auto enc = encodeAction(dataset[i].action);
    std::copy(enc.begin(), enc.end(), acts.row(i).begin());
  }
  Matrix logits = net_.forward(states, acts);

  net_.copyParams(flatP_);
  double dataLoss = 0.0;
  Matrix logitGrad(n, 2);
  for (std::size_t i = 0; i < n; ++i) {
    // the L2 term is added once below, not per example
    const auto lg = numkit::crossEntropyWithL2(logits.row(i), labelValue(dataset[i].label), {}, 0.0);
    dataLoss += lg.loss;
    logitGrad(i, 0) = lg.grad[0] / static_cast<double>(n);
    logitGrad(i, 1) = lg.grad[1] / static_cast<double>(n);
  }
  dataLoss /= static_cast<double>(n);

  grads_.setZero();
  net_.backward(logitGrad, grads_);
  grads_.copyTo(flatG_);

  double sq = 0.0;
  for (std::size_t i = 0; i < flatP_.size(); ++i) {
    sq += flatP_[i] * flatP_[i];
    flatG_[i] += cfg_.lambda * flatP_[i];
  }
  const double loss = dataLoss + 0.5 * cfg_.lambda * sq;

  numkit::adamStep(opt_, flatP_, flatG_, cfg_.lr);
  net_.assignParams(flatP_);
  return loss;
}

std::optional<double> ApPredictor::validate(const KnowledgeBuffer& kb, std::int64_t step,
                                            std::size_t holdoutSample) {
  const auto holdout = kb.holdoutRecent(holdoutSample);
  if (holdout.empty()) return std::nullopt;

  const std::size_t n = holdout.size();
  Matrix states(n, net_.stateDim());
  Matrix acts(n, net_.actionDim());
  for (std::size_t i = 0; i < n; ++i) {
    std::copy(holdout[i]->state.begin(), holdout[i]->state.end(), states.row(i).begin());
    const auto enc = encodeAction(holdout[i]->action);
    std::copy(enc.begin(), enc.end(), acts.row(i).begin());
  }
  Matrix logits = net_.forward(states, acts);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto p = numkit::softmax2(logits.row(i));
    const ApLabel predicted = p[1] >= 0.5 ? ApLabel::Permissible : ApLabel::NonPermissible;
    if (predicted == holdout[i]->label) ++correct;
  }
  const double acc = static_cast<double>(correct) / static_cast<double>(n);
  vaccHistory_.emplace_back(step, acc);
  return acc;
}

ExactOracle::ExactOracle(ApFunction fn) : fn_(std::move(fn)) {
  if (fn_.kind() != ApFunction::Kind::Type2)
    throw ConfigError("ExactOracle needs a type 2 AP function");
}

ApLabel ExactOracle::predict(std::span<const double> state, const agents::ActionValue& action) {
  return fn_.label(state, action);
}

}  // namespace sapdrl::sap
