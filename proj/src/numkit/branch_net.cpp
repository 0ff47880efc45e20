#include "sapdrl/numkit/branch_net.hpp"

#include <algorithm>

#include "sapdrl/errors.hpp"

namespace sapdrl::numkit {

void BranchGrads::setZero() {
  state.setZero();
  action.setZero();
  joint.setZero();
}

void BranchGrads::scale(double s) {
  state.scale(s);
  action.scale(s);
  joint.scale(s);
}

std::size_t BranchGrads::count() const { return state.count() + action.count() + joint.count(); }

void BranchGrads::copyTo(std::span<double> out) const {
  state.copyTo(out.subspan(0, state.count()));
  action.copyTo(out.subspan(state.count(), action.count()));
  joint.copyTo(out.subspan(state.count() + action.count(), joint.count()));
}

BranchNet::BranchNet(Mlp stateBranch, Mlp actionBranch, Mlp joint)
    : state_(std::move(stateBranch)), action_(std::move(actionBranch)), joint_(std::move(joint)) {
  if (joint_.inputDim() != state_.outputDim() + action_.outputDim())
    throw ConfigError("BranchNet: joint input dim must equal the concatenated branch outputs");
}

void BranchNet::initWeights(Rng& rng) {
  state_.initWeights(rng);
  action_.initWeights(rng);
  joint_.initWeights(rng);
}

Matrix BranchNet::forward(const Matrix& stateBatch, const Matrix& actionBatch) {
  if (stateBatch.rows() != actionBatch.rows())
    throw ContractError("BranchNet::forward: batch sizes differ");
  Matrix hs = state_.forward(stateBatch);
  Matrix ha = action_.forward(actionBatch);
  Matrix cat(hs.rows(), hs.cols() + ha.cols());
  for (std::size_t i = 0; i < hs.rows(); ++i) {
    auto dst = cat.row(i);
    auto s = hs.row(i);
    auto a = ha.row(i);
    std::copy(s.begin(), s.end(), dst.begin());
    std::copy(a.begin(), a.end(), dst.begin() + s.size());
  }
  return joint_.forward(cat);
}

std::vector<double> BranchNet::forward(std::span<const double> state, std::span<const double> action) {
  Matrix out = forward(Matrix::fromRow(state), Matrix::fromRow(action));
  return {out.data().begin(), out.data().end()};
}

BranchNet::InputGrads BranchNet::backward(const Matrix& outputGrad, BranchGrads& grads) {
  Matrix gcat = joint_.backward(outputGrad, grads.joint);
  const std::size_t sDim = state_.outputDim();
  const std::size_t aDim = action_.outputDim();
  Matrix gs(gcat.rows(), sDim), gav(gcat.rows(), aDim);
  for (std::size_t i = 0; i < gcat.rows(); ++i) {
    auto src = gcat.row(i);
    std::copy(src.begin(), src.begin() + sDim, gs.row(i).begin());
    std::copy(src.begin() + sDim, src.end(), gav.row(i).begin());
  }
  InputGrads in;
  in.state = state_.backward(gs, grads.state);
  in.action = action_.backward(gav, grads.action);
  return in;
}

BranchGrads BranchNet::makeGrads() const {
  return {state_.makeGrads(), action_.makeGrads(), joint_.makeGrads()};
}

std::size_t BranchNet::paramCount() const {
  return state_.paramCount() + action_.paramCount() + joint_.paramCount();
}

void BranchNet::copyParams(std::span<double> out) const {
  state_.copyParams(out.subspan(0, state_.paramCount()));
  action_.copyParams(out.subspan(state_.paramCount(), action_.paramCount()));
  joint_.copyParams(out.subspan(state_.paramCount() + action_.paramCount(), joint_.paramCount()));
}

void BranchNet::assignParams(std::span<const double> in) {
  state_.assignParams(in.subspan(0, state_.paramCount()));
  action_.assignParams(in.subspan(state_.paramCount(), action_.paramCount()));
  joint_.assignParams(in.subspan(state_.paramCount() + action_.paramCount(), joint_.paramCount()));
}

bool BranchNet::sameTopology(const BranchNet& other) const {
  return state_.sameTopology(other.state_) && action_.sameTopology(other.action_) &&
         joint_.sameTopology(other.joint_);
}

void softUpdate(BranchNet& target, const BranchNet& source, double tau) {
  softUpdate(target.stateBranch(), source.stateBranch(), tau);
  softUpdate(target.actionBranch(), source.actionBranch(), tau);
  softUpdate(target.joint(), source.joint(), tau);
}

}  // namespace sapdrl::numkit
