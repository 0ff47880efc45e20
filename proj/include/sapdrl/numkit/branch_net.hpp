#pragma once

#include <span>

#include "sapdrl/numkit/mlp.hpp"

namespace sapdrl::numkit {

struct BranchGrads {
  MlpGrads state, action, joint;
  void setZero();
  void scale(double s);
  std::size_t count() const;
  void copyTo(std::span<double> out) const;
};

/// Two-branch network: a state branch and an action branch whose outputs
/// are concatenated and fed through a joint head. Used for critics
/// (scalar head) and permissibility predictors (two-logit head).
class BranchNet {
 public:
  BranchNet() = default;
  BranchNet(Mlp stateBranch, Mlp actionBranch, Mlp joint);

  void initWeights(Rng& rng);

  std::size_t stateDim() const { return state_.inputDim(); }
  std::size_t actionDim() const { return action_.inputDim(); }
  std::size_t outputDim() const { return joint_.outputDim(); }

  Matrix forward(const Matrix& stateBatch, const Matrix& actionBatch);
  std::vector<double> forward(std::span<const double> state, std::span<const double> action);

  struct InputGrads {
    Matrix state, action;
  };
  InputGrads backward(const Matrix& outputGrad, BranchGrads& grads);

  BranchGrads makeGrads() const;
  std::size_t paramCount() const;
  void copyParams(std::span<double> out) const;
  void assignParams(std::span<const double> in);

  bool sameTopology(const BranchNet& other) const;

  const Mlp& stateBranch() const { return state_; }
  const Mlp& actionBranch() const { return action_; }
  const Mlp& joint() const { return joint_; }
  Mlp& stateBranch() { return state_; }
  Mlp& actionBranch() { return action_; }
  Mlp& joint() { return joint_; }

 private:
  Mlp state_, action_, joint_;
};

void softUpdate(BranchNet& target, const BranchNet& source, double tau);

}  // namespace sapdrl::numkit
