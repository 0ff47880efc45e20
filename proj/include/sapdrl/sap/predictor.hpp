#pragma once

#include <span>

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "sapdrl/numkit/adam.hpp"
#include "sapdrl/numkit/branch_net.hpp"
#include "sapdrl/sap/knowledge.hpp"

namespace sapdrl::sap {

/// Anything that can judge permissibility of a candidate (state, action)
/// before execution: a learned predictor, or an exact type 2 rule.
class PermissibilityOracle {
 public:
  virtual ~PermissibilityOracle() = default;
  virtual ApLabel predict(std::span<const double> state, const agents::ActionValue& action) = 0;

  /// One state, many candidate actions. The default just loops.
  virtual std::vector<ApLabel> predictBatch(std::span<const double> state,
                                            const std::vector<agents::ActionValue>& actions) {
    std::vector<ApLabel> out;
    out.reserve(actions.size());
    for (const auto& a : actions) out.push_back(predict(state, a));
    return out;
  }
};

/// Binary permissibility classifier: a two-branch net over (state
/// features, action encoding) with a two-logit head, trained on balanced
/// AP-labeled datasets with an L2 penalty. Discrete actions are one-hot
/// encoded; continuous actions enter as the raw scalar. Exact 0.5
/// probability classifies as permissible; false positives merely waste a
/// step, false negatives can hide the only good action.
class ApPredictor : public PermissibilityOracle {
 public:
  struct Config {
    double lambda = 0.01;
    double lr = 0.001;
  };

  ApPredictor(numkit::BranchNet net, agents::ActionSpace space, Config cfg);

  /// {p(non-permissible), p(permissible)} for one candidate.
  std::array<double, 2> probabilities(std::span<const double> state,
                                      const agents::ActionValue& action);

  ApLabel predict(std::span<const double> state, const agents::ActionValue& action) override;

  std::vector<ApLabel> predictBatch(std::span<const double> state,
                                    const std::vector<agents::ActionValue>& actions) override;

  /// One full-batch Adam step on the regularized cross entropy; returns
  /// the loss (data term averaged over the batch plus the L2 term).
  double train(std::span<const KnowledgeTuple> dataset);

  /// Accuracy on the most recent holdout tuples (at most holdoutSample of
  /// them); appends to the validation history. nullopt when the holdout
  /// lane is empty.
  std::optional<double> validate(const KnowledgeBuffer& kb, std::int64_t step,
                                 std::size_t holdoutSample = 200);

  const std::vector<std::pair<std::int64_t, double>>& vaccHistory() const { return vaccHistory_; }
  std::optional<double> lastVacc() const {
    if (vaccHistory_.empty()) return std::nullopt;
    return vaccHistory_.back().second;
  }

  const numkit::BranchNet& net() const { return net_; }
  numkit::BranchNet& net() { return net_; }
  const Config& config() const { return cfg_; }

 private:
  std::vector<double> encodeAction(const agents::ActionValue& action) const;

  numkit::BranchNet net_;
  agents::ActionSpace space_;
  Config cfg_;
  numkit::AdamState opt_;
  numkit::BranchGrads grads_;
  std::vector<double> flatP_, flatG_;
  std::vector<std::pair<std::int64_t, double>> vaccHistory_;
};

/// Wraps an exact type 2 AP function as an oracle (no learning involved).
class ExactOracle : public PermissibilityOracle {
 public:
  explicit ExactOracle(ApFunction fn);
  ApLabel predict(std::span<const double> state, const agents::ActionValue& action) override;

 private:
  ApFunction fn_;
};

}  // namespace sapdrl::sap
