#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "sapdrl/agents/action.hpp"

namespace sapdrl::sap {

/// 1 = permissible, 0 = non-permissible. An action is non-permissible when
/// it is known that it cannot lead to an optimal long-run return.
enum class ApLabel : int { NonPermissible = 0, Permissible = 1 };

inline int labelValue(ApLabel l) { return static_cast<int>(l); }
inline ApLabel makeLabel(int v) { return v == 0 ? ApLabel::NonPermissible : ApLabel::Permissible; }

/// A permissibility rule over transitions. Type 1 rules judge an executed
/// action from the resulting state; type 2 rules judge (state, action)
/// before execution. Evaluators must be pure: same inputs, same label.
class ApFunction {
 public:
  enum class Kind { Type1, Type2 };

  using Type1Fn = std::function<ApLabel(std::span<const double> state,
                                        const agents::ActionValue& action,
                                        std::span<const double> nextState, bool nextDone)>;
  using Type2Fn = std::function<ApLabel(std::span<const double> state,
                                        const agents::ActionValue& action)>;

  static ApFunction type1(Type1Fn fn);
  static ApFunction type2(Type2Fn fn);

  Kind kind() const { return kind_; }

  /// Full-transition form; valid for both kinds.
  ApLabel label(std::span<const double> state, const agents::ActionValue& action,
                std::span<const double> nextState, bool nextDone) const;

  /// Pre-execution form; throws ContractError for type 1 rules.
  ApLabel label(std::span<const double> state, const agents::ActionValue& action) const;

 private:
  ApFunction() = default;
  Kind kind_ = Kind::Type2;
  Type1Fn type1_;
  Type2Fn type2_;
};

struct NextState {
  std::span<const double> features;
  bool done = false;
};

/// Labels a transition, enforcing that type 1 rules get a next state.
ApLabel labelTransition(const ApFunction& fn, std::span<const double> state,
                        const agents::ActionValue& action,
                        std::optional<NextState> next = std::nullopt);

/// Disjunction of non-permissibility: the composite labels 0 when any
/// member does. The result is type 1 if any member is type 1.
ApFunction composeAp(std::vector<ApFunction> functions);

}  // namespace sapdrl::sap
