#include "sapdrl/sap/ap_function.hpp"

#include <memory>

#include "sapdrl/errors.hpp"

namespace sapdrl::sap {

ApFunction ApFunction::type1(Type1Fn fn) {
  ApFunction f;
  f.kind_ = Kind::Type1;
  f.type1_ = std::move(fn);
  return f;
}

ApFunction ApFunction::type2(Type2Fn fn) {
  ApFunction f;
  f.kind_ = Kind::Type2;
  f.type2_ = std::move(fn);
  return f;
}

ApLabel ApFunction::label(std::span<const double> state, const agents::ActionValue& action,
                          std::span<const double> nextState, bool nextDone) const {
  if (kind_ == Kind::Type1) return type1_(state, action, nextState, nextDone);
  return type2_(state, action);
}

ApLabel ApFunction::label(std::span<const double> state, const agents::ActionValue& action) const {
  if (kind_ == Kind::Type1)
    throw ContractError("type 1 permissibility needs the resulting state");
  return type2_(state, action);
}

ApLabel labelTransition(const ApFunction& fn, std::span<const double> state,
                        const agents::ActionValue& action, std::optional<NextState> next) {
  if (fn.kind() == ApFunction::Kind::Type1) {
    if (!next) throw ContractError("type 1 permissibility needs the resulting state");
    return fn.label(state, action, next->features, next->done);
  }
  return fn.label(state, action);
}

ApFunction composeAp(std::vector<ApFunction> functions) {
  if (functions.empty()) throw ConfigError("composeAp: at least one function required");
  bool anyType1 = false;
  for (const auto& f : functions)
    if (f.kind() == ApFunction::Kind::Type1) anyType1 = true;

  auto shared = std::make_shared<std::vector<ApFunction>>(std::move(functions));
  if (anyType1) {
    return ApFunction::type1([shared](std::span<const double> s, const agents::ActionValue& a,
                                      std::span<const double> ns, bool nd) {
      for (const auto& f : *shared)
        if (f.label(s, a, ns, nd) == ApLabel::NonPermissible) return ApLabel::NonPermissible;
      return ApLabel::Permissible;
    });
  }
  return ApFunction::type2([shared](std::span<const double> s, const agents::ActionValue& a) {
    for (const auto& f : *shared)
      if (f.label(s, a) == ApLabel::NonPermissible) return ApLabel::NonPermissible;
    return ApLabel::Permissible;
  });
}

}  // namespace sapdrl::sap
