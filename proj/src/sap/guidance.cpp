#include "sapdrl/sap/guidance.hpp"

#include <algorithm>

#include "sapdrl/errors.hpp"

namespace sapdrl::sap {

void GuidanceConfig::validate() const {
  if (exploreSteps <= observeSteps)
    throw ConfigError("guidance: exploreSteps must exceed observeSteps");
  if (!(alphaExplore >= 0.0 && alphaExplore < 1.0) || !(alphaTrained >= 0.0 && alphaTrained < 1.0))
    throw ConfigError("guidance: alpha values must lie in [0, 1)");
  if (alphaTrained < alphaExplore)
    throw ConfigError("guidance: alphaTrained must be at least alphaExplore");
  if (!(accThreshold >= 0.0 && accThreshold <= 1.0))
    throw ConfigError("guidance: accThreshold must lie in [0, 1]");
  if (candidateCount == 0) throw ConfigError("guidance: candidateCount must be positive");
  if (datasetSize < 2) throw ConfigError("guidance: datasetSize must be at least 2");
}

bool shouldTrainPredictor(const std::vector<std::pair<std::int64_t, double>>& vaccHistory,
                          double accThreshold, std::int64_t t, std::int64_t exploreSteps) {
  if (t <= exploreSteps) return true;
  if (vaccHistory.empty()) return true;
  return vaccHistory.back().second < accThreshold;
}

double guidanceAlpha(std::int64_t t, std::int64_t /*observeSteps*/, std::int64_t exploreSteps,
                     std::optional<double> vacc, double accThreshold, double alphaExplore,
                     double alphaTrained) {
  if (t > exploreSteps && vacc.has_value() && *vacc >= accThreshold) return alphaTrained;
  return alphaExplore;
}

std::vector<agents::ActionValue> candidateSet(const agents::ActionSpace& space, std::size_t n,
                                              const agents::ActionValue& base, numkit::Rng& rng) {
  std::vector<agents::ActionValue> out;
  if (space.isDiscrete()) {
    out.reserve(static_cast<std::size_t>(space.count) - 1);
    for (int a = 0; a < space.count; ++a)
      if (a != base.index) out.push_back(agents::ActionValue::discrete(a));
    return out;
  }
  if (n == 0) throw ContractError("candidateSet: need at least one interval");
  out.reserve(n);
  const double width = (space.hi - space.lo) / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double lo = space.lo + width * static_cast<double>(i);
    out.push_back(agents::ActionValue::continuous(rng.uniformIn(lo, lo + width)));
  }
  return out;
}

agents::ActionValue guidedSelect(std::span<const double> state, const agents::ActionValue& base,
                                 PermissibilityOracle& oracle, const GuidanceConfig& cfg,
                                 const agents::ActionSpace& space, std::int64_t t,
                                 std::optional<double> vacc, numkit::Rng& rng) {
  if (t <= cfg.observeSteps) return base;

  const double alpha = guidanceAlpha(t, cfg.observeSteps, cfg.exploreSteps, vacc,
                                     cfg.accThreshold, cfg.alphaExplore, cfg.alphaTrained);
  if (oracle.predict(state, base) == ApLabel::Permissible) return base;
  if (rng.uniform() >= alpha) return base;

  const auto candidates = candidateSet(space, cfg.candidateCount, base, rng);
  const auto labels = oracle.predictBatch(state, candidates);
  std::vector<agents::ActionValue> permissible;
  for (std::size_t i = 0; i < candidates.size(); ++i)
    if (labels[i] == ApLabel::Permissible) permissible.push_back(candidates[i]);
  if (permissible.empty()) return base;
  return permissible[static_cast<std::size_t>(rng.uniformInt(permissible.size()))];
}

agents::ActionValue ap2ResampleLane(double trackPos, double action, double previousAction,
                                    double trackPosDelta, numkit::Rng& rng) {
  if (!(trackPosDelta > 0.0)) return agents::ActionValue::continuous(action);
  const bool leftOfCenter = trackPos > 0.0;
  const bool rightOfCenter = trackPos < 0.0;
  if (leftOfCenter && action > previousAction)
    return agents::ActionValue::continuous(rng.uniformIn(-1.0, previousAction));
  if (rightOfCenter && action < previousAction)
    return agents::ActionValue::continuous(rng.uniformIn(previousAction, 1.0));
  return agents::ActionValue::continuous(action);
}

agents::Transition virtualStop(agents::Transition transition, ApLabel label,
                               const VirtualStopPolicy& policy) {
  if (policy.enabled && label == ApLabel::NonPermissible) {
    transition.reward = policy.penalty;
    transition.virtualDone = true;
  }
  return transition;
}

}  // namespace sapdrl::sap
