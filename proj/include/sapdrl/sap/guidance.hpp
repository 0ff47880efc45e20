#pragma once

#include <span>

#include <cstdint>
#include <optional>
#include <vector>

#include "sapdrl/agents/action.hpp"
#include "sapdrl/agents/replay.hpp"
#include "sapdrl/numkit/rng.hpp"
#include "sapdrl/sap/predictor.hpp"

namespace sapdrl::sap {

/// Every knob of permissibility-guided exploration.
struct GuidanceConfig {
  std::int64_t observeSteps = 100;    // guidance off while t <= observeSteps
  std::int64_t exploreSteps = 2000;   // exploration phase ends here; must exceed observeSteps
  double alphaExplore = 0.3;          // consult probability during exploration
  double alphaTrained = 0.7;          // consult probability after, once reliable
  double accThreshold = 0.9;          // validation accuracy declaring the predictor reliable
  std::size_t candidateCount = 2;     // candidate set size for continuous actions
  std::size_t datasetSize = 2000;     // balanced sample size per predictor training step
  double lambda = 0.01;               // predictor L2 weight
  std::size_t knowledgeCapacity = 25000;

  void validate() const;  // throws ConfigError
};

/// Whether the predictor should train this step: always during the warmup
/// (through the exploration phase), and afterwards whenever the last
/// validation accuracy sits below the reliability threshold. Training
/// resumes if accuracy later falls back under the threshold.
bool shouldTrainPredictor(const std::vector<std::pair<std::int64_t, double>>& vaccHistory,
                          double accThreshold, std::int64_t t, std::int64_t exploreSteps);

/// Consult probability for the current step: alphaTrained once the
/// exploration phase is over and the predictor is reliable, alphaExplore
/// otherwise. A missing accuracy counts as unreliable.
double guidanceAlpha(std::int64_t t, std::int64_t observeSteps, std::int64_t exploreSteps,
                     std::optional<double> vacc, double accThreshold, double alphaExplore,
                     double alphaTrained);

/// Candidate actions to offer the oracle in place of a rejected base
/// action. Continuous spaces are split into n equal sub-intervals with one
/// uniform draw from each (low-variance uniform sampling); discrete spaces
/// yield every action except the base one.
std::vector<agents::ActionValue> candidateSet(const agents::ActionSpace& space, std::size_t n,
                                              const agents::ActionValue& base, numkit::Rng& rng);

/// Permissibility-guided action selection around a base action the agent
/// already chose. During observation the base action passes through
/// untouched. Afterwards the oracle judges it; a base action predicted
/// permissible always passes, a rejected one is replaced - with
/// probability alpha - by a uniformly random predicted-permissible
/// candidate. When no candidate is predicted permissible the base action
/// is kept.
agents::ActionValue guidedSelect(std::span<const double> state, const agents::ActionValue& base,
                                 PermissibilityOracle& oracle, const GuidanceConfig& cfg,
                                 const agents::ActionSpace& space, std::int64_t t,
                                 std::optional<double> vacc, numkit::Rng& rng);

/// Steering constraint for lane keeping, applied only when the car moved
/// away from the track axis (trackPosDelta > 0): on the left of center a
/// further-left steering (action > previous) is replaced by a uniform draw
/// from (-1, previous); on the right of center a further-right steering
/// (action < previous) by a draw from (previous, 1).
agents::ActionValue ap2ResampleLane(double trackPos, double action, double previousAction,
                                    double trackPosDelta, numkit::Rng& rng);

/// Stored-transition transform for non-permissible experiences: the copy
/// gets the penalty reward and virtualDone set, which cuts bootstrapping,
/// while the live episode keeps running.
struct VirtualStopPolicy {
  bool enabled = false;
  double penalty = -1.0;
};

agents::Transition virtualStop(agents::Transition transition, ApLabel label,
                               const VirtualStopPolicy& policy);

}  // namespace sapdrl::sap
