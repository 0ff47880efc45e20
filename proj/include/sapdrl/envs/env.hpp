#pragma once

#include <span>

#include <memory>
#include <vector>

#include "sapdrl/agents/action.hpp"
#include "sapdrl/numkit/rng.hpp"

namespace sapdrl::envs {

struct StepResult {
  std::vector<double> state;
  double reward = 0.0;
  bool done = false;
};

/// Deterministic episodic environment. Instances are plain values: copying
/// one snapshots the complete simulation state (audits rely on this).
class Env {
 public:
  virtual ~Env() = default;
  virtual std::vector<double> reset(numkit::Rng& rng) = 0;
  virtual StepResult step(const agents::ActionValue& action) = 0;
  virtual std::size_t stateDim() const = 0;
  virtual agents::ActionSpace actionSpace() const = 0;
  virtual std::vector<double> observation() const = 0;
  virtual bool episodeLive() const = 0;
  virtual std::unique_ptr<Env> clone() const = 0;

  /// Per-feature multipliers applied before features reach any network.
  /// Defaults to all ones.
  virtual std::vector<double> observationScale() const {
    return std::vector<double>(stateDim(), 1.0);
  }
};

inline std::vector<double> scaleObservation(std::span<const double> raw,
                                            std::span<const double> scale) {
  std::vector<double> out(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) out[i] = raw[i] * scale[i];
  return out;
}

}  // namespace sapdrl::envs
