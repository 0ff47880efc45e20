#pragma once

#include <algorithm>
#include <cstdint>

#include "sapdrl/numkit/rng.hpp"

namespace sapdrl::agents {

/// Ornstein-Uhlenbeck noise, x += theta*(mu - x) + sigma*N(0,1).
class OuNoise {
 public:
  OuNoise(double theta = 0.15, double sigma = 0.3, double mu = 0.0)
      : theta_(theta), sigma_(sigma), mu_(mu) {}

  double step(numkit::Rng& rng) {
    x_ += theta_ * (mu_ - x_) + sigma_ * rng.gaussian();
    return x_;
  }

  void reset(double x = 0.0) { x_ = x; }
  double value() const { return x_; }

 private:
  double theta_, sigma_, mu_;
  double x_ = 0.0;
};

/// Epsilon-greedy schedule: held at epsInit for the observation steps,
/// annealed linearly to epsFinal over the anneal steps, constant after.
struct EpsilonSchedule {
  double epsInit = 1.0;
  double epsFinal = 0.01;
  std::int64_t observeSteps = 0;
  std::int64_t annealSteps = 1;

  double at(std::int64_t t) const {
    if (t < observeSteps) return epsInit;
    if (t >= observeSteps + annealSteps) return epsFinal;
    const double frac = static_cast<double>(t - observeSteps) / static_cast<double>(annealSteps);
    return epsInit + (epsFinal - epsInit) * frac;
  }
};

}  // namespace sapdrl::agents
