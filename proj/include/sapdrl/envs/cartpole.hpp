#pragma once

#include <span>

#include "sapdrl/envs/env.hpp"

namespace sapdrl::envs {

/// Classic cart-pole balancing. State is [cart position, cart velocity,
/// pole angle (rad), pole tip velocity]; actions are {0 = push left,
/// 1 = push right}. Physics follow the standard formulation: force 10 N,
/// gravity 9.8, cart mass 1.0, pole mass 0.1, pole half-length 0.5, Euler
/// integration at 0.02 s. Reward is 1.0 every step including termination.
class CartPoleEnv final : public Env {
 public:
  struct Params {
    double angleLimitRad = 12.0 * 3.14159265358979323846 / 180.0;
    double positionLimit = 2.4;
    int maxSteps = 200;
  };

  CartPoleEnv() = default;
  explicit CartPoleEnv(Params p) : params_(p) {}

  std::vector<double> reset(numkit::Rng& rng) override;
  StepResult step(const agents::ActionValue& action) override;
  std::size_t stateDim() const override { return 4; }
  agents::ActionSpace actionSpace() const override { return agents::ActionSpace::discrete(2); }
  std::vector<double> observation() const override { return {x_, xDot_, theta_, thetaDot_}; }
  bool episodeLive() const override { return live_; }
  std::unique_ptr<Env> clone() const override { return std::make_unique<CartPoleEnv>(*this); }

  double poleAngle() const { return theta_; }
  double poleVelocity() const { return thetaDot_; }
  int stepsTaken() const { return steps_; }
  const Params& params() const { return params_; }

 private:
  Params params_;
  double x_ = 0.0, xDot_ = 0.0, theta_ = 0.0, thetaDot_ = 0.0;
  int steps_ = 0;
  bool live_ = false;
};

/// Pole tilt direction: 0 inside the +-tolerance band around vertical,
/// otherwise the sign of the angle.
int cartpoleRho(double theta, double tolerance = 0.05);

/// Permissibility of an executed cart-pole action: non-permissible when
/// the pole ends tilted outside the band with both its angular distance
/// and tip speed having grown.
int cartpoleAp1(std::span<const double> state, std::span<const double> nextState,
                double tolerance = 0.05);

}  // namespace sapdrl::envs
