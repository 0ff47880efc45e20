#include "sapdrl/envs/cartpole.hpp"

#include <cmath>

#include "sapdrl/errors.hpp"

namespace sapdrl::envs {

namespace {
constexpr double kGravity = 9.8;
constexpr double kMassCart = 1.0;
constexpr double kMassPole = 0.1;
constexpr double kTotalMass = kMassCart + kMassPole;
constexpr double kHalfLength = 0.5;
constexpr double kPoleMassLength = kMassPole * kHalfLength;
constexpr double kForceMag = 10.0;
constexpr double kDt = 0.02;
}  // namespace

std::vector<double> CartPoleEnv::reset(numkit::Rng& rng) {
  x_ = rng.uniformIn(-0.05, 0.05);
  xDot_ = rng.uniformIn(-0.05, 0.05);
  theta_ = rng.uniformIn(-0.05, 0.05);
  thetaDot_ = rng.uniformIn(-0.05, 0.05);
  steps_ = 0;
  live_ = true;
  return observation();
}

StepResult CartPoleEnv::step(const agents::ActionValue& action) {
  if (!live_) throw ContractError("CartPoleEnv::step on a finished episode");
  if (!action.isDiscrete() || action.index < 0 || action.index > 1)
    throw ContractError("CartPoleEnv::step: action must be 0 (left) or 1 (right)");

  const double force = action.index == 1 ? kForceMag : -kForceMag;
  const double cosTheta = std::cos(theta_);
  const double sinTheta = std::sin(theta_);
  const double temp = (force + kPoleMassLength * thetaDot_ * thetaDot_ * sinTheta) / kTotalMass;
  const double thetaAcc = (kGravity * sinTheta - cosTheta * temp) /
                          (kHalfLength * (4.0 / 3.0 - kMassPole * cosTheta * cosTheta / kTotalMass));
  const double xAcc = temp - kPoleMassLength * thetaAcc * cosTheta / kTotalMass;

  x_ += kDt * xDot_;
  xDot_ += kDt * xAcc;
  theta_ += kDt * thetaDot_;
  thetaDot_ += kDt * thetaAcc;
  steps_ += 1;

  const bool fell = std::abs(theta_) > params_.angleLimitRad || std::abs(x_) > params_.positionLimit;
  const bool timeUp = steps_ >= params_.maxSteps;
  const bool done = fell || timeUp;
  if (done) live_ = false;
  return {observation(), 1.0, done};
}

int cartpoleRho(double theta, double tolerance) {
  if (std::abs(theta) < tolerance) return 0;
  return theta > 0.0 ? 1 : -1;
}

int cartpoleAp1(std::span<const double> state, std::span<const double> nextState, double tolerance) {
  const double theta = state[2], v = state[3];
  const double thetaNext = nextState[2], vNext = nextState[3];
  const bool tilted = cartpoleRho(thetaNext, tolerance) != 0;
  const bool speedGrew = std::abs(vNext) - std::abs(v) > 0.0;
  const bool angleGrew = std::abs(thetaNext) - std::abs(theta) > 0.0;
  return (tilted && speedGrew && angleGrew) ? 0 : 1;
}

}  // namespace sapdrl::envs
