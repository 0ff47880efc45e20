#include "sapdrl/envs/flappy.hpp"

#include <algorithm>
#include <cmath>

#include "sapdrl/errors.hpp"

namespace sapdrl::envs {

std::vector<double> FlappyEnv::reset(numkit::Rng& rng) {
  y_ = 0.5 * params_.screenHeight - 0.5 * params_.birdSize;
  v_ = 0.0;
  crossed_ = 0;
  pipes_.clear();
  pipeRng_ = numkit::Rng(rng.raw());
  spawnPipes();
  live_ = true;
  return observation();
}

void FlappyEnv::spawnPipes() {
  // keep pipes generated well past the bird so features always have a next pipe
  const double horizon = params_.birdX + 4.0 * params_.pipeSpacing;
  double nextX = pipes_.empty() ? params_.firstPipeX : pipes_.back().x + params_.pipeSpacing;
  while (nextX < horizon) {
    const double lo = params_.gapCenterMargin;
    const double hi = params_.screenHeight - params_.gapCenterMargin;
    pipes_.push_back({nextX, pipeRng_.uniformIn(lo, hi)});
    nextX += params_.pipeSpacing;
  }
}

const FlappyEnv::Pipe& FlappyEnv::nextPipe() const {
  for (const auto& p : pipes_)
    if (p.x + params_.pipeWidth >= params_.birdX) return p;
  return pipes_.back();
}

std::vector<double> FlappyEnv::observation() const {
  const Pipe& p = nextPipe();
  const double dx = p.x - params_.birdX;
  const double birdCenter = y_ + 0.5 * params_.birdSize;
  const double deltaC = p.gapCenter - birdCenter;
  const double lowerTop = p.gapCenter + 0.5 * params_.pipeGap;
  const double deltaL = lowerTop - birdCenter;
  return {y_, v_, dx, deltaC, deltaL};
}

std::vector<double> FlappyEnv::observationScale() const {
  const double h = params_.screenHeight;
  return {1.0 / h, 1.0 / params_.fallSpeedCap, 1.0 / params_.pipeSpacing, 1.0 / h, 1.0 / h};
}

bool FlappyEnv::hitsAnything() const {
  if (y_ < 0.0 || y_ + params_.birdSize > params_.screenHeight) return true;
  for (const auto& p : pipes_) {
    const bool overlapX = p.x < params_.birdX + params_.birdSize && p.x + params_.pipeWidth > params_.birdX;
    if (!overlapX) continue;
    const double gapTop = p.gapCenter - 0.5 * params_.pipeGap;
    const double gapBottom = p.gapCenter + 0.5 * params_.pipeGap;
    if (y_ < gapTop || y_ + params_.birdSize > gapBottom) return true;
  }
  return false;
}

StepResult FlappyEnv::step(const agents::ActionValue& action) {
  if (!live_) throw ContractError("FlappyEnv::step on a finished episode");
  if (!action.isDiscrete() || action.index < 0 || action.index > 1)
    throw ContractError("FlappyEnv::step: action must be 0 (flap) or 1 (no flap)");

  if (action.index == kFlap) {
    v_ = params_.flapVelocity;
  } else {
    v_ = std::min(v_ + params_.gravity, params_.fallSpeedCap);
  }
  y_ += v_;

  // the next pipe's trailing edge is at or ahead of the bird; a pipe is
  // crossed when scrolling moves that edge behind the bird
  const double trailingBefore = nextPipe().x + params_.pipeWidth;
  for (auto& p : pipes_) p.x -= params_.scrollPerStep;
  while (!pipes_.empty() && pipes_.front().x + params_.pipeWidth < params_.birdX - params_.pipeSpacing)
    pipes_.pop_front();
  spawnPipes();
  const bool passedPipe = trailingBefore - params_.scrollPerStep < params_.birdX;

  const bool crash = hitsAnything();
  double reward = 0.1;
  if (passedPipe) {
    crossed_ += 1;
    reward = 1.0;
  }
  if (crash) {
    reward = -1.0;
    live_ = false;
  }
  return {observation(), reward, crash};
}

int flappyAp2(std::span<const double> state, int action) {
  const double deltaC = state[3], deltaL = state[4];
  const bool c1 = deltaC > 0.0 && action == FlappyEnv::kFlap;        // above center, flapping up
  const bool c2 = deltaL < 0.0 && action == FlappyEnv::kNoFlap;     // below lower-pipe top, falling
  return (c1 || c2) ? 0 : 1;
}

int flappyAp1(int action, std::span<const double> nextState, bool crashed) {
  const double deltaCNext = nextState[3];
  const bool c3 = deltaCNext < 0.0 && action == FlappyEnv::kNoFlap && crashed;
  return c3 ? 0 : 1;
}

}  // namespace sapdrl::envs
