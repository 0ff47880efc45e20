#pragma once

#include <span>

#include <deque>

#include "sapdrl/envs/env.hpp"

namespace sapdrl::envs {

/// Feature-state flappy bird. The screen coordinate grows downward. State
/// is [y, v, dx, deltaC, deltaL]:
///   y      bird vertical position (px)
///   v      vertical velocity (px/step, positive = downward)
///   dx     horizontal distance to the next pipe's leading edge (px)
///   deltaC signed vertical distance to the next gap center (positive = bird above)
///   deltaL signed vertical distance to the next lower-pipe top (positive = bird above)
/// Actions: {0 = flap, 1 = no flap}. Flapping sets v = -9; gravity adds +1
/// per step up to the fall-speed cap. Reward: +1.0 on crossing a pipe,
/// -1.0 on crash (terminal), +0.1 otherwise.
class FlappyEnv final : public Env {
 public:
  struct Params {
    double screenHeight = 512.0;
    double pipeGap = 100.0;        // hard difficulty
    double pipeSpacing = 144.0;
    double pipeWidth = 52.0;
    double scrollPerStep = 4.0;
    double birdSize = 24.0;
    double birdX = 60.0;
    double firstPipeX = 300.0;
    double flapVelocity = -9.0;
    double gravity = 1.0;
    double fallSpeedCap = 10.0;
    double gapCenterMargin = 80.0;  // gap centers drawn uniformly inside this margin
  };

  static constexpr int kFlap = 0;
  static constexpr int kNoFlap = 1;

  FlappyEnv() = default;
  explicit FlappyEnv(Params p) : params_(p) {}

  std::vector<double> reset(numkit::Rng& rng) override;
  StepResult step(const agents::ActionValue& action) override;
  std::size_t stateDim() const override { return 5; }
  agents::ActionSpace actionSpace() const override { return agents::ActionSpace::discrete(2); }
  std::vector<double> observation() const override;
  bool episodeLive() const override { return live_; }
  std::unique_ptr<Env> clone() const override { return std::make_unique<FlappyEnv>(*this); }
  std::vector<double> observationScale() const override;

  const Params& params() const { return params_; }
  int pipesCrossed() const { return crossed_; }

  struct Pipe {
    double x;          // leading edge
    double gapCenter;  // vertical center of the opening
  };
  const std::deque<Pipe>& pipes() const { return pipes_; }

 private:
  void spawnPipes();
  const Pipe& nextPipe() const;
  bool hitsAnything() const;

  Params params_;
  double y_ = 0.0, v_ = 0.0;
  std::deque<Pipe> pipes_;
  numkit::Rng pipeRng_{0};
  int crossed_ = 0;
  bool live_ = false;
};

/// Pre-execution permissibility: flapping while above the gap center, or
/// not flapping while below the lower pipe top, is non-permissible.
int flappyAp2(std::span<const double> state, int action);

/// Post-execution permissibility: a no-flap that ends in a crash below the
/// gap center line is non-permissible.
int flappyAp1(int action, std::span<const double> nextState, bool crashed);

}  // namespace sapdrl::envs
