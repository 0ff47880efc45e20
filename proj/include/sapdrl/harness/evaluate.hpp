#pragma once

#include <span>

#include <cstdint>
#include <filesystem>
#include <functional>
#include <vector>

#include <json.hpp>

#include "sapdrl/envs/env.hpp"
#include "sapdrl/envs/lane.hpp"
#include "sapdrl/numkit/mlp.hpp"

namespace sapdrl::harness {

struct EvalResult {
  double mean = 0.0;
  std::vector<double> scores;
};

using PolicyFn = std::function<agents::ActionValue(std::span<const double> scaledObs)>;
using StopFn = std::function<bool(const envs::Env&)>;

/// Greedy rollouts: no exploration, no guidance, fresh environment per
/// episode, all randomness from the given seed. Side-effect free and
/// repeatable. stepCap 0 means uncapped; extraStop (optional) ends an
/// episode early, e.g. after a completed lap.
EvalResult evaluatePolicy(const envs::Env& prototype, const PolicyFn& policy, int episodes,
                          std::uint64_t seed, std::int64_t stepCap, const StopFn& extraStop = {});

/// Episode step cap used when none is configured: cart-pole episodes end
/// on their own, flappy is capped so a perfect bird terminates, lane runs
/// to roughly two laps.
std::int64_t defaultEvalStepCap(const std::string& envId, const envs::Env& env);

/// Loads the policy network for the environment (q-net for discrete
/// tasks, actor for lane) and evaluates it.
EvalResult evaluateCheckpoint(const std::filesystem::path& checkpoint, const std::string& envId,
                              const nlohmann::json& envOverrides, int episodes,
                              std::uint64_t seed);

struct LapResult {
  double totalReward = 0.0;
  bool lapCompleted = false;
  std::int64_t steps = 0;
};

/// Drives one lap attempt of a track with a trained actor; ends at lap
/// completion, out-of-track, or a generous step cap.
LapResult evaluateLap(const envs::TrackSpec& track, numkit::Mlp& actor);

}  // namespace sapdrl::harness
