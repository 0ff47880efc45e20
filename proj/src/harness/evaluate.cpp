#include "sapdrl/harness/evaluate.hpp"

#include <cmath>

#include "sapdrl/errors.hpp"
#include "sapdrl/harness/config.hpp"
#include "sapdrl/numkit/checkpoint.hpp"

namespace sapdrl::harness {

EvalResult evaluatePolicy(const envs::Env& prototype, const PolicyFn& policy, int episodes,
                          std::uint64_t seed, std::int64_t stepCap, const StopFn& extraStop) {
  EvalResult result;
  numkit::Rng rng(seed);
  for (int ep = 0; ep < episodes; ++ep) {
    auto env = prototype.clone();
    std::vector<double> raw = env->reset(rng);
    const auto scale = env->observationScale();
    double total = 0.0;
    std::int64_t steps = 0;
    while (true) {
      const auto action = policy(envs::scaleObservation(raw, scale));
      const auto sr = env->step(action);
      total += sr.reward;
      steps += 1;
      if (sr.done) break;
      if (stepCap > 0 && steps >= stepCap) break;
      if (extraStop && extraStop(*env)) break;
      raw = sr.state;
    }
    result.scores.push_back(total);
  }
  double sum = 0.0;
  for (double s : result.scores) sum += s;
  result.mean = result.scores.empty() ? 0.0 : sum / static_cast<double>(result.scores.size());
  return result;
}

std::int64_t defaultEvalStepCap(const std::string& envId, const envs::Env& env) {
  if (envId == "cartpole") return 0;  // the env caps itself at 200 steps
  if (envId == "flappy") return 2000;
  // lane: about two laps
  const auto* lane = dynamic_cast<const envs::LaneEnv*>(&env);
  if (lane) {
    const double metersPerStep = lane->params().speedKmh / 3.6 * lane->params().dt;
    return static_cast<std::int64_t>(2.2 * lane->track().totalLength() / metersPerStep);
  }
  return 10000;
}

EvalResult evaluateCheckpoint(const std::filesystem::path& checkpoint, const std::string& envId,
                              const nlohmann::json& envOverrides, int episodes,
                              std::uint64_t seed) {
  auto env = makeEnv(envId, envOverrides);
  const auto space = env->actionSpace();
  if (space.isDiscrete()) {
    numkit::Mlp qNet = makeQNet(envId);
    numkit::loadMlp(qNet, checkpoint);
    auto policy = [&qNet](std::span<const double> s) {
      const auto q = qNet.forward(s);
      std::size_t best = 0;
      for (std::size_t i = 1; i < q.size(); ++i)
        if (q[i] > q[best]) best = i;
      return agents::ActionValue::discrete(static_cast<int>(best));
    };
    return evaluatePolicy(*env, policy, episodes, seed, defaultEvalStepCap(envId, *env));
  }

  numkit::Mlp actor = makeActor();
  numkit::loadMlp(actor, checkpoint);
  auto policy = [&actor](std::span<const double> s) {
    return agents::ActionValue::continuous(actor.forward(s)[0]);
  };
  auto stopAtLap = [](const envs::Env& e) {
    const auto* lane = dynamic_cast<const envs::LaneEnv*>(&e);
    return lane != nullptr && lane->lapCompleted();
  };
  return evaluatePolicy(*env, policy, episodes, seed, defaultEvalStepCap(envId, *env), stopAtLap);
}

LapResult evaluateLap(const envs::TrackSpec& track, numkit::Mlp& actor) {
  envs::LaneEnv env(track);
  numkit::Rng rng(0);  // lane resets are deterministic anyway
  std::vector<double> raw = env.reset(rng);
  const auto scale = env.observationScale();
  const double metersPerStep = env.params().speedKmh / 3.6 * env.params().dt;
  const std::int64_t cap = static_cast<std::int64_t>(2.0 * track.totalLength() / metersPerStep);

  LapResult result;
  while (result.steps < cap) {
    const auto scaled = envs::scaleObservation(raw, scale);
    const auto sr = env.step(agents::ActionValue::continuous(actor.forward(scaled)[0]));
    result.totalReward += sr.reward;
    result.steps += 1;
    if (sr.done) break;  // out of track
    if (env.lapCompleted()) {
      result.lapCompleted = true;
      break;
    }
    raw = sr.state;
  }
  return result;
}

}  // namespace sapdrl::harness
