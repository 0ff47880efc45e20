#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>

#include <json.hpp>

#include "sapdrl/envs/env.hpp"
#include "sapdrl/numkit/branch_net.hpp"
#include "sapdrl/numkit/mlp.hpp"
#include "sapdrl/sap/guidance.hpp"

namespace sapdrl::harness {

enum class GuidanceMode { None, Ap1, Ap2, Ap1Ap2 };
enum class VStopMode { Off, On, Auto };

std::string guidanceModeName(GuidanceMode m);
GuidanceMode guidanceModeFromName(const std::string& name);
std::string vstopModeName(VStopMode m);
VStopMode vstopModeFromName(const std::string& name);

/// Agent hyperparameters; which fields apply depends on the agent kind.
struct AgentHyper {
  double gamma = 0.99;
  double lr = 0.0005;         // q-net learning rate
  double lrActor = 0.0001;
  double lrCritic = 0.001;
  double tau = 0.001;
  std::size_t batchSize = 128;
  std::size_t replayCapacity = 50000;
  double epsInit = 1.0;
  double epsFinal = 0.01;
  double ouTheta = 0.15;
  double ouSigma = 0.3;
  double rewardScale = 1.0;
  double predictorLr = 0.001;
};

struct ExperimentConfig {
  std::string env;    // cartpole | flappy | lane
  std::string agent;  // ddqn | ddpg
  GuidanceMode guidance = GuidanceMode::None;
  VStopMode vstop = VStopMode::Auto;
  std::uint64_t seed = 0;
  std::int64_t totalSteps = 0;
  sap::GuidanceConfig guidanceCfg;
  AgentHyper hyper;
  nlohmann::json envOverrides = nlohmann::json::object();
  std::int64_t evalEvery = 0;  // 0 = no periodic evaluation
  int evalEpisodes = 100;
  std::filesystem::path outDir = ".";

  /// Appendix-style defaults for an environment (and its natural agent).
  static ExperimentConfig defaults(const std::string& env);

  /// Applies a JSON object over this config; unknown keys are rejected.
  void applyJson(const nlohmann::json& j);
  static ExperimentConfig fromJsonFile(const std::filesystem::path& path);
  nlohmann::json toJson() const;

  /// Full consistency check (env/agent pairing, guidance availability,
  /// guidance knob sanity). Throws ConfigError.
  void validate() const;

  bool virtualStoppingEnabled() const;
  std::string runId() const;

  /// Signature of everything except the seed; runs with equal signatures
  /// are aggregable.
  std::string aggregateKey() const;
};

/// Environment construction honoring envOverrides. Unknown override keys
/// are rejected.
std::unique_ptr<envs::Env> makeEnv(const std::string& envId, const nlohmann::json& overrides);

/// Network shapes per task.
numkit::Mlp makeQNet(const std::string& envId);
numkit::Mlp makeActor();
numkit::BranchNet makeCritic();
numkit::BranchNet makePredictorNet(const std::string& envId);

}  // namespace sapdrl::harness
