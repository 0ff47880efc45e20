#include "sapdrl/harness/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "sapdrl/envs/cartpole.hpp"
#include "sapdrl/envs/flappy.hpp"
#include "sapdrl/envs/lane.hpp"
#include "sapdrl/errors.hpp"

namespace sapdrl::harness {

using nlohmann::json;

std::string guidanceModeName(GuidanceMode m) {
  switch (m) {
    case GuidanceMode::None: return "none";
    case GuidanceMode::Ap1: return "ap1";
    case GuidanceMode::Ap2: return "ap2";
    case GuidanceMode::Ap1Ap2: return "ap1+ap2";
  }
  return "?";
}

GuidanceMode guidanceModeFromName(const std::string& name) {
  if (name == "none") return GuidanceMode::None;
  if (name == "ap1") return GuidanceMode::Ap1;
  if (name == "ap2") return GuidanceMode::Ap2;
  if (name == "ap1+ap2") return GuidanceMode::Ap1Ap2;
  throw ConfigError("unknown guidance mode '" + name + "'");
}

std::string vstopModeName(VStopMode m) {
  switch (m) {
    case VStopMode::Off: return "off";
    case VStopMode::On: return "on";
    case VStopMode::Auto: return "auto";
  }
  return "?";
}

VStopMode vstopModeFromName(const std::string& name) {
  if (name == "off") return VStopMode::Off;
  if (name == "on") return VStopMode::On;
  if (name == "auto") return VStopMode::Auto;
  throw ConfigError("unknown vstop mode '" + name + "'");
}

namespace {

bool isLaneEnv(const std::string& env) { return env == "lane" || env.rfind("lane-", 0) == 0; }

std::string baseEnvName(const std::string& env) { return isLaneEnv(env) ? "lane" : env; }

void rejectUnknownKeys(const json& j, const std::set<std::string>& known, const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (!known.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

}  // namespace

ExperimentConfig ExperimentConfig::defaults(const std::string& env) {
  ExperimentConfig cfg;
  cfg.env = env;
  const std::string base = baseEnvName(env);
  if (base == "cartpole") {
    cfg.agent = "ddqn";
    cfg.totalSteps = 15000;
    cfg.hyper.gamma = 0.99;
    cfg.hyper.lr = 0.0005;
    cfg.hyper.replayCapacity = 50000;
    cfg.guidanceCfg = {100, 2000, 0.3, 0.7, 0.9, 2, 2000, 0.01, 25000};
  } else if (base == "flappy") {
    cfg.agent = "ddqn";
    cfg.totalSteps = 30000;
    cfg.hyper.gamma = 0.99;
    cfg.hyper.lr = 0.0005;
    cfg.hyper.replayCapacity = 50000;
    cfg.guidanceCfg = {1000, 4500, 0.3, 0.8, 0.95, 2, 2000, 0.01, 25000};
  } else if (base == "lane") {
    cfg.agent = "ddpg";
    cfg.totalSteps = 15000;
    cfg.hyper.gamma = 0.9;
    cfg.hyper.lrActor = 0.0001;
    cfg.hyper.lrCritic = 0.001;
    cfg.hyper.replayCapacity = 100000;
    cfg.hyper.rewardScale = 0.01;
    cfg.guidanceCfg = {200, 1200, 0.5, 0.9, 0.7, 128, 2000, 0.01, 10000};
  } else {
    throw ConfigError("unknown env '" + env + "'");
  }
  return cfg;
}

void ExperimentConfig::applyJson(const json& j) {
  rejectUnknownKeys(j, {"env", "agent", "guidance", "vstop", "seed", "totalSteps", "guidanceCfg",
                        "hyper", "envOverrides", "evalEvery", "evalEpisodes", "outDir"},
                    "experiment config");
  if (j.contains("env")) env = j.at("env").get<std::string>();
  if (j.contains("agent")) agent = j.at("agent").get<std::string>();
  if (j.contains("guidance")) guidance = guidanceModeFromName(j.at("guidance").get<std::string>());
  if (j.contains("vstop")) vstop = vstopModeFromName(j.at("vstop").get<std::string>());
  if (j.contains("seed")) seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("totalSteps")) totalSteps = j.at("totalSteps").get<std::int64_t>();
  if (j.contains("evalEvery")) evalEvery = j.at("evalEvery").get<std::int64_t>();
  if (j.contains("evalEpisodes")) evalEpisodes = j.at("evalEpisodes").get<int>();
  if (j.contains("outDir")) outDir = j.at("outDir").get<std::string>();
  if (j.contains("envOverrides")) envOverrides = j.at("envOverrides");

  if (j.contains("guidanceCfg")) {
    const json& g = j.at("guidanceCfg");
    rejectUnknownKeys(g, {"observeSteps", "exploreSteps", "alphaExplore", "alphaTrained",
                          "accThreshold", "candidateCount", "datasetSize", "lambda",
                          "knowledgeCapacity"},
                      "guidanceCfg");
    if (g.contains("observeSteps")) guidanceCfg.observeSteps = g.at("observeSteps").get<std::int64_t>();
    if (g.contains("exploreSteps")) guidanceCfg.exploreSteps = g.at("exploreSteps").get<std::int64_t>();
    if (g.contains("alphaExplore")) guidanceCfg.alphaExplore = g.at("alphaExplore").get<double>();
    if (g.contains("alphaTrained")) guidanceCfg.alphaTrained = g.at("alphaTrained").get<double>();
    if (g.contains("accThreshold")) guidanceCfg.accThreshold = g.at("accThreshold").get<double>();
    if (g.contains("candidateCount")) guidanceCfg.candidateCount = g.at("candidateCount").get<std::size_t>();
    if (g.contains("datasetSize")) guidanceCfg.datasetSize = g.at("datasetSize").get<std::size_t>();
    if (g.contains("lambda")) guidanceCfg.lambda = g.at("lambda").get<double>();
    if (g.contains("knowledgeCapacity")) guidanceCfg.knowledgeCapacity = g.at("knowledgeCapacity").get<std::size_t>();
  }

  if (j.contains("hyper")) {
    const json& h = j.at("hyper");
    rejectUnknownKeys(h, {"gamma", "lr", "lrActor", "lrCritic", "tau", "batchSize",
                          "replayCapacity", "epsInit", "epsFinal", "ouTheta", "ouSigma",
                          "rewardScale", "predictorLr"},
                      "hyper");
    if (h.contains("gamma")) hyper.gamma = h.at("gamma").get<double>();
    if (h.contains("lr")) hyper.lr = h.at("lr").get<double>();
    if (h.contains("lrActor")) hyper.lrActor = h.at("lrActor").get<double>();
    if (h.contains("lrCritic")) hyper.lrCritic = h.at("lrCritic").get<double>();
    if (h.contains("tau")) hyper.tau = h.at("tau").get<double>();
    if (h.contains("batchSize")) hyper.batchSize = h.at("batchSize").get<std::size_t>();
    if (h.contains("replayCapacity")) hyper.replayCapacity = h.at("replayCapacity").get<std::size_t>();
    if (h.contains("epsInit")) hyper.epsInit = h.at("epsInit").get<double>();
    if (h.contains("epsFinal")) hyper.epsFinal = h.at("epsFinal").get<double>();
    if (h.contains("ouTheta")) hyper.ouTheta = h.at("ouTheta").get<double>();
    if (h.contains("ouSigma")) hyper.ouSigma = h.at("ouSigma").get<double>();
    if (h.contains("rewardScale")) hyper.rewardScale = h.at("rewardScale").get<double>();
    if (h.contains("predictorLr")) hyper.predictorLr = h.at("predictorLr").get<double>();
  }
}

ExperimentConfig ExperimentConfig::fromJsonFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config parse error in " + path.string() + ": " + e.what());
  }
  if (!j.contains("env")) throw ConfigError("config file needs an \"env\" key");
  ExperimentConfig cfg = defaults(j.at("env").get<std::string>());
  cfg.applyJson(j);
  return cfg;
}

json ExperimentConfig::toJson() const {
  json j;
  j["env"] = env;
  j["agent"] = agent;
  j["guidance"] = guidanceModeName(guidance);
  j["vstop"] = vstopModeName(vstop);
  j["seed"] = seed;
  j["totalSteps"] = totalSteps;
  j["evalEvery"] = evalEvery;
  j["evalEpisodes"] = evalEpisodes;
  j["outDir"] = outDir.string();
  j["envOverrides"] = envOverrides;
  j["guidanceCfg"] = {{"observeSteps", guidanceCfg.observeSteps},
                      {"exploreSteps", guidanceCfg.exploreSteps},
                      {"alphaExplore", guidanceCfg.alphaExplore},
                      {"alphaTrained", guidanceCfg.alphaTrained},
                      {"accThreshold", guidanceCfg.accThreshold},
                      {"candidateCount", guidanceCfg.candidateCount},
                      {"datasetSize", guidanceCfg.datasetSize},
                      {"lambda", guidanceCfg.lambda},
                      {"knowledgeCapacity", guidanceCfg.knowledgeCapacity}};
  j["hyper"] = {{"gamma", hyper.gamma},
                {"lr", hyper.lr},
                {"lrActor", hyper.lrActor},
                {"lrCritic", hyper.lrCritic},
                {"tau", hyper.tau},
                {"batchSize", hyper.batchSize},
                {"replayCapacity", hyper.replayCapacity},
                {"epsInit", hyper.epsInit},
                {"epsFinal", hyper.epsFinal},
                {"ouTheta", hyper.ouTheta},
                {"ouSigma", hyper.ouSigma},
                {"rewardScale", hyper.rewardScale},
                {"predictorLr", hyper.predictorLr}};
  return j;
}

void ExperimentConfig::validate() const {
  const std::string base = baseEnvName(env);
  if (base != "cartpole" && base != "flappy" && base != "lane")
    throw ConfigError("unknown env '" + env + "'");
  if (agent != "ddqn" && agent != "ddpg") throw ConfigError("unknown agent '" + agent + "'");
  if (base == "lane" && agent != "ddpg")
    throw ConfigError("lane keeping has a continuous action space; use the ddpg agent");
  if (base != "lane" && agent != "ddqn")
    throw ConfigError(base + " has a discrete action space; use the ddqn agent");
  if (base == "cartpole" &&
      (guidance == GuidanceMode::Ap2 || guidance == GuidanceMode::Ap1Ap2))
    throw ConfigError("cartpole has no type 2 AP function; guidance modes: none, ap1");
  if (totalSteps <= 0) throw ConfigError("totalSteps must be positive");
  guidanceCfg.validate();
  if (hyper.batchSize == 0 || hyper.replayCapacity < hyper.batchSize)
    throw ConfigError("replay capacity must hold at least one batch");
}

bool ExperimentConfig::virtualStoppingEnabled() const {
  if (guidance == GuidanceMode::None) return false;
  switch (vstop) {
    case VStopMode::Off: return false;
    case VStopMode::On: return true;
    case VStopMode::Auto:
      // lane keeping's reward already separates the classes; the delayed
      // reward tasks need the shorter credit-assignment horizon
      return baseEnvName(env) != "lane";
  }
  return false;
}

std::string ExperimentConfig::runId() const {
  std::ostringstream id;
  std::string mode = guidanceModeName(guidance);
  for (auto& c : mode)
    if (c == '+') c = '_';
  id << env << '-' << agent << '-' << mode << "-vs_" << (virtualStoppingEnabled() ? "on" : "off")
     << "-seed" << seed;
  return id.str();
}

std::string ExperimentConfig::aggregateKey() const {
  json j = toJson();
  j.erase("seed");
  j.erase("outDir");
  return j.dump();
}

std::unique_ptr<envs::Env> makeEnv(const std::string& envId, const json& overrides) {
  const std::string base = baseEnvName(envId);
  if (base == "cartpole") {
    rejectUnknownKeys(overrides, {"maxSteps", "angleLimitDeg", "positionLimit"},
                      "cartpole envOverrides");
    envs::CartPoleEnv::Params p;
    if (overrides.contains("maxSteps")) p.maxSteps = overrides.at("maxSteps").get<int>();
    if (overrides.contains("angleLimitDeg"))
      p.angleLimitRad = overrides.at("angleLimitDeg").get<double>() * 3.14159265358979323846 / 180.0;
    if (overrides.contains("positionLimit")) p.positionLimit = overrides.at("positionLimit").get<double>();
    return std::make_unique<envs::CartPoleEnv>(p);
  }
  if (base == "flappy") {
    rejectUnknownKeys(overrides, {"pipeGap", "pipeSpacing", "scrollPerStep", "fallSpeedCap",
                                  "screenHeight", "birdSize"},
                      "flappy envOverrides");
    envs::FlappyEnv::Params p;
    if (overrides.contains("pipeGap")) p.pipeGap = overrides.at("pipeGap").get<double>();
    if (overrides.contains("pipeSpacing")) p.pipeSpacing = overrides.at("pipeSpacing").get<double>();
    if (overrides.contains("scrollPerStep")) p.scrollPerStep = overrides.at("scrollPerStep").get<double>();
    if (overrides.contains("fallSpeedCap")) p.fallSpeedCap = overrides.at("fallSpeedCap").get<double>();
    if (overrides.contains("screenHeight")) p.screenHeight = overrides.at("screenHeight").get<double>();
    if (overrides.contains("birdSize")) p.birdSize = overrides.at("birdSize").get<double>();
    return std::make_unique<envs::FlappyEnv>(p);
  }
  if (base == "lane") {
    rejectUnknownKeys(overrides, {"track", "trackFile", "speedKmh"}, "lane envOverrides");
    envs::TrackSpec track;
    if (overrides.contains("trackFile")) {
      track = envs::TrackSpec::fromJsonFile(overrides.at("trackFile").get<std::string>());
    } else if (overrides.contains("track")) {
      track = envs::trackByName(overrides.at("track").get<std::string>());
    } else if (envId != "lane") {
      track = envs::trackByName(envId.substr(5));  // lane-test1 etc.
    } else {
      track = envs::defaultTrainingTrack();
    }
    envs::LaneEnv::Params p;
    if (overrides.contains("speedKmh")) p.speedKmh = overrides.at("speedKmh").get<double>();
    return std::make_unique<envs::LaneEnv>(track, p);
  }
  throw ConfigError("unknown env '" + envId + "'");
}

numkit::Mlp makeQNet(const std::string& envId) {
  using numkit::Activation;
  const std::string base = baseEnvName(envId);
  if (base == "cartpole")
    return numkit::Mlp(4, {{16, Activation::Relu}, {32, Activation::Relu}, {2, Activation::Linear}});
  if (base == "flappy")
    return numkit::Mlp(5, {{64, Activation::Relu}, {64, Activation::Relu}, {2, Activation::Linear}});
  throw ConfigError("no q-network defined for env '" + envId + "'");
}

numkit::Mlp makeActor() {
  using numkit::Activation;
  return numkit::Mlp(5, {{128, Activation::Relu}, {256, Activation::Relu}, {1, Activation::Tanh}});
}

numkit::BranchNet makeCritic() {
  using numkit::Activation;
  numkit::Mlp state(5, {{128, Activation::Relu}, {256, Activation::Relu}});
  numkit::Mlp action(1, {{256, Activation::Relu}});
  numkit::Mlp joint(512, {{256, Activation::Relu}, {1, Activation::Linear}});
  return numkit::BranchNet(std::move(state), std::move(action), std::move(joint));
}

numkit::BranchNet makePredictorNet(const std::string& envId) {
  using numkit::Activation;
  const std::string base = baseEnvName(envId);
  if (base == "cartpole") {
    numkit::Mlp state(4, {{16, Activation::Relu}, {32, Activation::Relu}});
    numkit::Mlp action(2, {{32, Activation::Relu}});
    numkit::Mlp joint(64, {{32, Activation::Relu}, {2, Activation::Linear}});
    return numkit::BranchNet(std::move(state), std::move(action), std::move(joint));
  }
  if (base == "flappy") {
    numkit::Mlp state(5, {{64, Activation::Relu}, {64, Activation::Relu}});
    numkit::Mlp action(2, {{64, Activation::Relu}});
    numkit::Mlp joint(128, {{64, Activation::Relu}, {2, Activation::Linear}});
    return numkit::BranchNet(std::move(state), std::move(action), std::move(joint));
  }
  if (base == "lane") {
    numkit::Mlp state(5, {{128, Activation::Relu}, {256, Activation::Relu}});
    numkit::Mlp action(1, {{256, Activation::Relu}});
    numkit::Mlp joint(512, {{256, Activation::Relu}, {2, Activation::Linear}});
    return numkit::BranchNet(std::move(state), std::move(action), std::move(joint));
  }
  throw ConfigError("no predictor network defined for env '" + envId + "'");
}

}  // namespace sapdrl::harness
