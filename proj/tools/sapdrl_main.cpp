// Command line front end: train single runs, evaluate checkpoints, audit
// predictors against brute-force ground truth, plot run logs, and drive
// multi-seed campaigns.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <map>

#include "sapdrl/envs/cartpole.hpp"
#include "sapdrl/envs/flappy.hpp"
#include "sapdrl/envs/lane.hpp"
#include "sapdrl/errors.hpp"
#include "sapdrl/harness/aggregate.hpp"
#include "sapdrl/harness/campaign.hpp"
#include "sapdrl/harness/evaluate.hpp"
#include "sapdrl/harness/svg_plot.hpp"
#include "sapdrl/numkit/checkpoint.hpp"
#include "sapdrl/oracle/audit.hpp"
#include "sapdrl/sap/predictor.hpp"

namespace {

using namespace sapdrl;

int cmdTrain(const std::string& env, const std::string& agent, const std::string& guidance,
             const std::string& vstop, std::uint64_t seed, std::int64_t steps,
             const std::string& configPath, const std::string& outDir, std::int64_t evalEvery,
             int evalEpisodes) {
  harness::ExperimentConfig cfg = configPath.empty()
                                      ? harness::ExperimentConfig::defaults(env)
                                      : harness::ExperimentConfig::fromJsonFile(configPath);
  if (configPath.empty() || !env.empty()) cfg.env = env;
  if (!agent.empty()) cfg.agent = agent;
  cfg.guidance = harness::guidanceModeFromName(guidance);
  cfg.vstop = harness::vstopModeFromName(vstop);
  cfg.seed = seed;
  if (steps > 0) cfg.totalSteps = steps;
  cfg.outDir = outDir;
  if (evalEvery > 0) cfg.evalEvery = evalEvery;
  cfg.evalEpisodes = evalEpisodes;

  const auto summary = harness::runExperiment(cfg);
  std::cout << "run " << summary.runId << ": " << summary.steps << " steps, "
            << summary.episodes << " episodes, " << summary.virtualStops
            << " virtual stops -> " << cfg.outDir.string() << "\n";
  return 0;
}

int cmdEval(const std::string& checkpoint, const std::string& env, int episodes,
            std::uint64_t seed) {
  const auto res = harness::evaluateCheckpoint(checkpoint, env, nlohmann::json::object(),
                                               episodes, seed);
  std::cout << "mean score over " << episodes << " episodes: " << res.mean << "\n";
  for (std::size_t i = 0; i < res.scores.size(); ++i)
    std::cout << "episode " << i + 1 << "," << res.scores[i] << "\n";
  return 0;
}

int cmdAudit(const std::string& env, const std::string& checkpoint, std::size_t states,
             const std::string& outDir, std::uint64_t seed) {
  auto prototype = harness::makeEnv(env, nlohmann::json::object());
  numkit::Rng rng(seed);
  const auto snapshots = oracle::sampleStates(*prototype, states, rng);

  sap::ApFunction apFn = [&]() -> sap::ApFunction {
    if (env == "cartpole")
      return sap::ApFunction::type1([](std::span<const double> s, const agents::ActionValue&,
                                       std::span<const double> ns, bool) {
        return sap::makeLabel(envs::cartpoleAp1(s, ns));
      });
    if (env == "flappy") {
      auto ap2 = sap::ApFunction::type2([](std::span<const double> s, const agents::ActionValue& a) {
        return sap::makeLabel(envs::flappyAp2(s, a.index));
      });
      auto ap1 = sap::ApFunction::type1([](std::span<const double>, const agents::ActionValue& a,
                                           std::span<const double> ns, bool nd) {
        return sap::makeLabel(envs::flappyAp1(a.index, ns, nd));
      });
      std::vector<sap::ApFunction> fns;
      fns.push_back(std::move(ap2));
      fns.push_back(std::move(ap1));
      return sap::composeAp(std::move(fns));
    }
    return sap::ApFunction::type1([](std::span<const double> s, const agents::ActionValue&,
                                     std::span<const double> ns, bool) {
      return sap::makeLabel(envs::laneAp1(s, ns));
    });
  }();

  numkit::BranchNet net = harness::makePredictorNet(env);
  numkit::loadBranchNet(net, checkpoint);
  sap::ApPredictor predictor(std::move(net), prototype->actionSpace(), {});

  const auto scale = prototype->observationScale();
  auto predict = [&](const envs::Env&, std::span<const double> raw, const agents::ActionValue& a) {
    return predictor.predict(envs::scaleObservation(raw, scale), a);
  };
  const auto result = oracle::permissibilityAudit(snapshots, apFn, predict);

  std::filesystem::create_directories(outDir);
  oracle::writeAuditReport(result, std::filesystem::path(outDir) / "audit.csv",
                           std::filesystem::path(outDir) / "audit.json");
  std::cout << "audited " << snapshots.size() << " states: accuracy " << result.stats.accuracy()
            << ", false negative rate " << result.stats.falseNegativeRate() << "\n";
  return 0;
}

int cmdPlot(const std::string& runsDir, const std::string& metric, const std::string& outFile) {
  namespace fs = std::filesystem;
  // group runs by config (modulo seed) using their meta files
  std::map<std::string, std::vector<harness::RunLogData>> groups;
  std::map<std::string, std::string> labels;
  for (const auto& entry : fs::directory_iterator(runsDir)) {
    const std::string name = entry.path().filename().string();
    const std::string suffix = ".meta.json";
    if (name.size() <= suffix.size() || name.substr(name.size() - suffix.size()) != suffix)
      continue;
    const std::string runId = name.substr(0, name.size() - suffix.size());
    auto data = harness::RunLogData::load(runsDir, runId);
    nlohmann::json key = data.meta;
    key.erase("seed");
    key.erase("outDir");
    key.erase("finished");
    key.erase("episodes");
    key.erase("virtualStops");
    const std::string keyStr = key.dump();
    if (!labels.count(keyStr))
      labels[keyStr] = data.meta.value("guidance", "?") + " (" +
                       data.meta.value("env", "?") + ")";
    groups[keyStr].push_back(std::move(data));
  }
  if (groups.empty()) throw ConfigError("no completed runs under " + runsDir);

  std::vector<harness::Curve> curves;
  for (auto& [key, logs] : groups) {
    const auto agg = harness::aggregateSeeds(logs);
    harness::Curve c;
    c.label = labels[key];
    for (std::size_t i = 0; i < agg.grid.size(); ++i) {
      c.x.push_back(static_cast<double>(agg.grid[i]));
      c.y.push_back(metric == "vacc" ? agg.vaccMean[i] : agg.rewardMean[i]);
      c.band.push_back(metric == "vacc" ? agg.vaccStd[i] : agg.rewardStd[i]);
    }
    curves.push_back(std::move(c));
  }
  harness::emitPlot(curves, metric, "step", metric, outFile);
  std::cout << "wrote " << outFile << "\n";
  return 0;
}

int cmdCampaign(const std::string& configPath) {
  const auto cfg = harness::CampaignConfig::fromJsonFile(configPath);
  const auto result = harness::runCampaign(cfg);
  std::cout << "campaign: " << result.executed << " runs executed, " << result.skipped
            << " already complete -> " << cfg.outDir.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"State-action permissibility guided deep RL toolkit"};
  app.require_subcommand(1);

  // train
  auto* train = app.add_subcommand("train", "train one seeded run");
  std::string env, agent, guidance = "none", vstop = "auto", config, out = "runs";
  std::uint64_t seed = 0;
  std::int64_t steps = 0, evalEvery = 0;
  int evalEpisodes = 100;
  train->add_option("--env", env, "cartpole | flappy | lane")->required();
  train->add_option("--agent", agent, "ddqn | ddpg (defaults to the env's natural agent)");
  train->add_option("--guidance", guidance, "none | ap1 | ap2 | ap1+ap2");
  train->add_option("--vstop", vstop, "on | off | auto");
  train->add_option("--seed", seed)->required();
  train->add_option("--steps", steps, "total training steps");
  train->add_option("--config", config, "JSON config file");
  train->add_option("--out", out, "output directory")->required();
  train->add_option("--eval-every", evalEvery, "periodic greedy evaluation interval");
  train->add_option("--eval-episodes", evalEpisodes, "episodes per periodic evaluation");

  // eval
  auto* eval = app.add_subcommand("eval", "evaluate a checkpoint greedily");
  std::string evalCheckpoint, evalEnv;
  int evalEpCount = 100;
  std::uint64_t evalSeed = 0;
  eval->add_option("--checkpoint", evalCheckpoint)->required();
  eval->add_option("--env", evalEnv)->required();
  eval->add_option("--episodes", evalEpCount)->required();
  eval->add_option("--seed", evalSeed)->required();

  // audit
  auto* audit = app.add_subcommand("audit", "audit a predictor checkpoint against ground truth");
  std::string auditEnv, auditCheckpoint, auditOut = "audit";
  std::size_t auditStates = 1000;
  std::uint64_t auditSeed = 0;
  audit->add_option("--env", auditEnv)->required();
  audit->add_option("--checkpoint", auditCheckpoint, "predictor .sapn file")->required();
  audit->add_option("--states", auditStates)->required();
  audit->add_option("--out", auditOut)->required();
  audit->add_option("--seed", auditSeed);

  // plot
  auto* plot = app.add_subcommand("plot", "aggregate runs and render an SVG");
  std::string plotRuns, plotMetric = "avgReward100", plotOut;
  plot->add_option("--runs", plotRuns)->required();
  plot->add_option("--metric", plotMetric, "avgReward100 | vacc");
  plot->add_option("--out", plotOut)->required();

  // campaign
  auto* campaign = app.add_subcommand("campaign", "multi-seed multi-variant sweep");
  std::string campaignConfig;
  campaign->add_option("--config", campaignConfig)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (train->parsed())
      return cmdTrain(env, agent, guidance, vstop, seed, steps, config, out, evalEvery,
                      evalEpisodes);
    if (eval->parsed()) return cmdEval(evalCheckpoint, evalEnv, evalEpCount, evalSeed);
    if (audit->parsed()) return cmdAudit(auditEnv, auditCheckpoint, auditStates, auditOut, auditSeed);
    if (plot->parsed()) return cmdPlot(plotRuns, plotMetric, plotOut);
    if (campaign->parsed()) return cmdCampaign(campaignConfig);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const NumericsError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const CheckpointError& e) {
    std::cerr << "checkpoint error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
