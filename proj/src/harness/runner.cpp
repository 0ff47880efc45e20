#include "sapdrl/harness/runner.hpp"

#include <cmath>
#include <deque>
#include <fstream>
#include <numeric>

#include "sapdrl/agents/ddpg.hpp"
#include "sapdrl/agents/ddqn.hpp"
#include "sapdrl/envs/cartpole.hpp"
#include "sapdrl/envs/flappy.hpp"
#include "sapdrl/envs/lane.hpp"
#include "sapdrl/errors.hpp"
#include "sapdrl/harness/evaluate.hpp"
#include "sapdrl/harness/run_log.hpp"
#include "sapdrl/numkit/checkpoint.hpp"
#include "sapdrl/sap/predictor.hpp"

namespace sapdrl::harness {

namespace {

using agents::ActionValue;
using sap::ApLabel;

bool isLane(const std::string& env) { return env == "lane" || env.rfind("lane-", 0) == 0; }
bool isFlappy(const std::string& env) { return env == "flappy"; }

/// The AP function used to label executed transitions, per env and mode.
/// Nullopt for guidance mode none (and for lane ap2, whose constraint
/// needs no labels).
std::optional<sap::ApFunction> makeLabelFunction(const ExperimentConfig& cfg) {
  const GuidanceMode mode = cfg.guidance;
  if (mode == GuidanceMode::None) return std::nullopt;

  if (cfg.env == "cartpole") {
    // mode can only be ap1 here
    return sap::ApFunction::type1([](std::span<const double> s, const ActionValue&,
                                     std::span<const double> ns, bool) {
      return sap::makeLabel(envs::cartpoleAp1(s, ns));
    });
  }
  if (isFlappy(cfg.env)) {
    auto ap2 = sap::ApFunction::type2([](std::span<const double> s, const ActionValue& a) {
      return sap::makeLabel(envs::flappyAp2(s, a.index));
    });
    auto ap1 = sap::ApFunction::type1(
        [](std::span<const double>, const ActionValue& a, std::span<const double> ns, bool nd) {
          return sap::makeLabel(envs::flappyAp1(a.index, ns, nd));
        });
    if (mode == GuidanceMode::Ap1) return ap1;
    if (mode == GuidanceMode::Ap2) return ap2;
    std::vector<sap::ApFunction> fns;
    fns.push_back(std::move(ap2));
    fns.push_back(std::move(ap1));
    return sap::composeAp(std::move(fns));
  }
  if (isLane(cfg.env)) {
    if (mode == GuidanceMode::Ap2) return std::nullopt;  // pure steering constraint
    return sap::ApFunction::type1([](std::span<const double> s, const ActionValue&,
                                     std::span<const double> ns, bool) {
      return sap::makeLabel(envs::laneAp1(s, ns));
    });
  }
  throw ConfigError("no AP functions for env '" + cfg.env + "'");
}

bool usesLearnedPredictor(GuidanceMode mode) {
  return mode == GuidanceMode::Ap1 || mode == GuidanceMode::Ap1Ap2;
}

/// Discrete-action AP2 guidance consults the exact type 2 function
/// through the same selection algorithm, with a perfect reliability score.
bool usesExactOracle(const ExperimentConfig& cfg) {
  return cfg.guidance == GuidanceMode::Ap2 && !isLane(cfg.env);
}

}  // namespace

RunSummary runExperiment(const ExperimentConfig& cfg, const RunOptions& opts) {
  cfg.validate();

  RngSuite rng(cfg.seed);
  auto env = makeEnv(cfg.env, cfg.envOverrides);
  const auto obsScale = env->observationScale();
  const auto space = env->actionSpace();

  // --- agent ---
  std::optional<agents::DdqnAgent> ddqn;
  std::optional<agents::DdpgAgent> ddpg;
  if (cfg.agent == "ddqn") {
    agents::DdqnConfig acfg;
    acfg.gamma = cfg.hyper.gamma;
    acfg.lr = cfg.hyper.lr;
    acfg.tau = cfg.hyper.tau;
    acfg.batchSize = cfg.hyper.batchSize;
    acfg.replayCapacity = cfg.hyper.replayCapacity;
    acfg.epsilon = {cfg.hyper.epsInit, cfg.hyper.epsFinal, cfg.guidanceCfg.observeSteps,
                    cfg.guidanceCfg.exploreSteps};
    numkit::Mlp qNet = makeQNet(cfg.env);
    qNet.initWeights(rng.init);
    ddqn.emplace(std::move(qNet), acfg);
  } else {
    agents::DdpgConfig acfg;
    acfg.gamma = cfg.hyper.gamma;
    acfg.lrActor = cfg.hyper.lrActor;
    acfg.lrCritic = cfg.hyper.lrCritic;
    acfg.tau = cfg.hyper.tau;
    acfg.batchSize = cfg.hyper.batchSize;
    acfg.replayCapacity = cfg.hyper.replayCapacity;
    acfg.actionLo = space.lo;
    acfg.actionHi = space.hi;
    acfg.exploreSteps = cfg.guidanceCfg.exploreSteps;
    acfg.ouTheta = cfg.hyper.ouTheta;
    acfg.ouSigma = cfg.hyper.ouSigma;
    acfg.rewardScale = cfg.hyper.rewardScale;
    numkit::Mlp actor = makeActor();
    actor.initWeights(rng.init);
    numkit::BranchNet critic = makeCritic();
    critic.initWeights(rng.init);
    ddpg.emplace(std::move(actor), std::move(critic), acfg);
  }

  // --- permissibility machinery ---
  const auto labelFn = makeLabelFunction(cfg);
  std::optional<sap::KnowledgeBuffer> kb;
  std::optional<sap::ApPredictor> predictor;
  std::optional<sap::ExactOracle> exactOracle;
  sap::PermissibilityOracle* oracle = nullptr;
  if (usesLearnedPredictor(cfg.guidance)) {
    kb.emplace(cfg.guidanceCfg.knowledgeCapacity);
    numkit::BranchNet net = makePredictorNet(cfg.env);
    net.initWeights(rng.init);
    predictor.emplace(std::move(net), space,
                      sap::ApPredictor::Config{cfg.guidanceCfg.lambda, cfg.hyper.predictorLr});
    oracle = &*predictor;
  } else if (usesExactOracle(cfg)) {
    exactOracle.emplace(sap::ApFunction::type2([](std::span<const double> s, const ActionValue& a) {
      return sap::makeLabel(envs::flappyAp2(s, a.index));
    }));
    oracle = &*exactOracle;
  }
  // the exact oracle judges raw features; the learned predictor scaled ones
  const bool oracleWantsRaw = usesExactOracle(cfg);

  const bool laneResample =
      isLane(cfg.env) && (cfg.guidance == GuidanceMode::Ap2 || cfg.guidance == GuidanceMode::Ap1Ap2);
  const sap::VirtualStopPolicy vstop{cfg.virtualStoppingEnabled(), -1.0};

  // --- logging ---
  std::optional<RunLogWriter> log;
  if (opts.writeFiles) log.emplace(cfg.outDir, cfg.runId());

  std::vector<double> rawState = env->reset(rng.envReset);
  std::vector<double> scaledState = envs::scaleObservation(rawState, obsScale);

  std::int64_t episode = 1;
  std::int64_t episodeLen = 0;
  double episodeReturn = 0.0;
  std::deque<double> trailingReturns;  // last 100 completed episode returns
  std::size_t virtualStops = 0;
  double prevTrackAbs = 0.0;
  bool havePrevAction = false;
  double prevAction = 0.0;

  for (std::int64_t t = 1; t <= cfg.totalSteps; ++t) {
    const double actedFromTrackAbs = std::abs(rawState[1]);

    // 1. base action from the agent's own policy + exploration
    ActionValue action = ddqn ? ActionValue::discrete(ddqn->act(scaledState, t - 1, rng.exploration))
                              : ActionValue::continuous(
                                    ddpg->act(scaledState, t, true, rng.exploration));

    // 2. permissibility-guided substitution
    double alphaInEffect = 0.0;
    std::optional<double> vaccForGate;
    if (oracle) {
      vaccForGate = predictor ? predictor->lastVacc() : std::optional<double>(1.0);
      if (t > cfg.guidanceCfg.observeSteps) {
        alphaInEffect = sap::guidanceAlpha(
            t, cfg.guidanceCfg.observeSteps, cfg.guidanceCfg.exploreSteps, vaccForGate,
            cfg.guidanceCfg.accThreshold, cfg.guidanceCfg.alphaExplore,
            cfg.guidanceCfg.alphaTrained);
        action = sap::guidedSelect(oracleWantsRaw ? rawState : scaledState, action, *oracle,
                                   cfg.guidanceCfg, space, t, vaccForGate, rng.guidance);
      }
    }

    // 3. steering constraint (lane AP2)
    if (laneResample && havePrevAction) {
      const double delta = std::abs(rawState[1]) - prevTrackAbs;
      action = sap::ap2ResampleLane(rawState[1], action.value, prevAction, delta, rng.guidance);
    }

    // 4. execute
    const auto sr = env->step(action);
    const std::vector<double> scaledNext = envs::scaleObservation(sr.state, obsScale);

    // 5. label the executed action
    std::optional<ApLabel> label;
    if (labelFn) label = labelFn->label(rawState, action, sr.state, sr.done);

    // 6. knowledge buffer feeds the predictor
    if (kb && label) kb->insert({scaledState, action, *label}, rng.knowledge);

    // 7. store, with the virtual-stopping transform
    agents::Transition tr{scaledState, action, sr.reward, scaledNext, sr.done, false};
    if (label) tr = sap::virtualStop(std::move(tr), *label, vstop);
    if (tr.virtualDone) ++virtualStops;

    if (ddqn)
      ddqn->observe(tr);
    else
      ddpg->observe(tr);

    episodeReturn += sr.reward;
    episodeLen += 1;

    // 8. log
    if (log) {
      StepRow row;
      row.step = t;
      row.episode = episode;
      row.reward = sr.reward;
      row.avgReward100 =
          trailingReturns.empty()
              ? 0.0
              : std::accumulate(trailingReturns.begin(), trailingReturns.end(), 0.0) /
                    static_cast<double>(trailingReturns.size());
      row.epsOrNoise = ddqn ? ddqn->config().epsilon.at(t - 1)
                            : (t <= cfg.guidanceCfg.exploreSteps ? 1.0 : 0.0);
      row.alpha = alphaInEffect;
      row.vacc = predictor ? predictor->lastVacc().value_or(0.0) : (exactOracle ? 1.0 : 0.0);
      row.kbPos = kb ? kb->trainCount(ApLabel::Permissible) : 0;
      row.kbNeg = kb ? kb->trainCount(ApLabel::NonPermissible) : 0;
      row.virtualStops = virtualStops;
      log->writeStep(row);
    }

    if (opts.observer) {
      StepTrace trace;
      trace.t = t;
      trace.rawState = rawState;
      trace.rawNext = sr.state;
      trace.action = action;
      trace.envReward = sr.reward;
      trace.done = sr.done;
      trace.label = label;
      trace.stored = tr;
      opts.observer(trace);
    }

    // 9. learn
    if (ddqn)
      ddqn->trainStep(rng.replay);
    else
      ddpg->trainStep(rng.replay);

    // 10. predictor training and validation
    if (predictor && kb) {
      if (sap::shouldTrainPredictor(predictor->vaccHistory(), cfg.guidanceCfg.accThreshold, t,
                                    cfg.guidanceCfg.exploreSteps)) {
        if (auto dataset = kb->sampleBalanced(cfg.guidanceCfg.datasetSize, rng.knowledge))
          predictor->train(*dataset);
      }
      predictor->validate(*kb, t);
    }

    // 11. episode bookkeeping; virtual stops never reset the live episode
    if (sr.done) {
      if (log) log->writeEpisode({episode, episodeLen, episodeReturn});
      trailingReturns.push_back(episodeReturn);
      if (trailingReturns.size() > 100) trailingReturns.pop_front();
      episode += 1;
      episodeLen = 0;
      episodeReturn = 0.0;
      rawState = env->reset(rng.envReset);
      if (ddpg) ddpg->resetNoise();
      havePrevAction = false;
    } else {
      rawState = sr.state;
      havePrevAction = true;
      prevAction = action.scalar();
      prevTrackAbs = actedFromTrackAbs;
    }
    scaledState = envs::scaleObservation(rawState, obsScale);

    // 12. periodic greedy evaluation on a detached environment
    if (log && cfg.evalEvery > 0 && t % cfg.evalEvery == 0) {
      PolicyFn policy;
      if (ddqn) {
        policy = [&](std::span<const double> s) {
          return ActionValue::discrete(ddqn->greedyAction(s));
        };
      } else {
        policy = [&](std::span<const double> s) {
          return ActionValue::continuous(ddpg->policyAction(s));
        };
      }
      auto evalEnv = makeEnv(cfg.env, cfg.envOverrides);
      const auto res = evaluatePolicy(*evalEnv, policy, cfg.evalEpisodes,
                                      numkit::deriveSeed(cfg.seed, 6) ^ static_cast<std::uint64_t>(t),
                                      defaultEvalStepCap(cfg.env, *evalEnv));
      log->writeEval({t, res.mean});
    }
  }

  // --- checkpoints, knowledge dump, completion marker ---
  if (opts.writeFiles) {
    const std::string id = cfg.runId();
    std::filesystem::create_directories(cfg.outDir);
    if (ddqn) {
      numkit::saveMlp(ddqn->qNet(), cfg.outDir / (id + ".q.sapn"));
    } else {
      numkit::saveMlp(ddpg->actor(), cfg.outDir / (id + ".actor.sapn"));
      numkit::saveBranchNet(ddpg->critic(), cfg.outDir / (id + ".critic.sapn"));
    }
    if (predictor) numkit::saveBranchNet(predictor->net(), cfg.outDir / (id + ".pred.sapn"));
    if (kb) {
      std::ofstream kbcsv(cfg.outDir / (id + ".kb.csv"));
      kb->dumpCsv(kbcsv);
    }
    log->close();
    nlohmann::json meta = cfg.toJson();
    meta["finished"] = true;
    meta["episodes"] = episode - 1;
    meta["virtualStops"] = virtualStops;
    std::ofstream metaFile(cfg.outDir / (id + ".meta.json"));
    metaFile << meta.dump(2) << '\n';
  }

  return {cfg.runId(), cfg.totalSteps, episode - 1, virtualStops};
}

}  // namespace sapdrl::harness
