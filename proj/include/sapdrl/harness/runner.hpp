#pragma once

#include <functional>
#include <optional>

#include "sapdrl/agents/replay.hpp"
#include "sapdrl/harness/config.hpp"
#include "sapdrl/sap/ap_function.hpp"

namespace sapdrl::harness {

/// Everything observable about one executed step; used by instrumentation
/// and contract tests.
struct StepTrace {
  std::int64_t t = 0;
  std::vector<double> rawState, rawNext;
  agents::ActionValue action;
  double envReward = 0.0;
  bool done = false;
  std::optional<sap::ApLabel> label;
  agents::Transition stored;  // the transition as pushed to replay
};

struct RunOptions {
  std::function<void(const StepTrace&)> observer;
  bool writeFiles = true;
};

struct RunSummary {
  std::string runId;
  std::int64_t steps = 0;
  std::int64_t episodes = 0;
  std::size_t virtualStops = 0;
};

/// One seeded training run: wires the agent, the AP machinery, and the
/// environment per the config, writes RunLog CSVs, checkpoints, and a
/// meta.json completion marker into cfg.outDir.
RunSummary runExperiment(const ExperimentConfig& cfg, const RunOptions& opts = {});

/// Independently seeded random streams of one run. Guidance, knowledge
/// routing, and evaluation draw from their own streams so enabling them
/// never perturbs the baseline trajectory.
struct RngSuite {
  numkit::Rng init, envReset, exploration, replay, guidance, knowledge;
  explicit RngSuite(std::uint64_t master)
      : init(numkit::deriveSeed(master, 0)),
        envReset(numkit::deriveSeed(master, 1)),
        exploration(numkit::deriveSeed(master, 2)),
        replay(numkit::deriveSeed(master, 3)),
        guidance(numkit::deriveSeed(master, 4)),
        knowledge(numkit::deriveSeed(master, 5)) {}
};

}  // namespace sapdrl::harness
