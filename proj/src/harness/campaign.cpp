#include "sapdrl/harness/campaign.hpp"

#include <fstream>
#include <future>
#include <set>

#include "sapdrl/errors.hpp"
#include "sapdrl/harness/aggregate.hpp"
#include "sapdrl/harness/svg_plot.hpp"

namespace sapdrl::harness {

CampaignConfig CampaignConfig::fromJsonFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read campaign config " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("campaign config parse error: " + std::string(e.what()));
  }
  for (const auto& [key, value] : j.items()) {
    (void)value;
    static const std::set<std::string> known{"env",       "variants",  "vstop", "seeds",
                                             "totalSteps", "evalEvery", "evalEpisodes",
                                             "outDir",    "jobs",      "overrides"};
    if (!known.count(key)) throw ConfigError("unknown key '" + key + "' in campaign config");
  }
  CampaignConfig cfg;
  cfg.env = j.at("env").get<std::string>();
  for (const auto& v : j.at("variants"))
    cfg.variants.push_back(guidanceModeFromName(v.get<std::string>()));
  if (j.contains("vstop")) cfg.vstop = vstopModeFromName(j.at("vstop").get<std::string>());
  for (const auto& s : j.at("seeds")) cfg.seeds.push_back(s.get<std::uint64_t>());
  if (j.contains("totalSteps")) cfg.totalSteps = j.at("totalSteps").get<std::int64_t>();
  if (j.contains("evalEvery")) cfg.evalEvery = j.at("evalEvery").get<std::int64_t>();
  if (j.contains("evalEpisodes")) cfg.evalEpisodes = j.at("evalEpisodes").get<int>();
  if (j.contains("outDir")) cfg.outDir = j.at("outDir").get<std::string>();
  if (j.contains("jobs")) cfg.jobs = j.at("jobs").get<int>();
  if (j.contains("overrides")) cfg.overrides = j.at("overrides");
  return cfg;
}

std::vector<ExperimentConfig> CampaignConfig::expand() const {
  if (variants.empty() || seeds.empty())
    throw ConfigError("campaign needs at least one variant and one seed");
  std::vector<ExperimentConfig> runs;
  for (const GuidanceMode mode : variants) {
    for (const std::uint64_t seed : seeds) {
      ExperimentConfig cfg = ExperimentConfig::defaults(env);
      if (!overrides.empty()) cfg.applyJson(overrides);
      cfg.guidance = mode;
      cfg.vstop = vstop;
      cfg.seed = seed;
      if (totalSteps > 0) cfg.totalSteps = totalSteps;
      cfg.evalEvery = evalEvery;
      cfg.evalEpisodes = evalEpisodes;
      cfg.outDir = outDir;
      cfg.validate();
      runs.push_back(std::move(cfg));
    }
  }
  return runs;
}

CampaignResult runCampaign(const CampaignConfig& campaign) {
  CampaignResult result;
  result.runs = campaign.expand();

  std::vector<const ExperimentConfig*> pending;
  for (const auto& cfg : result.runs) {
    if (RunLogData::exists(cfg.outDir, cfg.runId())) {
      ++result.skipped;
    } else {
      pending.push_back(&cfg);
    }
  }

  const int jobs = std::max(1, campaign.jobs);
  std::size_t next = 0;
  std::vector<std::future<void>> inFlight;
  while (next < pending.size() || !inFlight.empty()) {
    while (static_cast<int>(inFlight.size()) < jobs && next < pending.size()) {
      const ExperimentConfig* cfg = pending[next++];
      inFlight.push_back(std::async(std::launch::async, [cfg] { runExperiment(*cfg); }));
    }
    inFlight.front().get();
    inFlight.erase(inFlight.begin());
  }
  result.executed = static_cast<int>(pending.size());

  // aggregate each variant across seeds and plot
  std::vector<Curve> rewardCurves, vaccCurves;
  for (const GuidanceMode mode : campaign.variants) {
    std::vector<RunLogData> logs;
    for (const auto& cfg : result.runs)
      if (cfg.guidance == mode) logs.push_back(RunLogData::load(cfg.outDir, cfg.runId()));
    const auto agg = aggregateSeeds(logs);
    Curve reward, vacc;
    reward.label = guidanceModeName(mode);
    vacc.label = guidanceModeName(mode);
    for (std::size_t i = 0; i < agg.grid.size(); ++i) {
      reward.x.push_back(static_cast<double>(agg.grid[i]));
      reward.y.push_back(agg.rewardMean[i]);
      reward.band.push_back(agg.rewardStd[i]);
      vacc.x.push_back(static_cast<double>(agg.grid[i]));
      vacc.y.push_back(agg.vaccMean[i]);
      vacc.band.push_back(agg.vaccStd[i]);
    }
    rewardCurves.push_back(std::move(reward));
    vaccCurves.push_back(std::move(vacc));
  }
  emitPlot(rewardCurves, campaign.env + ": avg reward over past 100 episodes", "step",
           "avgReward100", campaign.outDir / "aggregate.avgReward100.svg");
  emitPlot(vaccCurves, campaign.env + ": predictor validation accuracy", "step", "vacc",
           campaign.outDir / "aggregate.vacc.svg");
  return result;
}

}  // namespace sapdrl::harness
