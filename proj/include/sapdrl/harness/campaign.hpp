#pragma once

#include "sapdrl/harness/config.hpp"
#include "sapdrl/harness/runner.hpp"

namespace sapdrl::harness {

/// A multi-seed, multi-variant sweep over one environment. Completed runs
/// (their meta.json exists) are skipped, so re-running a finished campaign
/// is a no-op.
struct CampaignConfig {
  std::string env;
  std::vector<GuidanceMode> variants;
  VStopMode vstop = VStopMode::Auto;
  std::vector<std::uint64_t> seeds;
  std::int64_t totalSteps = 0;  // 0 = env default
  std::int64_t evalEvery = 0;
  int evalEpisodes = 100;
  std::filesystem::path outDir = "runs";
  int jobs = 1;
  nlohmann::json overrides = nlohmann::json::object();  // applied to every run config

  static CampaignConfig fromJsonFile(const std::filesystem::path& path);
  std::vector<ExperimentConfig> expand() const;
};

struct CampaignResult {
  std::vector<ExperimentConfig> runs;
  int executed = 0;
  int skipped = 0;
};

/// Runs the sweep (seeds in parallel up to cfg.jobs), then aggregates each
/// variant across seeds and writes aggregate SVG plots into outDir.
CampaignResult runCampaign(const CampaignConfig& cfg);

}  // namespace sapdrl::harness
