#pragma once

#include <vector>

#include "sapdrl/harness/run_log.hpp"

namespace sapdrl::harness {

/// Per-gridpoint mean and population standard deviation of avgReward100
/// and vacc across seeds, resampled onto a common step grid (every
/// gridStep steps up to the shortest run).
struct AggregateCurves {
  std::vector<std::int64_t> grid;
  std::vector<double> rewardMean, rewardStd;
  std::vector<double> vaccMean, vaccStd;
};

/// Inputs must be runs of the same config modulo seed; anything else is an
/// aggregation error.
AggregateCurves aggregateSeeds(const std::vector<RunLogData>& logs, std::int64_t gridStep = 100);

}  // namespace sapdrl::harness
