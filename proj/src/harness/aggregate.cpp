#include "sapdrl/harness/aggregate.hpp"

#include <algorithm>
#include <cmath>

#include "sapdrl/errors.hpp"

namespace sapdrl::harness {

namespace {

nlohmann::json configSansSeed(const nlohmann::json& meta) {
  nlohmann::json j = meta;
  j.erase("seed");
  j.erase("outDir");
  j.erase("finished");
  j.erase("episodes");
  j.erase("virtualStops");
  return j;
}

// value of the last row at or before the grid step
template <typename Extract>
double resampleAt(const std::vector<StepRow>& rows, std::int64_t step, Extract extract) {
  // rows are ordered by step
  auto it = std::upper_bound(rows.begin(), rows.end(), step,
                             [](std::int64_t s, const StepRow& r) { return s < r.step; });
  if (it == rows.begin()) return extract(rows.front());
  return extract(*(it - 1));
}

}  // namespace

AggregateCurves aggregateSeeds(const std::vector<RunLogData>& logs, std::int64_t gridStep) {
  if (logs.empty()) throw ConfigError("aggregateSeeds: no runs given");
  for (const auto& log : logs)
    if (log.steps.empty()) throw ConfigError("aggregateSeeds: a run has no step rows");

  const auto reference = configSansSeed(logs.front().meta);
  for (const auto& log : logs)
    if (configSansSeed(log.meta) != reference)
      throw ConfigError("aggregateSeeds: runs have differing configs; refusing to aggregate");

  std::int64_t maxCommon = logs.front().steps.back().step;
  for (const auto& log : logs) maxCommon = std::min(maxCommon, log.steps.back().step);

  AggregateCurves out;
  for (std::int64_t s = gridStep; s <= maxCommon; s += gridStep) out.grid.push_back(s);
  if (out.grid.empty()) out.grid.push_back(maxCommon);

  const double n = static_cast<double>(logs.size());
  for (std::int64_t s : out.grid) {
    double rSum = 0.0, rSq = 0.0, vSum = 0.0, vSq = 0.0;
    for (const auto& log : logs) {
      const double r = resampleAt(log.steps, s, [](const StepRow& row) { return row.avgReward100; });
      const double v = resampleAt(log.steps, s, [](const StepRow& row) { return row.vacc; });
      rSum += r;
      rSq += r * r;
      vSum += v;
      vSq += v * v;
    }
    const double rMean = rSum / n, vMean = vSum / n;
    out.rewardMean.push_back(rMean);
    out.rewardStd.push_back(std::sqrt(std::max(0.0, rSq / n - rMean * rMean)));
    out.vaccMean.push_back(vMean);
    out.vaccStd.push_back(std::sqrt(std::max(0.0, vSq / n - vMean * vMean)));
  }
  return out;
}

}  // namespace sapdrl::harness
