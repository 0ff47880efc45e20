#pragma once

#include <span>

#include <cstddef>
#include <filesystem>
#include <functional>
#include <memory>
#include <vector>

#include "sapdrl/envs/env.hpp"
#include "sapdrl/sap/ap_function.hpp"

namespace sapdrl::oracle {

/// Confusion counts with permissible as the positive class. False
/// negatives are the dangerous direction: a permissible action mistaken
/// for non-permissible can hide the only way forward.
struct ConfusionStats {
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
  std::size_t total() const { return tp + fp + tn + fn; }
  double accuracy() const {
    return total() == 0 ? 0.0 : static_cast<double>(tp + tn) / static_cast<double>(total());
  }
  double falseNegativeRate() const {
    const std::size_t pos = tp + fn;
    return pos == 0 ? 0.0 : static_cast<double>(fn) / static_cast<double>(pos);
  }
};

/// A predictor under audit: judges (state, action) at a live environment
/// snapshot without stepping it.
using PredictFn = std::function<sap::ApLabel(const envs::Env& atState,
                                             std::span<const double> rawState,
                                             const agents::ActionValue& action)>;

/// Environment snapshots along uniformly random rollouts; every stored
/// snapshot is a live state.
std::vector<std::unique_ptr<envs::Env>> sampleStates(const envs::Env& prototype,
                                                     std::size_t count, numkit::Rng& rng);

struct AuditRow {
  std::size_t stateId;
  agents::ActionValue action;
  sap::ApLabel truth;
  sap::ApLabel predicted;
};

struct AuditResult {
  ConfusionStats stats;
  std::vector<AuditRow> rows;
};

/// Ground-truth sweep: for every snapshot and every action (all of them
/// for discrete spaces, a uniform grid for continuous ones) the action is
/// executed on a copy, labeled by the AP function, and compared with the
/// prediction. Snapshots themselves are never mutated.
AuditResult permissibilityAudit(const std::vector<std::unique_ptr<envs::Env>>& states,
                                const sap::ApFunction& apFn, const PredictFn& predict,
                                std::size_t continuousGrid = 101);

struct ExistenceScan {
  double fraction = 0.0;                 // states with at least one permissible action
  std::vector<std::size_t> deadStates;   // indices with none
};

/// Brute-force check that permissibility rarely empties the action set.
ExistenceScan permissibleExistenceScan(const std::vector<std::unique_ptr<envs::Env>>& states,
                                       const sap::ApFunction& apFn,
                                       std::size_t continuousGrid = 101);

/// Audit report files: rows as CSV, confusion summary as JSON.
void writeAuditReport(const AuditResult& result, const std::filesystem::path& csvPath,
                      const std::filesystem::path& jsonPath);

}  // namespace sapdrl::oracle
