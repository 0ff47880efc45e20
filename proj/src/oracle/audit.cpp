#include "sapdrl/oracle/audit.hpp"

#include <fstream>

#include <json.hpp>

#include "sapdrl/errors.hpp"

namespace sapdrl::oracle {

std::vector<std::unique_ptr<envs::Env>> sampleStates(const envs::Env& prototype,
                                                     std::size_t count, numkit::Rng& rng) {
  std::vector<std::unique_ptr<envs::Env>> out;
  out.reserve(count);
  auto env = prototype.clone();
  env->reset(rng);
  const auto space = env->actionSpace();
  while (out.size() < count) {
    out.push_back(env->clone());
    const agents::ActionValue a =
        space.isDiscrete()
            ? agents::ActionValue::discrete(static_cast<int>(
                  rng.uniformInt(static_cast<std::uint64_t>(space.count))))
            : agents::ActionValue::continuous(rng.uniformIn(space.lo, space.hi));
    const auto sr = env->step(a);
    if (sr.done) env->reset(rng);
  }
  return out;
}

namespace {

std::vector<agents::ActionValue> auditActions(const agents::ActionSpace& space,
                                              std::size_t continuousGrid) {
  std::vector<agents::ActionValue> actions;
  if (space.isDiscrete()) {
    for (int a = 0; a < space.count; ++a) actions.push_back(agents::ActionValue::discrete(a));
  } else {
    if (continuousGrid < 2) throw ContractError("audit: continuous grid needs >= 2 points");
    for (std::size_t i = 0; i < continuousGrid; ++i) {
      const double frac = static_cast<double>(i) / static_cast<double>(continuousGrid - 1);
      actions.push_back(agents::ActionValue::continuous(space.lo + frac * (space.hi - space.lo)));
    }
  }
  return actions;
}

sap::ApLabel groundTruth(const envs::Env& snapshot, const agents::ActionValue& action,
                         const sap::ApFunction& apFn) {
  const auto state = snapshot.observation();
  if (apFn.kind() == sap::ApFunction::Kind::Type2) return apFn.label(state, action);
  auto copy = snapshot.clone();
  const auto sr = copy->step(action);
  return apFn.label(state, action, sr.state, sr.done);
}

}  // namespace

AuditResult permissibilityAudit(const std::vector<std::unique_ptr<envs::Env>>& states,
                                const sap::ApFunction& apFn, const PredictFn& predict,
                                std::size_t continuousGrid) {
  AuditResult result;
  for (std::size_t si = 0; si < states.size(); ++si) {
    const envs::Env& snapshot = *states[si];
    const auto raw = snapshot.observation();
    for (const auto& a : auditActions(snapshot.actionSpace(), continuousGrid)) {
      const sap::ApLabel truth = groundTruth(snapshot, a, apFn);
      const sap::ApLabel pred = predict(snapshot, raw, a);
      if (truth == sap::ApLabel::Permissible) {
        pred == sap::ApLabel::Permissible ? ++result.stats.tp : ++result.stats.fn;
      } else {
        pred == sap::ApLabel::NonPermissible ? ++result.stats.tn : ++result.stats.fp;
      }
      result.rows.push_back({si, a, truth, pred});
    }
  }
  return result;
}

ExistenceScan permissibleExistenceScan(const std::vector<std::unique_ptr<envs::Env>>& states,
                                       const sap::ApFunction& apFn, std::size_t continuousGrid) {
  ExistenceScan scan;
  std::size_t alive = 0;
  for (std::size_t si = 0; si < states.size(); ++si) {
    bool any = false;
    for (const auto& a : auditActions(states[si]->actionSpace(), continuousGrid)) {
      if (groundTruth(*states[si], a, apFn) == sap::ApLabel::Permissible) {
        any = true;
        break;
      }
    }
    if (any)
      ++alive;
    else
      scan.deadStates.push_back(si);
  }
  scan.fraction = states.empty() ? 0.0 : static_cast<double>(alive) / static_cast<double>(states.size());
  return scan;
}

void writeAuditReport(const AuditResult& result, const std::filesystem::path& csvPath,
                      const std::filesystem::path& jsonPath) {
  {
    std::ofstream csv(csvPath);
    csv << "state_id,action,truth,pred\n";
    for (const auto& row : result.rows)
      csv << row.stateId << ',' << row.action.scalar() << ',' << labelValue(row.truth) << ','
          << labelValue(row.predicted) << '\n';
  }
  nlohmann::json j;
  j["tp"] = result.stats.tp;
  j["fp"] = result.stats.fp;
  j["tn"] = result.stats.tn;
  j["fn"] = result.stats.fn;
  j["total"] = result.stats.total();
  j["accuracy"] = result.stats.accuracy();
  j["false_negative_rate"] = result.stats.falseNegativeRate();
  std::ofstream js(jsonPath);
  js << j.dump(2) << '\n';
}

}  // namespace sapdrl::oracle
