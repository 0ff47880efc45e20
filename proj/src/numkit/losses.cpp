#include "sapdrl/numkit/losses.hpp"

#include <algorithm>
#include <cmath>

#include "sapdrl/errors.hpp"

namespace sapdrl::numkit {

std::array<double, 2> softmax2(std::span<const double> logits) {
  if (logits.size() != 2) throw ContractError("softmax2: expected two logits");
  const double mx = std::max(logits[0], logits[1]);
  const double e0 = std::exp(logits[0] - mx);
  const double e1 = std::exp(logits[1] - mx);
  const double sum = e0 + e1;
  return {e0 / sum, e1 / sum};
}

ScalarLoss crossEntropyWithL2(std::span<const double> logits, int label,
                              std::span<const double> params, double lambda) {
  if (label != 0 && label != 1) throw ContractError("crossEntropyWithL2: label must be 0 or 1");
  const auto p = softmax2(logits);
  const double clamped = std::clamp(p[label], 1e-12, 1.0 - 1e-12);
  double loss = -std::log(clamped);
  if (lambda != 0.0) {
    double sq = 0.0;
    for (double t : params) sq += t * t;
    loss += 0.5 * lambda * sq;
  }
  // d loss / d logits = softmax - onehot(label)
  std::vector<double> grad{p[0], p[1]};
  grad[static_cast<std::size_t>(label)] -= 1.0;
  return {loss, std::move(grad)};
}

ScalarLoss meanSquaredError(std::span<const double> pred, std::span<const double> target) {
  if (pred.size() != target.size() || pred.empty())
    throw ContractError("meanSquaredError: length mismatch or empty input");
  const double n = static_cast<double>(pred.size());
  double loss = 0.0;
  std::vector<double> grad(pred.size());
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double d = pred[i] - target[i];
    loss += d * d;
    grad[i] = 2.0 * d / n;
  }
  return {loss / n, std::move(grad)};
}

}  // namespace sapdrl::numkit
