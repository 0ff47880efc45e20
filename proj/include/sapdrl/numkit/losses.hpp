#pragma once

#include <array>
#include <span>
#include <vector>

namespace sapdrl::numkit {

struct ScalarLoss {
  double loss;
  std::vector<double> grad;  // with respect to the predictions / logits
};

/// Two-class cross entropy on raw logits with an L2 penalty
/// (lambda/2)*sum(theta^2) added to the loss. The returned gradient is with
/// respect to the logits only; the L2 term's parameter gradient (lambda *
/// theta) is the caller's responsibility. Probabilities are clamped to
/// [1e-12, 1-1e-12], so the loss is always finite.
ScalarLoss crossEntropyWithL2(std::span<const double> logits, int label,
                              std::span<const double> params, double lambda);

/// Softmax over two logits; returns {p(class 0), p(class 1)}.
std::array<double, 2> softmax2(std::span<const double> logits);

/// Mean squared error; gradient is 2*(pred-target)/N.
ScalarLoss meanSquaredError(std::span<const double> pred, std::span<const double> target);

}  // namespace sapdrl::numkit
