#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace sapdrl::numkit {

/// Adam optimizer state for one flat parameter vector. Moment defaults are
/// the standard beta1=0.9, beta2=0.999, eps=1e-8.
struct AdamState {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  std::int64_t step = 0;
  std::vector<double> m, v;

  AdamState() = default;
  explicit AdamState(std::size_t paramCount) : m(paramCount, 0.0), v(paramCount, 0.0) {}
};

/// One bias-corrected Adam update, in place. Throws NumericsError on
/// non-finite gradients.
void adamStep(AdamState& state, std::span<double> params, std::span<const double> grads, double lr);

}  // namespace sapdrl::numkit
