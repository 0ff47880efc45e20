#include "sapdrl/numkit/adam.hpp"

#include <cmath>

#include "sapdrl/errors.hpp"
#include "sapdrl/numkit/matrix.hpp"

namespace sapdrl::numkit {

void adamStep(AdamState& state, std::span<double> params, std::span<const double> grads, double lr) {
  if (params.size() != grads.size() || params.size() != state.m.size())
    throw ContractError("adamStep: parameter/gradient/state sizes disagree");
  if (!allFinite(grads)) throw NumericsError("adamStep: non-finite gradient");

  state.step += 1;
  const double b1 = state.beta1, b2 = state.beta2;
  const double corr1 = 1.0 - std::pow(b1, static_cast<double>(state.step));
  const double corr2 = 1.0 - std::pow(b2, static_cast<double>(state.step));
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double g = grads[i];
    state.m[i] = b1 * state.m[i] + (1.0 - b1) * g;
    state.v[i] = b2 * state.v[i] + (1.0 - b2) * g * g;
    const double mHat = state.m[i] / corr1;
    const double vHat = state.v[i] / corr2;
    params[i] -= lr * mHat / (std::sqrt(vHat) + state.eps);
  }
}

}  // namespace sapdrl::numkit
