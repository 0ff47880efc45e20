#pragma once

#include <functional>
#include <span>
#include <vector>

namespace sapdrl::oracle {

/// Central-difference gradient of a scalar function of a flat parameter
/// vector: (f(p+h) - f(p-h)) / 2h per coordinate. Brute force on purpose;
/// this is the independent check the analytic gradients are held against.
inline std::vector<double> finiteDiffGrad(
    const std::function<double(std::span<const double>)>& f, std::span<const double> params,
    double h = 1e-5) {
  std::vector<double> p(params.begin(), params.end());
  std::vector<double> grad(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double orig = p[i];
    p[i] = orig + h;
    const double fp = f(p);
    p[i] = orig - h;
    const double fm = f(p);
    p[i] = orig;
    grad[i] = (fp - fm) / (2.0 * h);
  }
  return grad;
}

}  // namespace sapdrl::oracle
