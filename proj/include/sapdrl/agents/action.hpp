#pragma once

#include <cstddef>

namespace sapdrl::agents {

/// One-dimensional action: either an index into a finite action set or a
/// scalar in a closed interval.
struct ActionValue {
  enum class Kind { Discrete, Continuous };
  Kind kind = Kind::Discrete;
  int index = 0;
  double value = 0.0;

  static ActionValue discrete(int i) { return {Kind::Discrete, i, 0.0}; }
  static ActionValue continuous(double v) { return {Kind::Continuous, 0, v}; }

  bool isDiscrete() const { return kind == Kind::Discrete; }

  /// Scalar view used for logging and CSV dumps.
  double scalar() const { return isDiscrete() ? static_cast<double>(index) : value; }
};

inline bool operator==(const ActionValue& a, const ActionValue& b) {
  if (a.kind != b.kind) return false;
  return a.isDiscrete() ? a.index == b.index : a.value == b.value;
}

struct ActionSpace {
  enum class Kind { Discrete, Continuous };
  Kind kind = Kind::Discrete;
  int count = 0;       // discrete
  double lo = -1.0;    // continuous bounds
  double hi = 1.0;

  static ActionSpace discrete(int n) { return {Kind::Discrete, n, 0.0, 0.0}; }
  static ActionSpace continuous(double lo, double hi) { return {Kind::Continuous, 0, lo, hi}; }
  bool isDiscrete() const { return kind == Kind::Discrete; }
};

}  // namespace sapdrl::agents
