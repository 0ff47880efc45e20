#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "sapdrl/numkit/matrix.hpp"
#include "sapdrl/numkit/rng.hpp"

namespace sapdrl::numkit {

enum class Activation { Relu, Tanh, Linear, Softmax };

std::string activationName(Activation a);

struct LayerSpec {
  std::size_t units;
  Activation act;
};

class Mlp;

/// Parameter gradients with the same shapes as the network they belong to.
struct MlpGrads {
  std::vector<Matrix> weight;              // per layer, units x fanIn
  std::vector<std::vector<double>> bias;   // per layer
  void setZero();
  void scale(double s);
  std::size_t count() const;
  void copyTo(std::span<double> out) const;
};

/// Fully connected feedforward network. Layer i computes
/// act(W_i x + b_i); weights are stored units x fanIn so a forward pass is
/// a row-dot per unit. forward() caches layer inputs and pre-activations,
/// which backward() consumes for reverse-mode accumulation.
class Mlp {
 public:
  Mlp() = default;
  Mlp(std::size_t inputDim, std::vector<LayerSpec> layers);

  /// Uniform init in +-1/sqrt(fanIn) per layer, biases zero.
  void initWeights(Rng& rng);

  std::size_t inputDim() const { return inputDim_; }
  std::size_t outputDim() const;
  std::size_t layerCount() const { return layers_.size(); }
  const Matrix& weights(std::size_t layer) const { return layers_[layer].w; }
  Matrix& weights(std::size_t layer) { return layers_[layer].w; }
  std::vector<double>& bias(std::size_t layer) { return layers_[layer].b; }
  const std::vector<double>& bias(std::size_t layer) const { return layers_[layer].b; }
  Activation activation(std::size_t layer) const { return layers_[layer].act; }

  /// Batched forward pass, one example per row. Caches activations.
  Matrix forward(const Matrix& input);
  std::vector<double> forward(std::span<const double> input);

  /// Reverse accumulation from the cached forward pass. outputGrad rows
  /// must match the cached batch. Gradients are accumulated into grads;
  /// the return value is the gradient with respect to the input batch.
  /// Throws ContractError when no forward cache is present.
  Matrix backward(const Matrix& outputGrad, MlpGrads& grads);
  std::vector<double> backward(std::span<const double> outputGrad, MlpGrads& grads);

  MlpGrads makeGrads() const;

  std::size_t paramCount() const;
  void copyParams(std::span<double> out) const;
  void assignParams(std::span<const double> in);
  std::vector<double> flatParams() const;

  bool sameTopology(const Mlp& other) const;

 private:
  struct Layer {
    Matrix w;               // units x fanIn
    std::vector<double> b;  // units
    Activation act;
  };

  std::size_t inputDim_ = 0;
  std::vector<Layer> layers_;

  // forward cache
  bool hasCache_ = false;
  std::vector<Matrix> layerInputs_;   // per layer, batch x fanIn
  std::vector<Matrix> preacts_;       // per layer, batch x units
};

/// target <- tau * source + (1 - tau) * target, element-wise.
/// tau must lie in (0, 1]; topologies must match.
void softUpdate(Mlp& target, const Mlp& source, double tau);

}  // namespace sapdrl::numkit
