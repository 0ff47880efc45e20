#include "sapdrl/numkit/mlp.hpp"

#include <algorithm>
#include <cmath>

#include "sapdrl/errors.hpp"

namespace sapdrl::numkit {

namespace {

// out(batch x units) = x(batch x fanIn) . w(units x fanIn)^T + b
void affineForward(const Matrix& x, const Matrix& w, const std::vector<double>& b, Matrix& out) {
  const std::size_t batch = x.rows(), units = w.rows(), fanIn = w.cols();
  for (std::size_t i = 0; i < batch; ++i) {
    const double* xi = x.row(i).data();
    double* oi = out.row(i).data();
    for (std::size_t u = 0; u < units; ++u) {
      const double* wu = w.row(u).data();
      double acc = b[u];
      for (std::size_t k = 0; k < fanIn; ++k) acc += wu[k] * xi[k];
      oi[u] = acc;
    }
  }
}

void applyActivation(Activation act, const Matrix& z, Matrix& a) {
  switch (act) {
    case Activation::Linear:
      a = z;
      break;
    case Activation::Relu:
      a = z;
      for (double& v : a.data()) v = v > 0.0 ? v : 0.0;
      break;
    case Activation::Tanh:
      a = z;
      for (double& v : a.data()) v = std::tanh(v);
      break;
    case Activation::Softmax:
      a = Matrix(z.rows(), z.cols());
      for (std::size_t i = 0; i < z.rows(); ++i) {
        auto zi = z.row(i);
        double mx = zi[0];
        for (double v : zi) mx = std::max(mx, v);
        double sum = 0.0;
        auto ai = a.row(i);
        for (std::size_t j = 0; j < zi.size(); ++j) {
          ai[j] = std::exp(zi[j] - mx);
          sum += ai[j];
        }
        for (double& v : ai) v /= sum;
      }
      break;
  }
}

// gz = dL/dz given ga = dL/da and the cached pre-activation z.
void activationBackward(Activation act, const Matrix& z, const Matrix& ga, Matrix& gz) {
  switch (act) {
    case Activation::Linear:
      gz = ga;
      break;
    case Activation::Relu:
      gz = ga;
      for (std::size_t i = 0; i < gz.size(); ++i)
        if (z.data()[i] <= 0.0) gz.data()[i] = 0.0;
      break;
    case Activation::Tanh:
      gz = ga;
      for (std::size_t i = 0; i < gz.size(); ++i) {
        const double t = std::tanh(z.data()[i]);
        gz.data()[i] *= 1.0 - t * t;
      }
      break;
    case Activation::Softmax: {
      // full Jacobian: gz_j = p_j * (ga_j - sum_k ga_k p_k)
      Matrix p;
      applyActivation(Activation::Softmax, z, p);
      gz = Matrix(ga.rows(), ga.cols());
      for (std::size_t i = 0; i < ga.rows(); ++i) {
        auto pi = p.row(i);
        auto gi = ga.row(i);
        double dot = 0.0;
        for (std::size_t j = 0; j < pi.size(); ++j) dot += gi[j] * pi[j];
        auto oi = gz.row(i);
        for (std::size_t j = 0; j < pi.size(); ++j) oi[j] = pi[j] * (gi[j] - dot);
      }
      break;
    }
  }
}

}  // namespace

std::string activationName(Activation a) {
  switch (a) {
    case Activation::Relu: return "relu";
    case Activation::Tanh: return "tanh";
    case Activation::Linear: return "linear";
    case Activation::Softmax: return "softmax";
  }
  return "?";
}

void MlpGrads::setZero() {
  for (auto& m : weight) m.setZero();
  for (auto& b : bias) std::fill(b.begin(), b.end(), 0.0);
}

void MlpGrads::scale(double s) {
  for (auto& m : weight)
    for (double& v : m.data()) v *= s;
  for (auto& b : bias)
    for (double& v : b) v *= s;
}

std::size_t MlpGrads::count() const {
  std::size_t n = 0;
  for (const auto& m : weight) n += m.size();
  for (const auto& b : bias) n += b.size();
  return n;
}

void MlpGrads::copyTo(std::span<double> out) const {
  std::size_t pos = 0;
  for (std::size_t l = 0; l < weight.size(); ++l) {
    std::copy(weight[l].data().begin(), weight[l].data().end(), out.begin() + pos);
    pos += weight[l].size();
    std::copy(bias[l].begin(), bias[l].end(), out.begin() + pos);
    pos += bias[l].size();
  }
}

Mlp::Mlp(std::size_t inputDim, std::vector<LayerSpec> layers) : inputDim_(inputDim) {
  if (layers.empty()) throw ConfigError("Mlp requires at least one layer");
  std::size_t fanIn = inputDim;
  for (const auto& spec : layers) {
    if (spec.units == 0) throw ConfigError("Mlp layer with zero units");
    Layer layer;
    layer.w = Matrix(spec.units, fanIn);
    layer.b.assign(spec.units, 0.0);
    layer.act = spec.act;
    layers_.push_back(std::move(layer));
    fanIn = spec.units;
  }
}

void Mlp::initWeights(Rng& rng) {
  for (auto& layer : layers_) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(layer.w.cols()));
    for (double& v : layer.w.data()) v = rng.uniformIn(-bound, bound);
    std::fill(layer.b.begin(), layer.b.end(), 0.0);
  }
}

std::size_t Mlp::outputDim() const { return layers_.back().w.rows(); }

Matrix Mlp::forward(const Matrix& input) {
  if (input.cols() != inputDim_)
    throw ContractError("Mlp::forward: input dim " + std::to_string(input.cols()) +
                        ", expected " + std::to_string(inputDim_));
  layerInputs_.assign(layers_.size(), {});
  preacts_.assign(layers_.size(), {});
  Matrix act = input;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    layerInputs_[l] = act;
    Matrix z(act.rows(), layers_[l].w.rows());
    affineForward(act, layers_[l].w, layers_[l].b, z);
    preacts_[l] = z;
    applyActivation(layers_[l].act, z, act);
  }
  hasCache_ = true;
  return act;
}

std::vector<double> Mlp::forward(std::span<const double> input) {
  Matrix out = forward(Matrix::fromRow(input));
  return {out.data().begin(), out.data().end()};
}

Matrix Mlp::backward(const Matrix& outputGrad, MlpGrads& grads) {
  if (!hasCache_) throw ContractError("Mlp::backward called without a forward cache");
  if (outputGrad.rows() != preacts_.back().rows() || outputGrad.cols() != outputDim())
    throw ContractError("Mlp::backward: gradient shape does not match cached batch");

  Matrix ga = outputGrad;
  for (std::size_t li = layers_.size(); li-- > 0;) {
    const Layer& layer = layers_[li];
    Matrix gz;
    activationBackward(layer.act, preacts_[li], ga, gz);

    const Matrix& x = layerInputs_[li];
    const std::size_t batch = gz.rows(), units = gz.cols(), fanIn = x.cols();

    // dW += gz^T . x ; db += column sums of gz
    Matrix& dw = grads.weight[li];
    std::vector<double>& db = grads.bias[li];
    for (std::size_t i = 0; i < batch; ++i) {
      const double* gzi = gz.row(i).data();
      const double* xi = x.row(i).data();
      for (std::size_t u = 0; u < units; ++u) {
        const double g = gzi[u];
        if (g == 0.0) continue;
        double* dwu = dw.row(u).data();
        for (std::size_t k = 0; k < fanIn; ++k) dwu[k] += g * xi[k];
        db[u] += g;
      }
    }

    // gx = gz . W
    Matrix gx(batch, fanIn);
    for (std::size_t i = 0; i < batch; ++i) {
      const double* gzi = gz.row(i).data();
      double* gxi = gx.row(i).data();
      for (std::size_t u = 0; u < units; ++u) {
        const double g = gzi[u];
        if (g == 0.0) continue;
        const double* wu = layer.w.row(u).data();
        for (std::size_t k = 0; k < fanIn; ++k) gxi[k] += g * wu[k];
      }
    }
    ga = std::move(gx);
  }
  return ga;
}

std::vector<double> Mlp::backward(std::span<const double> outputGrad, MlpGrads& grads) {
  Matrix gx = backward(Matrix::fromRow(outputGrad), grads);
  return {gx.data().begin(), gx.data().end()};
}

MlpGrads Mlp::makeGrads() const {
  MlpGrads g;
  for (const auto& layer : layers_) {
    g.weight.emplace_back(layer.w.rows(), layer.w.cols());
    g.bias.emplace_back(layer.b.size(), 0.0);
  }
  return g;
}

std::size_t Mlp::paramCount() const {
  std::size_t n = 0;
  for (const auto& layer : layers_) n += layer.w.size() + layer.b.size();
  return n;
}

void Mlp::copyParams(std::span<double> out) const {
  std::size_t pos = 0;
  for (const auto& layer : layers_) {
    std::copy(layer.w.data().begin(), layer.w.data().end(), out.begin() + pos);
    pos += layer.w.size();
    std::copy(layer.b.begin(), layer.b.end(), out.begin() + pos);
    pos += layer.b.size();
  }
}

void Mlp::assignParams(std::span<const double> in) {
  std::size_t pos = 0;
  for (auto& layer : layers_) {
    std::copy(in.begin() + pos, in.begin() + pos + layer.w.size(), layer.w.data().begin());
    pos += layer.w.size();
    std::copy(in.begin() + pos, in.begin() + pos + layer.b.size(), layer.b.begin());
    pos += layer.b.size();
  }
}

std::vector<double> Mlp::flatParams() const {
  std::vector<double> out(paramCount());
  copyParams(out);
  return out;
}

bool Mlp::sameTopology(const Mlp& other) const {
  if (inputDim_ != other.inputDim_ || layers_.size() != other.layers_.size()) return false;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    if (layers_[l].w.rows() != other.layers_[l].w.rows() ||
        layers_[l].w.cols() != other.layers_[l].w.cols() ||
        layers_[l].act != other.layers_[l].act)
      return false;
  }
  return true;
}

void softUpdate(Mlp& target, const Mlp& source, double tau) {
  if (!(tau > 0.0 && tau <= 1.0)) throw ConfigError("softUpdate: tau must be in (0, 1]");
  if (!target.sameTopology(source)) throw ContractError("softUpdate: topology mismatch");
  for (std::size_t l = 0; l < target.layerCount(); ++l) {
    auto& tw = target.weights(l).data();
    const auto& sw = source.weights(l).data();
    for (std::size_t i = 0; i < tw.size(); ++i) tw[i] += tau * (sw[i] - tw[i]);
    auto& tb = target.bias(l);
    const auto& sb = source.bias(l);
    for (std::size_t i = 0; i < tb.size(); ++i) tb[i] += tau * (sb[i] - tb[i]);
  }
}

}  // namespace sapdrl::numkit
