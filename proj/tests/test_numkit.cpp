#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "sapdrl/errors.hpp"
#include "sapdrl/numkit/adam.hpp"
#include "sapdrl/numkit/branch_net.hpp"
#include "sapdrl/numkit/checkpoint.hpp"
#include "sapdrl/numkit/losses.hpp"
#include "sapdrl/numkit/mlp.hpp"
#include "sapdrl/oracle/finite_diff.hpp"

using namespace sapdrl;
using numkit::Activation;
using numkit::Mlp;

namespace {

Mlp singleUnit(Activation act, double w, double b) {
  Mlp net(1, {{1, act}});
  net.weights(0)(0, 0) = w;
  net.bias(0)[0] = b;
  return net;
}

// scalar probe: f(params) = sum_o c_o * net(x)_o
double probe(Mlp& net, std::span<const double> params, std::span<const double> x,
             std::span<const double> c) {
  net.assignParams(params);
  const auto out = net.forward(x);
  double s = 0.0;
  for (std::size_t i = 0; i < out.size(); ++i) s += c[i] * out[i];
  return s;
}

// Central differences are invalid within h of a relu corner, so inputs
// that park any relu pre-activation near zero are rejected before the
// check. Returns the smallest |pre-activation| over relu layers.
double minReluPreactGap(const Mlp& net, std::span<const double> x) {
  std::vector<double> act(x.begin(), x.end());
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t l = 0; l < net.layerCount(); ++l) {
    const auto& w = net.weights(l);
    const auto& b = net.bias(l);
    std::vector<double> z(w.rows());
    for (std::size_t u = 0; u < w.rows(); ++u) {
      double acc = b[u];
      for (std::size_t k = 0; k < w.cols(); ++k) acc += w(u, k) * act[k];
      z[u] = acc;
    }
    if (net.activation(l) == Activation::Relu) {
      for (double v : z) gap = std::min(gap, std::abs(v));
      for (double& v : z) v = v > 0.0 ? v : 0.0;
    } else if (net.activation(l) == Activation::Tanh) {
      for (double& v : z) v = std::tanh(v);
    }
    act = std::move(z);
  }
  return gap;
}

}  // namespace

TEST_CASE("forward: zero net maps anything to zero") {
  Mlp net(3, {{4, Activation::Tanh}, {2, Activation::Linear}});
  const auto out = net.forward(std::vector<double>{0.3, -1.2, 5.0});
  for (double v : out) CHECK(v == 0.0);
}

TEST_CASE("forward: single affine unit") {
  auto net = singleUnit(Activation::Linear, 2.0, 1.0);
  CHECK(net.forward(std::vector<double>{3.0})[0] == doctest::Approx(7.0));
}

TEST_CASE("forward: relu clamps negative pre-activation") {
  auto net = singleUnit(Activation::Relu, 1.0, -5.0);
  CHECK(net.forward(std::vector<double>{3.0})[0] == 0.0);
}

TEST_CASE("forward: dimension mismatch rejected") {
  Mlp net(3, {{2, Activation::Linear}});
  CHECK_THROWS_AS(net.forward(std::vector<double>{1.0, 2.0}), ContractError);
}

TEST_CASE("forward is deterministic") {
  numkit::Rng rng(42);
  Mlp net(4, {{8, Activation::Tanh}, {3, Activation::Linear}});
  net.initWeights(rng);
  const std::vector<double> x{0.1, -0.5, 2.0, 0.7};
  const auto a = net.forward(x);
  const auto b = net.forward(x);
  CHECK(a == b);
}

TEST_CASE("backward: zero output gradient gives zero parameter gradients") {
  numkit::Rng rng(7);
  Mlp net(3, {{5, Activation::Relu}, {2, Activation::Linear}});
  net.initWeights(rng);
  net.forward(std::vector<double>{1.0, 2.0, 3.0});
  auto grads = net.makeGrads();
  net.backward(std::vector<double>{0.0, 0.0}, grads);
  std::vector<double> flat(grads.count());
  grads.copyTo(flat);
  for (double g : flat) CHECK(g == 0.0);
}

TEST_CASE("backward: single linear unit gradient") {
  auto net = singleUnit(Activation::Linear, 2.0, 1.0);
  net.forward(std::vector<double>{3.0});
  auto grads = net.makeGrads();
  net.backward(std::vector<double>{1.0}, grads);
  CHECK(grads.weight[0](0, 0) == doctest::Approx(3.0));  // d(wx+b)/dw = x
  CHECK(grads.bias[0][0] == doctest::Approx(1.0));
}

TEST_CASE("backward without forward cache is a sequencing error") {
  Mlp net(2, {{2, Activation::Linear}});
  auto grads = net.makeGrads();
  CHECK_THROWS_AS(net.backward(std::vector<double>{1.0, 0.0}, grads), ContractError);
}

TEST_CASE("backward matches central finite differences on a 5-8-4-2 tanh net") {
  numkit::Rng rng(123);
  Mlp net(5, {{8, Activation::Tanh}, {4, Activation::Tanh}, {2, Activation::Linear}});
  net.initWeights(rng);
  std::vector<double> x(5), c(2);
  for (auto& v : x) v = rng.uniformIn(-1.0, 1.0);
  for (auto& v : c) v = rng.uniformIn(-1.0, 1.0);

  const auto params = net.flatParams();
  net.forward(x);
  auto grads = net.makeGrads();
  net.backward(c, grads);
  std::vector<double> analytic(grads.count());
  grads.copyTo(analytic);

  const auto numeric = oracle::finiteDiffGrad(
      [&](std::span<const double> p) { return probe(net, p, x, c); }, params);
  net.assignParams(params);

  REQUIRE(analytic.size() == numeric.size());
  for (std::size_t i = 0; i < analytic.size(); ++i) {
    const double denom = std::max({std::abs(analytic[i]), std::abs(numeric[i]), 1e-7});
    CHECK(std::abs(analytic[i] - numeric[i]) / denom < 1e-4);
  }
}

TEST_CASE("backward returns the input gradient") {
  auto net = singleUnit(Activation::Linear, 2.0, 0.0);
  net.forward(std::vector<double>{3.0});
  auto grads = net.makeGrads();
  const auto gx = net.backward(std::vector<double>{1.0}, grads);
  CHECK(gx[0] == doctest::Approx(2.0));  // dy/dx = w
}

TEST_CASE("adam: zero gradients leave parameters unchanged and advance the step") {
  numkit::AdamState st(3);
  std::vector<double> p{1.0, -2.0, 0.5};
  const auto before = p;
  numkit::adamStep(st, p, std::vector<double>{0.0, 0.0, 0.0}, 0.01);
  CHECK(p == before);
  CHECK(st.step == 1);
}

TEST_CASE("adam: first step on a scalar") {
  numkit::AdamState st(1);
  std::vector<double> p{0.0};
  numkit::adamStep(st, p, std::vector<double>{1.0}, 0.001);
  CHECK(p[0] == doctest::Approx(-0.000999999990).epsilon(1e-9));
}

TEST_CASE("adam: constant gradients step by about lr") {
  numkit::AdamState st(1);
  std::vector<double> p{0.0};
  numkit::adamStep(st, p, std::vector<double>{0.5}, 0.001);
  const double step1 = std::abs(p[0]);
  const double prev = p[0];
  numkit::adamStep(st, p, std::vector<double>{0.5}, 0.001);
  const double step2 = std::abs(p[0] - prev);
  CHECK(step1 == doctest::Approx(0.001).epsilon(0.01));
  CHECK(step2 == doctest::Approx(0.001).epsilon(0.01));
}

TEST_CASE("adam: non-finite gradient rejected") {
  numkit::AdamState st(1);
  std::vector<double> p{0.0};
  CHECK_THROWS_AS(
      numkit::adamStep(st, p, std::vector<double>{std::numeric_limits<double>::quiet_NaN()}, 0.01),
      NumericsError);
}

TEST_CASE("cross entropy: equal logits give ln 2") {
  const auto lg = numkit::crossEntropyWithL2(std::vector<double>{0.5, 0.5}, 1, {}, 0.0);
  CHECK(lg.loss == doctest::Approx(std::log(2.0)));
  const auto lg0 = numkit::crossEntropyWithL2(std::vector<double>{0.5, 0.5}, 0, {}, 0.0);
  CHECK(lg0.loss == doctest::Approx(std::log(2.0)));
}

TEST_CASE("cross entropy: confident correct prediction has near-zero loss") {
  const auto lg = numkit::crossEntropyWithL2(std::vector<double>{-20.0, 20.0}, 1, {}, 0.0);
  CHECK(lg.loss < 1e-8);
}

TEST_CASE("cross entropy: L2 penalty is (lambda/2)*sum theta^2") {
  const std::vector<double> params{2.0, 0.0};  // sum of squares = 4
  const auto lg = numkit::crossEntropyWithL2(std::vector<double>{0.0, 0.0}, 1, params, 0.01);
  CHECK(lg.loss == doctest::Approx(std::log(2.0) + 0.02));
}

TEST_CASE("cross entropy: gradient is softmax minus onehot") {
  const auto lg = numkit::crossEntropyWithL2(std::vector<double>{0.0, 0.0}, 1, {}, 0.0);
  CHECK(lg.grad[0] == doctest::Approx(0.5));
  CHECK(lg.grad[1] == doctest::Approx(-0.5));
}

TEST_CASE("mse basics") {
  const auto zero = numkit::meanSquaredError(std::vector<double>{1.0, 2.0},
                                             std::vector<double>{1.0, 2.0});
  CHECK(zero.loss == 0.0);

  const auto one = numkit::meanSquaredError(std::vector<double>{1.0}, std::vector<double>{3.0});
  CHECK(one.loss == doctest::Approx(4.0));
  CHECK(one.grad[0] == doctest::Approx(-4.0));

  const auto two = numkit::meanSquaredError(std::vector<double>{0.0, 0.0},
                                            std::vector<double>{1.0, 1.0});
  CHECK(two.loss == doctest::Approx(1.0));
}

TEST_CASE("soft update: tau=1 copies, small tau interpolates, repeated application converges") {
  numkit::Rng rng(5);
  Mlp source(2, {{3, Activation::Tanh}, {1, Activation::Linear}});
  source.initWeights(rng);
  Mlp target(2, {{3, Activation::Tanh}, {1, Activation::Linear}});

  Mlp full = target;
  numkit::softUpdate(full, source, 1.0);
  CHECK(full.flatParams() == source.flatParams());

  Mlp t2(2, {{3, Activation::Tanh}, {1, Activation::Linear}});
  Mlp s2(2, {{3, Activation::Tanh}, {1, Activation::Linear}});
  for (auto& v : s2.weights(0).data()) v = 1.0;
  numkit::softUpdate(t2, s2, 0.001);
  CHECK(t2.weights(0)(0, 0) == doctest::Approx(0.001));

  // monotone convergence toward a frozen source
  double prevGap = 1.0;
  for (int k = 0; k < 50; ++k) {
    numkit::softUpdate(t2, s2, 0.1);
    const double gap = std::abs(1.0 - t2.weights(0)(0, 0));
    CHECK(gap <= prevGap);
    prevGap = gap;
  }

  CHECK_THROWS_AS(numkit::softUpdate(t2, s2, 0.0), ConfigError);
  CHECK_THROWS_AS(numkit::softUpdate(t2, s2, 1.5), ConfigError);
}

TEST_CASE("soft update after k steps equals 1-(1-tau)^k interpolation") {
  Mlp t(1, {{1, Activation::Linear}});
  Mlp s(1, {{1, Activation::Linear}});
  s.weights(0)(0, 0) = 1.0;
  const double tau = 0.05;
  const int k = 13;
  for (int i = 0; i < k; ++i) numkit::softUpdate(t, s, tau);
  CHECK(t.weights(0)(0, 0) == doctest::Approx(1.0 - std::pow(1.0 - tau, k)));
}

TEST_CASE("branch net forward equals manual composition and its gradients check out") {
  numkit::Rng rng(99);
  numkit::Mlp state(3, {{4, Activation::Relu}});
  numkit::Mlp action(1, {{4, Activation::Relu}});
  numkit::Mlp joint(8, {{4, Activation::Tanh}, {1, Activation::Linear}});
  numkit::BranchNet net(std::move(state), std::move(action), std::move(joint));
  net.initWeights(rng);

  const std::vector<double> s{0.2, -0.4, 0.9}, a{0.3};
  const auto out = net.forward(s, a);
  REQUIRE(out.size() == 1);

  // finite-difference check over all parameters
  std::vector<double> params(net.paramCount());
  net.copyParams(params);
  auto f = [&](std::span<const double> p) {
    net.assignParams(p);
    return net.forward(s, a)[0];
  };
  const auto numeric = oracle::finiteDiffGrad(f, params);
  net.assignParams(params);

  net.forward(s, a);
  auto grads = net.makeGrads();
  numkit::Matrix seed(1, 1, 1.0);
  net.backward(seed, grads);
  std::vector<double> analytic(grads.count());
  grads.copyTo(analytic);

  for (std::size_t i = 0; i < analytic.size(); ++i) {
    const double denom = std::max({std::abs(analytic[i]), std::abs(numeric[i]), 1e-7});
    CHECK(std::abs(analytic[i] - numeric[i]) / denom < 1e-4);
  }
}

TEST_CASE("softmax activation backward matches finite differences") {
  numkit::Rng rng(321);
  Mlp net(3, {{4, Activation::Relu}, {3, Activation::Softmax}});
  net.initWeights(rng);
  std::vector<double> x{0.5, -0.2, 0.8}, c{0.3, -1.0, 0.4};
  const auto params = net.flatParams();

  net.forward(x);
  auto grads = net.makeGrads();
  net.backward(c, grads);
  std::vector<double> analytic(grads.count());
  grads.copyTo(analytic);

  const auto numeric = oracle::finiteDiffGrad(
      [&](std::span<const double> p) { return probe(net, p, x, c); }, params);
  for (std::size_t i = 0; i < analytic.size(); ++i) {
    const double denom = std::max({std::abs(analytic[i]), std::abs(numeric[i]), 1e-7});
    CHECK(std::abs(analytic[i] - numeric[i]) / denom < 1e-4);
  }
}

TEST_CASE("checkpoint round trip preserves parameters bit-exactly") {
  numkit::Rng rng(2024);
  Mlp net(4, {{6, Activation::Relu}, {2, Activation::Linear}});
  net.initWeights(rng);
  const auto dir = std::filesystem::temp_directory_path() / "sapdrl_ckpt_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "net.sapn";
  numkit::saveMlp(net, path);

  Mlp loaded(4, {{6, Activation::Relu}, {2, Activation::Linear}});
  numkit::loadMlp(loaded, path);
  CHECK(loaded.flatParams() == net.flatParams());

  Mlp wrong(4, {{5, Activation::Relu}, {2, Activation::Linear}});
  CHECK_THROWS_AS(numkit::loadMlp(wrong, path), CheckpointError);

  numkit::Mlp st(2, {{3, Activation::Relu}});
  numkit::Mlp ac(1, {{3, Activation::Relu}});
  numkit::Mlp jo(6, {{2, Activation::Linear}});
  numkit::BranchNet bn(std::move(st), std::move(ac), std::move(jo));
  bn.initWeights(rng);
  const auto bpath = dir / "branch.sapn";
  numkit::saveBranchNet(bn, bpath);
  numkit::Mlp st2(2, {{3, Activation::Relu}});
  numkit::Mlp ac2(1, {{3, Activation::Relu}});
  numkit::Mlp jo2(6, {{2, Activation::Linear}});
  numkit::BranchNet bn2(std::move(st2), std::move(ac2), std::move(jo2));
  numkit::loadBranchNet(bn2, bpath);
  std::vector<double> pa(bn.paramCount()), pb(bn2.paramCount());
  bn.copyParams(pa);
  bn2.copyParams(pb);
  CHECK(pa == pb);

  CHECK_THROWS_AS(numkit::loadMlp(loaded, bpath), CheckpointError);  // version mismatch
}

TEST_CASE("gradient check across 100 random relu/tanh networks") {
  numkit::Rng rng(777);
  for (int trial = 0; trial < 100; ++trial) {
    const int layers = 2 + static_cast<int>(rng.uniformInt(3));
    std::size_t inDim = 2 + rng.uniformInt(31);
    std::vector<numkit::LayerSpec> spec;
    for (int l = 0; l < layers; ++l) {
      const Activation act = (l + 1 == layers)
                                 ? Activation::Linear
                                 : (rng.uniform() < 0.5 ? Activation::Relu : Activation::Tanh);
      spec.push_back({2 + rng.uniformInt(31), act});
    }
    Mlp net(inDim, spec);
    net.initWeights(rng);

    std::vector<double> x(inDim), c(net.outputDim());
    do {
      for (auto& v : x) v = rng.uniformIn(-2.0, 2.0);
    } while (minReluPreactGap(net, x) < 1e-3);
    for (auto& v : c) v = rng.uniformIn(-1.0, 1.0);

    const auto params = net.flatParams();
    net.forward(x);
    auto grads = net.makeGrads();
    net.backward(c, grads);
    std::vector<double> analytic(grads.count());
    grads.copyTo(analytic);
    const auto numeric = oracle::finiteDiffGrad(
        [&](std::span<const double> p) { return probe(net, p, x, c); }, params);

    std::size_t bad = 0;
    for (std::size_t i = 0; i < analytic.size(); ++i) {
      const double diff = std::abs(analytic[i] - numeric[i]);
      const double denom = std::max(std::abs(analytic[i]), std::abs(numeric[i]));
      if (denom < 1e-7) {
        if (diff > 1e-7) ++bad;
      } else if (diff / denom >= 1e-4) {
        ++bad;
      }
    }
    CHECK(bad == 0);
  }
}
