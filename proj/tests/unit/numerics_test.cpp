#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "aac/numerics/adam.hpp"
#include "aac/numerics/ops.hpp"
#include "aac/numerics/rng.hpp"
#include "aac/numerics/tensor.hpp"
#include "gradcheck.hpp"

namespace aac {
namespace {

using testing::check_gradients;
using testing::random_leaf;


TEST(Tensor, RejectsMismatchedData) {
  EXPECT_THROW(Tensor::from({2, 3}, std::vector<double>(5)), std::invalid_argument);
  EXPECT_THROW(Tensor::zeros({2, 0}), std::invalid_argument);
}

TEST(Tensor, GradPresentIffRequiresGrad) {
  Tensor a = Tensor::zeros({2, 2});
  EXPECT_FALSE(a.has_grad());
  Tensor b = Tensor::zeros({2, 2}, true);
  ASSERT_TRUE(b.has_grad());
  EXPECT_EQ(b.grad().size(), 4u);
}

TEST(Softmax, UniformLogits) {
  const Tensor y = softmax(Tensor::zeros({4}), 0);
  for (double v : y.data()) EXPECT_DOUBLE_EQ(v, 0.25);
}

TEST(Softmax, HandEvaluated) {
  const Tensor y = softmax(Tensor::from({2}, {std::log(1.0), std::log(3.0)}), 0);
  EXPECT_NEAR(y.data()[0], 0.25, 1e-15);
  EXPECT_NEAR(y.data()[1], 0.75, 1e-15);
}

TEST(Softmax, LargeLogitsDoNotOverflow) {
  const Tensor y = softmax(Tensor::from({2}, {1000.0, 0.0}), 0);
  EXPECT_TRUE(std::isfinite(y.data()[0]));
  EXPECT_NEAR(y.data()[0], 1.0, 1e-15);
  EXPECT_NEAR(y.data()[1], 0.0, 1e-15);
}

TEST(Softmax, RowsSumToOne) {
  const Tensor x = random_leaf({5, 7}, 11, false);
  for (std::size_t axis : {0u, 1u}) {
    const Tensor y = softmax(scale(x, 30.0), axis);
    const std::size_t outer = axis == 1 ? 5 : 7, inner = axis == 1 ? 7 : 5;
    for (std::size_t o = 0; o < outer; ++o) {
      double s = 0.0;
      for (std::size_t i = 0; i < inner; ++i) s += axis == 1 ? y.at(o, i) : y.at(i, o);
      EXPECT_NEAR(s, 1.0, 1e-12);
    }
  }
}

TEST(Softmax, RejectsBadAxis) { EXPECT_THROW(softmax(Tensor::zeros({2, 2}), 2), std::invalid_argument); }

TEST(MaskedSoftmax, MaskedEntriesGetZeroWeight) {
  const Tensor y = masked_softmax_rows(Tensor::from({1, 3}, {5.0, 1.0, 1.0}), {false, true, true});
  EXPECT_EQ(y.data()[0], 0.0);
  EXPECT_DOUBLE_EQ(y.data()[1], 0.5);
  EXPECT_THROW(masked_softmax_rows(Tensor::zeros({1, 2}), {false, false}), std::invalid_argument);
}

TEST(LayerNorm, ConstantRowMapsToBias) {
  const Tensor y = layer_norm(Tensor::full({1, 4}, 5.0), Tensor::full({4}, 1.0), Tensor::zeros({4}), 1e-5);
  for (double v : y.data()) EXPECT_EQ(v, 0.0);
}

TEST(LayerNorm, PopulationVariance) {
  const Tensor y = layer_norm(Tensor::from({1, 2}, {1.0, 3.0}), Tensor::full({2}, 1.0), Tensor::zeros({2}), 0.0);
  EXPECT_NEAR(y.data()[0], -1.0, 1e-15);
  EXPECT_NEAR(y.data()[1], 1.0, 1e-15);
}

TEST(LayerNorm, ZeroGainGivesBias) {
  const Tensor bias = Tensor::from({3}, {0.5, -1.0, 2.0});
  const Tensor y = layer_norm(random_leaf({4, 3}, 3, false), Tensor::zeros({3}), bias, 1e-5);
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t c = 0; c < 3; ++c) EXPECT_EQ(y.at(r, c), bias.data()[c]);
}

TEST(LayerNorm, NormalizedRowsHaveZeroMeanUnitVariance) {
  const Tensor y = layer_norm(scale(random_leaf({6, 5}, 9, false), 7.0), Tensor::full({5}, 1.0), Tensor::zeros({5}), 0.0);
  for (std::size_t r = 0; r < 6; ++r) {
    double mean = 0.0, var = 0.0;
    for (std::size_t c = 0; c < 5; ++c) mean += y.at(r, c) / 5.0;
    for (std::size_t c = 0; c < 5; ++c) var += (y.at(r, c) - mean) * (y.at(r, c) - mean) / 5.0;
    EXPECT_LE(std::abs(mean), 1e-9);
    EXPECT_NEAR(var, 1.0, 1e-9);
  }
}

TEST(LayerNorm, SizeOneWithZeroEpsIsAnError) {
  EXPECT_THROW(layer_norm(Tensor::from({2, 1}, {1.0, 2.0}), Tensor::full({1}, 1.0), Tensor::zeros({1}), 0.0),
               std::invalid_argument);
}

TEST(CrossEntropy, UniformLogits) {
  const std::vector<std::size_t> targets{7};
  const Tensor loss = cross_entropy_masked(Tensor::zeros({1, 10}), targets, {true});
  EXPECT_NEAR(loss.item(), std::log(10.0), 1e-12);
}

TEST(CrossEntropy, ConfidentCorrectLogitIsNearZero) {
  std::vector<double> logits(10, 0.0);
  logits[3] = 50.0;
  const std::vector<std::size_t> targets{3};
  EXPECT_LT(cross_entropy_masked(Tensor::from({1, 10}, logits), targets, {true}).item(), 1e-4);
}

TEST(CrossEntropy, MaskedPositionIsIgnored) {
  const Tensor logits = random_leaf({2, 6}, 4, false);
  const std::vector<std::size_t> both{1, 4};
  const double masked = cross_entropy_masked(logits, both, {true, false}).item();
  const std::vector<std::size_t> first{1};
  const double single = cross_entropy_masked(slice_cols(transpose(slice_cols(transpose(logits), 0, 1)), 0, 6), first, {true}).item();
  EXPECT_DOUBLE_EQ(masked, single);
}

TEST(CrossEntropy, Errors) {
  const std::vector<std::size_t> targets{0, 1};
  EXPECT_THROW(cross_entropy_masked(Tensor::zeros({2, 3}), targets, {false, false}), std::invalid_argument);
  const std::vector<std::size_t> bad{0, 3};
  EXPECT_THROW(cross_entropy_masked(Tensor::zeros({2, 3}), bad, {true, true}), std::out_of_range);
}

TEST(Backward, SumGivesOnes) {
  Tensor x = random_leaf({2, 3, 2}, 1);
  backward(sum(x));
  for (double g : x.grad()) EXPECT_EQ(g, 1.0);
}

TEST(Backward, SquareGivesTwoX) {
  Tensor x = Tensor::from({3}, {1.0, 2.0, 3.0}, true);
  backward(sum(mul(x, x)));
  EXPECT_EQ(x.grad()[0], 2.0);
  EXPECT_EQ(x.grad()[1], 4.0);
  EXPECT_EQ(x.grad()[2], 6.0);
}

TEST(Backward, RejectsNonScalarLoss) {
  Tensor x = random_leaf({2}, 1);
  EXPECT_THROW(backward(x), std::invalid_argument);
}

TEST(Backward, TapeIsReleased) {
  Tensor x = random_leaf({2}, 1);
  const Tensor loss = sum(mul(x, x));
  backward(loss);
  EXPECT_TRUE(loss.is_leaf());
}

TEST(Backward, NoGradGuardStopsRecording) {
  Tensor x = random_leaf({2}, 1);
  NoGradGuard guard;
  EXPECT_FALSE(sum(x).requires_grad());
}

TEST(Rng, SameSeedSameStream) {
  Rng a(42), b(42), c(43);
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next_u64();
    EXPECT_EQ(x, b.next_u64());
    EXPECT_NE(x, c.next_u64());
  }
}

TEST(Rng, KnownFirstDraw) {
  // splitmix64 of 0 is a published constant.
  EXPECT_EQ(splitmix64(0), 0xE220A8397B1DCDAFULL);
}

TEST(Rng, UniformAndIndexRanges) {
  Rng rng(7);
  for (int i = 0; i < 1000; ++i) {
    const double u = rng.uniform();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
    EXPECT_LT(rng.index(7), 7u);
  }
  EXPECT_THROW(rng.index(0), std::invalid_argument);
}

TEST(Rng, ShuffleIsAPermutationAndDeterministic) {
  std::vector<int> a(20), b(20);
  std::iota(a.begin(), a.end(), 0);
  b = a;
  Rng(5).shuffle(std::span<int>(a));
  Rng(5).shuffle(std::span<int>(b));
  EXPECT_EQ(a, b);
  std::vector<int> sorted = a;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < 20; ++i) EXPECT_EQ(sorted[i], i);
}

TEST(Rng, ForksAreIndependentOfParentPosition) {
  Rng a(9);
  Rng b(9);
  b.next_u64();
  EXPECT_EQ(a.fork(3).next_u64(), b.fork(3).next_u64());
  EXPECT_NE(a.fork(3).next_u64(), a.fork(4).next_u64());
}

TEST(Adam, FirstStepMovesByAlpha) {
  Tensor p = Tensor::scalar(0.5, true);
  Adam adam({p}, OptimizerConfig{});
  p.mutable_grad()[0] = 1.0;
  adam.step(1);
  EXPECT_NEAR(p.item(), 0.5 - 0.001, 1e-6);
}

TEST(Adam, ZeroGradLeavesParameters) {
  Tensor p = random_leaf({3}, 1);
  const std::vector<double> before(p.data().begin(), p.data().end());
  Adam adam({p}, OptimizerConfig{});
  for (std::uint64_t s = 1; s <= 5; ++s) {
    adam.zero_grad();
    adam.step(s);
  }
  EXPECT_EQ(std::vector<double>(p.data().begin(), p.data().end()), before);
}

TEST(Adam, SignSymmetry) {
  Tensor p = Tensor::scalar(0.0, true), q = Tensor::scalar(0.0, true);
  Adam adam({p, q}, OptimizerConfig{});
  for (std::uint64_t s = 1; s <= 3; ++s) {
    p.mutable_grad()[0] = 0.3 * static_cast<double>(s);
    q.mutable_grad()[0] = -0.3 * static_cast<double>(s);
    adam.step(s);
  }
  EXPECT_EQ(p.item(), -q.item());
  EXPECT_LT(p.item(), 0.0);
}

TEST(Adam, ZeroAlphaIsNoOp) {
  Tensor p = random_leaf({4}, 2);
  const std::vector<double> before(p.data().begin(), p.data().end());
  OptimizerConfig cfg;
  cfg.alpha = 0.0;
  Adam adam({p}, cfg);
  for (auto& g : p.mutable_grad()) g = 3.0;
  adam.step(1);
  EXPECT_EQ(std::vector<double>(p.data().begin(), p.data().end()), before);
}

TEST(Adam, MomentsPersistAcrossSteps) {
  // With constant gradient the bias-corrected update stays alpha * g / |g|.
  Tensor p = Tensor::scalar(0.0, true);
  Adam adam({p}, OptimizerConfig{});
  for (std::uint64_t s = 1; s <= 10; ++s) {
    p.mutable_grad()[0] = 2.0;
    adam.step(s);
  }
  EXPECT_NEAR(p.item(), -0.01, 1e-8);
}

TEST(Adam, Errors) {
  EXPECT_THROW(Adam({Tensor::scalar(1.0)}, OptimizerConfig{}), std::invalid_argument);
  OptimizerConfig bad;
  bad.beta1 = 1.0;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad = OptimizerConfig{};
  bad.epsilon = 0.0;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  Tensor p = Tensor::scalar(0.0, true);
  Adam adam({p}, OptimizerConfig{});
  EXPECT_THROW(adam.step(0), std::invalid_argument);
}

}  // namespace
}  // namespace aac
