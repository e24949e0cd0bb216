// Copyright 2026 The canex Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include "canex/error.hpp"
#include "canex/nlu/crf.hpp"
#include "canex/nlu/model.hpp"
#include "canex/numerics/grad_check.hpp"
#include "canex/numerics/ops.hpp"
#include "test_util.hpp"

namespace canex::nlu {
namespace {

ModelConfig sized(bool ce) {
  ModelConfig c = canex::testing::tiny_model_config(ce);
  c.vocab_size = 30;
  c.char_vocab_size = 12;
  c.intent_count = 3;
  c.tag_count = 4;
  return c;
}

std::vector<std::vector<int>> fake_chars(int vocab, int chars) {
  std::vector<std::vector<int>> out;
  for (int v = 0; v < vocab; ++v) out.push_back({v % chars, (v * 7 + 1) % chars, (v * 3 + 2) % chars});
  return out;
}

TEST(Params, InitShapesAndMasking) {
  const ModelConfig c = sized(true);
  numerics::Rng rng(1);
  const ModelParams p = init_params(c, rng);
  EXPECT_EQ(p.word_embeddings.rows(), 30);
  EXPECT_EQ(p.word_embeddings.cols(), 8);
  EXPECT_EQ(p.lstm[0][0].w_input.rows(), 32);
  EXPECT_EQ(p.lstm[0][0].w_input.cols(), c.input_dim());
  EXPECT_EQ(p.lstm[1][1].w_input.cols(), 16);
  EXPECT_EQ(p.transitions.rows(), 6);
  EXPECT_TRUE(params_well_formed(p, c.tag_count));
  // Forget-gate bias block starts at one.
  EXPECT_EQ(p.lstm[0][0].bias(8, 0), 1.0);
  EXPECT_EQ(p.lstm[0][0].bias(0, 0), 0.0);
}

TEST(Params, HashIsStableAndSensitive) {
  const ModelConfig c = sized(false);
  numerics::Rng r1(3), r2(3);
  ModelParams a = init_params(c, r1);
  const ModelParams b = init_params(c, r2);
  EXPECT_EQ(params_hash(a), params_hash(b));
  EXPECT_TRUE(a == b);
  a.intent_bias(0, 0) = std::nextafter(a.intent_bias(0, 0), 1.0);
  EXPECT_NE(params_hash(a), params_hash(b));
}

class ModelGradient : public ::testing::TestWithParam<bool> {};

TEST_P(ModelGradient, LossGradientMatchesFiniteDifferences) {
  const ModelConfig c = sized(GetParam());
  numerics::Rng rng(5);
  ModelParams p = init_params(c, rng);
  // Larger weights than init so every gate is exercised away from zero.
  for (auto& [name, t] : p.named()) {
    if (name != "transitions") *t *= 2.0;
  }
  p.transitions.topLeftCorner(c.tag_count + 1, c.tag_count).setRandom();
  const auto chars = fake_chars(c.vocab_size, c.char_vocab_size);
  const std::vector<int> tokens{3, 17, 17, 29, 0};
  const std::vector<int> tags{0, 1, 2, 2, 3};
  const auto report = numerics::gradient_check(
      [&](numerics::Tape& tape, std::span<const numerics::Var> leaves) {
        const BoundParams b = bind_flat(tape, leaves, c);
        std::vector<InputSlot> slots;
        for (int t : tokens) slots.push_back(InputSlot::discrete(t));
        const auto x = embed_tokens(b, c, slots, chars, nullptr, {});
        return model_loss(b, c, x, 2, tags, {}).loss;
      },
      // The loss is O(10) here, so h = 1e-5 would leave ~1e-10 of roundoff
      // against gradients as small as 1e-7.
      flatten_params(p, c), numerics::GradCheckOptions{.step = 1e-4});
  EXPECT_TRUE(report.passed) << "max rel err " << report.max_relative_error << " at tensor " << report.worst_tensor << " analytic " << report.worst_analytic << " numeric " << report.worst_numeric;
}

INSTANTIATE_TEST_SUITE_P(WithAndWithoutChars, ModelGradient, ::testing::Bool());

TEST(Model, BindFlatReproducesBoundLoss) {
  const ModelConfig c = sized(true);
  numerics::Rng rng(6);
  const ModelParams p = init_params(c, rng);
  const auto chars = fake_chars(c.vocab_size, c.char_vocab_size);
  const std::vector<int> tokens{1, 2, 3};
  const std::vector<int> tags{0, 1, 1};
  numerics::Tape tape;
  std::vector<numerics::Var> leaves;
  const auto flat = flatten_params(p, c);
  for (const auto& t : flat) leaves.push_back(tape.constant_ref(t));
  const auto b = bind_flat(tape, leaves, c);
  std::vector<InputSlot> slots{InputSlot::discrete(1), InputSlot::discrete(2), InputSlot::discrete(3)};
  const double via_flat = model_loss(b, c, embed_tokens(b, c, slots, chars, nullptr, {}), 1, tags, {}).loss.scalar();
  EXPECT_EQ(via_flat, discrete_loss(p, c, tokens, chars, 1, tags));
}

TEST(Model, RelaxedOneHotEqualsDiscrete) {
  const ModelConfig c = sized(false);
  numerics::Rng rng(7);
  const ModelParams p = init_params(c, rng);
  const std::vector<int> tokens{4, 9, 11};
  const std::vector<int> tags{0, 3, 3};
  numerics::Tape tape;
  const auto b = bind_params(tape, p, c, false);
  const numerics::Tensor col = p.word_embeddings.row(11).transpose();
  const RelaxedInputs r{tape.constant(col), {}};
  const std::vector<InputSlot> slots{InputSlot::discrete(4), InputSlot::discrete(9), InputSlot::soft(0)};
  const double relaxed = model_loss(b, c, embed_tokens(b, c, slots, {}, &r, {}), 0, tags, {}).loss.scalar();
  EXPECT_NEAR(relaxed, discrete_loss(p, c, tokens, {}, 0, tags), 1e-12);
}

TEST(Model, DropoutOnlyWhenGeneratorSupplied) {
  const ModelConfig c = sized(false);
  numerics::Rng rng(8);
  const ModelParams p = init_params(c, rng);
  const std::vector<int> tags{0, 1};
  auto run = [&](numerics::Rng* r) {
    numerics::Tape tape;
    const auto b = bind_params(tape, p, c, false);
    const std::vector<InputSlot> slots{InputSlot::discrete(1), InputSlot::discrete(2)};
    return model_loss(b, c, embed_tokens(b, c, slots, {}, nullptr, {r}), 0, tags, {r}).loss.scalar();
  };
  EXPECT_EQ(run(nullptr), run(nullptr));
  numerics::Rng d1(1);
  EXPECT_NE(run(&d1), run(nullptr));
}

TEST(Model, CharCnnIsMaxOverZeroPaddedWindows) {
  ModelConfig c = sized(true);
  c.char_emb_dim = 1;
  c.char_filter_count = 1;
  c.char_conv_width = 3;
  numerics::Rng rng(1);
  ModelParams p = init_params(c, rng);
  p.char_embeddings = numerics::Tensor::Zero(c.char_vocab_size, 1);
  p.char_embeddings(1, 0) = 1.0;
  p.char_embeddings(2, 0) = -2.0;
  p.char_kernel.resize(1, 3);
  p.char_kernel << 1.0, 10.0, 100.0;  // weights for left, centre, right
  p.char_bias = numerics::Tensor::Constant(1, 1, 0.5);
  numerics::Tape tape;
  const auto b = bind_params(tape, p, c, false);
  const std::vector<int> ids{1, 2};
  // positions: [0, 1, 2] padded -> windows (0,1,-2) and (1,-2,0)
  const double w0 = 0.0 * 1 + 1.0 * 10 + -2.0 * 100 + 0.5;
  const double w1 = 1.0 * 1 + -2.0 * 10 + 0.0 * 100 + 0.5;
  EXPECT_DOUBLE_EQ(char_cnn_embed(b, c, ids).scalar(), std::max(w0, w1));
}

TEST(Model, IntentHeadReadsLastForwardAndFirstBackward) {
  const ModelConfig c = sized(false);
  numerics::Rng rng(9);
  ModelParams p = init_params(c, rng);
  p.intent_weight.setZero();
  p.intent_weight(0, 0) = 1.0;                 // forward unit 0
  p.intent_weight(1, c.hidden_dim) = 1.0;      // backward unit 0
  numerics::Tape tape;
  const auto b = bind_params(tape, p, c, false);
  const std::vector<InputSlot> slots{InputSlot::discrete(1), InputSlot::discrete(2), InputSlot::discrete(3)};
  const auto x = embed_tokens(b, c, slots, {}, nullptr, {});
  const auto states = bilstm_forward(b, c, x, {});
  const auto [logits, emissions] = model_heads(b, c, x, {});
  EXPECT_NEAR(logits.value()(0, 0), states.value()(0, 2), 1e-15);
  EXPECT_NEAR(logits.value()(1, 0), states.value()(c.hidden_dim, 0), 1e-15);
  EXPECT_EQ(emissions.cols(), 3);
}

TEST(Model, RejectsOutOfRangeInputs) {
  const ModelConfig c = sized(false);
  numerics::Rng rng(10);
  const ModelParams p = init_params(c, rng);
  const std::vector<int> tags{0};
  EXPECT_THROW(discrete_loss(p, c, std::vector<int>{30}, {}, 0, tags), ContractViolation);
  EXPECT_THROW(discrete_loss(p, c, std::vector<int>{1}, {}, 3, tags), ContractViolation);
  EXPECT_THROW(discrete_loss(p, c, std::vector<int>{1, 2}, {}, 0, tags), ContractViolation);
}

}  // namespace
}  // namespace canex::nlu
