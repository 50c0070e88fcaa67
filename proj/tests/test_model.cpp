// Copyright 2026 The MDRD Authors. All Rights Reserved.
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

#include <algorithm>
#include <cmath>
#include <cstring>

#include "mdrd/error.hpp"
#include "mdrd/io/binary.hpp"
#include "mdrd/io/file.hpp"
#include "mdrd/model/adam.hpp"
#include "mdrd/model/audit.hpp"
#include "mdrd/model/checkpoint.hpp"
#include "mdrd/model/model.hpp"
#include "mdrd/model/trainer.hpp"
#include "testing.hpp"

namespace mdrd::model {
namespace {

using num::GradMode;
using testing::random_tensor;

std::vector<data::EmbeddedPost> random_posts(const MdrdConfig& c, std::size_t count, std::uint64_t seed,
                                             std::size_t max_len = 5) {
  SeededRng rng(seed);
  std::vector<data::EmbeddedPost> posts;
  for (std::size_t i = 0; i < count; ++i) {
    data::EmbeddedPost p;
    p.id = "p" + std::to_string(i);
    p.tokens = random_tensor({1 + rng.below(max_len), c.embedding_dim}, rng);
    p.domain = rng.below(c.num_domains());
    for (std::size_t j = 0; j < c.metadata_dim; ++j) p.metadata.push_back(rng.normal());
    p.label = static_cast<int>(rng.below(2));
    posts.push_back(std::move(p));
  }
  return posts;
}

data::Batch batch_of(const std::vector<data::EmbeddedPost>& posts, const MdrdConfig& c) {
  return data::collate(std::span<const data::EmbeddedPost>(posts), c.max_seq_len);
}

TEST(Forward, ShapeAndRowSums) {
  const MdrdConfig c = tiny_config(1);
  MdrdModel model(c);
  const Tensor p = model.predict_proba(batch_of(random_posts(c, 2, 2), c));
  ASSERT_EQ(p.shape(), (num::Shape{2, 2}));
  for (std::size_t r = 0; r < 2; ++r) EXPECT_NEAR(p.at(r, 0) + p.at(r, 1), 1.0, 1e-15);
}

TEST(Forward, RowsAreStochasticForAnyInput) {
  const MdrdConfig c = tiny_config(3);
  MdrdModel model(c);
  SeededRng rng(4);
  for (int trial = 0; trial < 30; ++trial) {
    auto posts = random_posts(c, 5, 100 + trial);
    for (auto& post : posts) for (double& v : post.tokens.data()) v *= trial % 3 == 0 ? 100.0 : 1.0;
    const Tensor p = model.predict_proba(batch_of(posts, c));
    for (std::size_t r = 0; r < p.rows(); ++r) {
      EXPECT_GE(p.at(r, 0), 0.0);
      EXPECT_NEAR(p.at(r, 0) + p.at(r, 1), 1.0, 1e-9);
    }
  }
}

TEST(Forward, PermutingTheBatchPermutesOutputs) {
  const MdrdConfig c = tiny_config(5);
  MdrdModel model(c);
  auto posts = random_posts(c, 6, 6);
  const Tensor p = model.predict_proba(batch_of(posts, c));
  std::vector<std::size_t> order{3, 0, 5, 1, 4, 2};
  std::vector<data::EmbeddedPost> shuffled;
  for (std::size_t i : order) shuffled.push_back(posts[i]);
  const Tensor q = model.predict_proba(batch_of(shuffled, c));
  for (std::size_t k = 0; k < order.size(); ++k) {
    EXPECT_EQ(q.at(k, 0), p.at(order[k], 0));
    EXPECT_EQ(q.at(k, 1), p.at(order[k], 1));
  }
}

TEST(Forward, PaddingPartnersDoNotLeak) {
  const MdrdConfig c = tiny_config(7);
  MdrdModel model(c);
  auto posts = random_posts(c, 2, 8);
  posts[0].tokens = random_tensor({2, c.embedding_dim}, *std::make_unique<SeededRng>(9));
  const std::vector<data::EmbeddedPost> alone{posts[0]};
  posts[1].tokens = random_tensor({7, c.embedding_dim}, *std::make_unique<SeededRng>(10));
  const Tensor single = model.predict_proba(batch_of(alone, c));
  const Tensor paired = model.predict_proba(batch_of(posts, c));
  EXPECT_EQ(single.at(0, 1), paired.at(0, 1));
}

// bilstm -> conv -> [pooled | m] -> mlp -> softmax with no gate in between.
Tensor single_expert_pipeline(MdrdModel& model, const data::Batch& batch) {
  Graph g(GradMode::kDisabled);
  const layers::Sequence seq = layers::make_sequence(g, batch.steps, batch.mask);
  auto& expert = model.experts().front();
  const auto hidden = layers::bilstm_forward(seq, *expert.lstm);
  const Var parts[] = {layers::conv_max_pool(hidden, seq.mask, expert.conv), g.constant(batch.metadata)};
  const Var logits = layers::mlp_forward(num::concat_cols(parts), model.classifier(), nullptr, Mode::kEval);
  return num::softmax_rows(logits).value();
}

TEST(Forward, SingleExpertEqualsDirectPipeline) {
  const MdrdConfig c = make_variant(tiny_config(11), "single_expert");
  MdrdModel model(c);
  for (int trial = 0; trial < 20; ++trial) {
    const data::Batch batch = batch_of(random_posts(c, 3, 200 + trial), c);
    EXPECT_EQ(model.predict_proba(batch), single_expert_pipeline(model, batch));
  }
}

TEST(Forward, UniformGateEqualsForcedUniformWeights) {
  const MdrdConfig full = tiny_config(12);
  MdrdModel learned(full);
  MdrdModel uniform(make_variant(full, "uniform_gate"));
  EXPECT_FALSE(uniform.gate().has_value());
  const data::Batch batch = batch_of(random_posts(full, 4, 13), full);
  ForwardOptions forced;
  forced.forced_gate = Tensor({full.num_experts}, 1.0 / static_cast<double>(full.num_experts));
  EXPECT_EQ(uniform.predict_proba(batch), learned.predict_proba(batch, forced));
}

TEST(Forward, RejectsWrongWidthAndUnknownDomain) {
  const MdrdConfig c = tiny_config(14);
  MdrdModel model(c);
  MdrdConfig wide = c;
  wide.embedding_dim = 9;
  EXPECT_THROW(model.predict_proba(batch_of(random_posts(wide, 2, 1), wide)), DimensionError);
  auto posts = random_posts(c, 2, 1);
  posts[1].domain = 7;
  EXPECT_THROW(model.predict_proba(batch_of(posts, c)), Error);
}

TEST(Variants, FullIsUnchangedAndUnknownTagsListTheValidOnes) {
  const MdrdConfig c = tiny_config(1);
  EXPECT_EQ(to_json(make_variant(c, "full")), to_json(c));
  try {
    make_variant(c, "no_gate");
    FAIL();
  } catch (const ConfigError& e) {
    for (const auto& tag : variant_tags()) EXPECT_NE(std::string(e.what()).find(tag), std::string::npos);
  }
}

TEST(Variants, NoMetadataNarrowsTheExpertOutput) {
  const MdrdConfig c = make_variant(tiny_config(1), "no_metadata");
  MdrdModel model(c);
  EXPECT_EQ(model.expert_output_dim(), c.conv_filters * c.conv_widths.size());
  const data::Batch batch = batch_of(random_posts(c, 2, 3), c);
  Graph g(GradMode::kDisabled);
  EXPECT_EQ(model.forward(g, batch, Mode::kEval, nullptr).fused.value().cols(), 4u);
}

TEST(Variants, SingleExpertGateIsOne) {
  const MdrdConfig c = make_variant(tiny_config(1), "single_expert");
  MdrdModel model(c);
  Graph g(GradMode::kDisabled);
  const auto out = model.forward(g, batch_of(random_posts(c, 4, 5), c), Mode::kEval, nullptr);
  for (double v : out.gate.value().data()) EXPECT_EQ(v, 1.0);
}

TEST(Variants, AblationSetCoversTheTable) {
  const auto& tags = ablation_variants();
  EXPECT_EQ(tags.size(), 8u);
  for (const char* t : {"full", "no_lstm", "no_metadata", "emb_last1", "emb_mean2", "emb_mean3", "uniform_gate",
                        "single_expert"}) {
    EXPECT_NE(std::find(tags.begin(), tags.end(), t), tags.end()) << t;
  }
  const MdrdConfig c = tiny_config(1);
  EXPECT_EQ(make_variant(c, "emb_last1").embedding_layers, 1u);
  EXPECT_EQ(make_variant(c, "emb_mean3").embedding_layers, 3u);
  EXPECT_FALSE(make_variant(c, "no_lstm").use_lstm);
}

TEST(Config, JsonRoundTripAndValidation) {
  const MdrdConfig c = tiny_config(3);
  EXPECT_EQ(to_json(config_from_json(nlohmann::json::parse(to_json(c).dump()))), to_json(c));
  MdrdConfig bad = c;
  bad.mlp_dropout = 1.0;
  EXPECT_THROW(bad.validate(), ConfigError);
  bad = c;
  bad.conv_widths = {};
  EXPECT_THROW(bad.validate(), ConfigError);
  MdrdConfig set = c;
  set_config_value(set, "learning_rate", 0.01);
  EXPECT_EQ(set.learning_rate, 0.01);
  EXPECT_THROW(set_config_value(set, "no_such_key", 1), ConfigError);
}

TEST(Loss, HalfProbabilityIsLogTwo) {
  const std::vector<double> p{0.5};
  const std::vector<int> y{1};
  EXPECT_NEAR(bce_loss(p, y), std::log(2.0), 1e-12);
  Graph g;
  EXPECT_NEAR(bce_loss(g.constant(Tensor::matrix({{0.5, 0.5}})), y).value()[0], 0.6931472, 1e-7);
}

TEST(Loss, ClippedPerfectPredictions) {
  const std::vector<double> p{1.0, 0.0};
  const std::vector<int> y{1, 0};
  EXPECT_LE(bce_loss(p, y), 1.2e-7);
  EXPECT_TRUE(std::isfinite(bce_loss(std::vector<double>{0.0}, std::vector<int>{1})));
}

TEST(Loss, AgainstExtendedPrecisionLog) {
  const std::vector<int> y{1};
  EXPECT_NEAR(bce_loss(std::vector<double>{0.9}, y), static_cast<double>(-std::log(0.9L)), 1e-15);
  EXPECT_NEAR(bce_loss(std::vector<double>{0.9}, y), 0.1053605, 1e-7);
}

TEST(Loss, RejectsBadLabelsAndShapes) {
  EXPECT_THROW(bce_loss(std::vector<double>{0.3}, std::vector<int>{2}), Error);
  EXPECT_THROW(bce_loss(std::vector<double>{0.3, 0.1}, std::vector<int>{1}), DimensionError);
}

TEST(Adam, ZeroGradientWithoutDecayIsIdentity) {
  Parameter p("p", Tensor::vector({0.3, -2.0}));
  std::vector<Parameter*> params{&p};
  AdamState adam(params);
  for (int i = 0; i < 3; ++i) adam.step(params, 5e-4, 0.0);
  EXPECT_EQ(p.value, Tensor::vector({0.3, -2.0}));
}

TEST(Adam, FirstStepFormula) {
  Parameter p("p", Tensor::vector({1.0}));
  std::vector<Parameter*> params{&p};
  AdamState adam(params);
  p.grad[0] = 5.0;
  adam.step(params, 5e-4, 0.0);
  // m_hat = g and v_hat = g^2 after bias correction.
  const long double expected = 1.0L - 5e-4L * 5.0L / (5.0L + 1e-8L);
  EXPECT_NEAR(p.value[0], static_cast<double>(expected), 1e-15);
  EXPECT_NEAR(p.value[0], 0.9995, 1e-6);
  EXPECT_EQ(p.grad[0], 0.0);
  EXPECT_EQ(adam.step_count(), 1u);
}

TEST(Adam, FirstStepMagnitudeIsAboutTheLearningRate) {
  SeededRng rng(3);
  for (int trial = 0; trial < 1000; ++trial) {
    const double magnitude = std::pow(10.0, rng.uniform(-4.0, 6.0));
    const double g = rng.uniform() < 0.5 ? -magnitude : magnitude;
    const double lr = std::pow(10.0, rng.uniform(-5.0, -1.0));
    Parameter p("p", Tensor::vector({0.0}));  // from zero the step is read off exactly
    std::vector<Parameter*> params{&p};
    AdamState adam(params);
    p.grad[0] = g;
    adam.step(params, lr, 0.0);
    const double delta = std::abs(p.value[0]);
    EXPECT_LE(delta, lr * (1 + 1e-12));
    EXPECT_GE(delta, 0.999 * lr) << "g=" << g;
  }
}

TEST(Adam, TinyGradientsStepLessThanTheLearningRate) {
  // |delta| = lr * |g| / (|g| + eps): the epsilon dominates once |g| is near 1e-8.
  Parameter p("p", Tensor::vector({0.0}));
  std::vector<Parameter*> params{&p};
  AdamState adam(params);
  p.grad[0] = 1e-8;
  adam.step(params, 1e-3, 0.0);
  EXPECT_NEAR(std::abs(p.value[0]), 1e-3 * 0.5, 1e-12);
}

TEST(Adam, DescendsOnAQuadratic) {
  Parameter x("x", Tensor::matrix({{1.0}}));
  std::vector<Parameter*> params{&x};
  AdamState adam(params);
  double last = 1.0;
  for (int i = 0; i < 2; ++i) {
    Graph g;
    const Var v = g.parameter(x);
    g.backward(num::mul(v, v));
    adam.step(params, 0.1, 0.0);
    EXPECT_LT(std::abs(x.value[0]), last);
    last = std::abs(x.value[0]);
  }
}

TEST(Adam, CoupledWeightDecayShrinks) {
  Parameter p("p", Tensor::vector({2.0}));
  std::vector<Parameter*> params{&p};
  AdamState adam(params);
  adam.step(params, 0.01, 0.5);
  EXPECT_LT(p.value[0], 2.0);
}

TEST(Adam, RejectsNaNGradientsBeforeUpdating) {
  Parameter a("a", Tensor::vector({1.0})), b("layer.w", Tensor::vector({1.0}));
  std::vector<Parameter*> params{&a, &b};
  AdamState adam(params);
  a.grad[0] = 1.0;
  b.grad[0] = NAN;
  try {
    adam.step(params, 0.1, 0.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("layer.w"), std::string::npos);
  }
  EXPECT_EQ(a.value[0], 1.0);
}

TEST(Checkpoint, RoundTripIsBitwise) {
  const MdrdConfig c = tiny_config(21);
  MdrdModel model(c);
  nlohmann::ordered_json extras;
  extras["selected_epoch"] = 3;
  const std::string bytes = checkpoint_bytes(model, extras, StoredPrecision::kFloat64);
  LoadedCheckpoint loaded = checkpoint_from_bytes(bytes);
  EXPECT_EQ(loaded.extras["selected_epoch"], 3);
  const data::Batch batch = batch_of(random_posts(c, 4, 22), c);
  EXPECT_EQ(loaded.model.predict_proba(batch), model.predict_proba(batch));
  EXPECT_EQ(checkpoint_bytes(loaded.model, extras, StoredPrecision::kFloat64), bytes);
}

TEST(Checkpoint, FileRoundTrip) {
  const auto dir = testing::temp_dir("ckpt");
  MdrdModel model(tiny_config(23));
  checkpoint_save(model, dir / "m.bin");
  EXPECT_FALSE(std::filesystem::exists(dir / "m.bin.tmp"));
  EXPECT_EQ(to_json(checkpoint_load(dir / "m.bin").model.config()), to_json(model.config()));
  EXPECT_THROW(checkpoint_load(dir / "missing.bin"), Error);
}

// Offset of the first dimension of the first record.
std::size_t first_dim_offset(const std::string& bytes) {
  io::ByteReader r(bytes, "test");
  r.skip(std::strlen(kCheckpointMagic));
  r.u32();
  r.skip(r.u32());
  r.u32();
  r.skip(r.u16());
  r.u8();
  r.u8();
  return r.position();
}

std::string with_fixed_crc(std::string bytes) {
  const std::uint32_t crc = io::crc32_of(std::string_view(bytes).substr(0, bytes.size() - 4));
  io::ByteWriter w;
  w.u32(crc);
  bytes.replace(bytes.size() - 4, 4, w.bytes());
  return bytes;
}

TEST(Checkpoint, TamperedDimensionFailsWithoutPartialModel) {
  MdrdModel model(tiny_config(24));
  std::string bytes = checkpoint_bytes(model, {}, StoredPrecision::kFloat64);
  const std::size_t at = first_dim_offset(bytes);
  bytes[at] = static_cast<char>(bytes[at] + 1);
  EXPECT_THROW(checkpoint_from_bytes(bytes), FormatError) << "checksum must catch the edit";
  EXPECT_THROW(checkpoint_from_bytes(with_fixed_crc(bytes)), Error);
}

TEST(Checkpoint, RejectsForeignAndTruncatedFiles) {
  MdrdModel model(tiny_config(25));
  const std::string bytes = checkpoint_bytes(model, {}, StoredPrecision::kFloat64);
  EXPECT_THROW(checkpoint_from_bytes("not a checkpoint at all"), FormatError);
  EXPECT_THROW(checkpoint_from_bytes(bytes.substr(0, bytes.size() / 2)), FormatError);
}

TEST(Checkpoint, Float32ValuesWidenExactly) {
  MdrdModel model(tiny_config(26));
  LoadedCheckpoint loaded = checkpoint_from_bytes(checkpoint_bytes(model, {}, StoredPrecision::kFloat32));
  const auto original = model.parameters();
  const auto widened = loaded.model.parameters();
  ASSERT_EQ(original.size(), widened.size());
  for (std::size_t i = 0; i < original.size(); ++i) {
    for (std::size_t k = 0; k < original[i]->value.size(); ++k) {
      EXPECT_EQ(widened[i]->value[k], static_cast<double>(static_cast<float>(original[i]->value[k])));
    }
  }
}

TEST(Model, ParameterNamesAreUniqueAndInitIsSeeded) {
  MdrdModel a(tiny_config(30)), b(tiny_config(30)), c(tiny_config(31));
  std::vector<std::string> names;
  for (const Parameter* p : a.parameters()) names.push_back(p->name);
  std::sort(names.begin(), names.end());
  EXPECT_EQ(std::adjacent_find(names.begin(), names.end()), names.end());
  EXPECT_EQ(checkpoint_bytes(a, {}, StoredPrecision::kFloat64), checkpoint_bytes(b, {}, StoredPrecision::kFloat64));
  EXPECT_NE(checkpoint_bytes(a, {}, StoredPrecision::kFloat64), checkpoint_bytes(c, {}, StoredPrecision::kFloat64));
}

// Central differences with a mixed tolerance: relative 1e-4, plus an
// absolute floor for gradients small enough that the rounding of the loss
// itself dominates the difference quotient.
TEST(Model, TinyModelGradientsMatchCentralDifferences) {
  const MdrdConfig c = tiny_config(7);
  MdrdModel model(c);
  const data::Batch batch = tiny_batch(c, 8);
  const auto params = model.parameters();
  SeededRng jitter(num::derive_seed(7, 77));
  for (Parameter* p : params) for (double& v : p->value.data()) v += jitter.uniform(-0.1, 0.1);
  const auto loss = [&]() {
    Graph g(GradMode::kDisabled);
    return bce_loss(model.forward(g, batch, Mode::kEval, nullptr).probs, batch.labels).value()[0];
  };
  {
    Graph g;
    g.backward(bce_loss(model.forward(g, batch, Mode::kEval, nullptr).probs, batch.labels));
  }
  const double eps = 1e-5;
  std::size_t checked = 0;
  for (Parameter* p : params) {
    for (std::size_t k = 0; k < p->value.size(); ++k) {
      const double saved = p->value[k];
      p->value[k] = saved + eps;
      const double up = loss();
      p->value[k] = saved - eps;
      const double down = loss();
      p->value[k] = saved;
      const double numeric = (up - down) / (2 * eps);
      const double analytic = p->grad[k];
      ASSERT_LE(std::abs(analytic - numeric), 1e-4 * std::max(std::abs(analytic), std::abs(numeric)) + 1e-10)
          << p->name << "[" << k << "] analytic " << analytic << " numeric " << numeric;
      ++checked;
    }
  }
  EXPECT_EQ(checked, model.parameter_count());
}

TEST(Model, AuditRunsOnTheTinyModel) {
  const auto r = gradcheck_tiny_model(7);
  EXPECT_EQ(r.checked, MdrdModel(tiny_config(7)).parameter_count());
  EXPECT_LT(r.max_rel_error, 1e-2);
}

// Label = sign of the first coordinate summed over tokens.
std::vector<data::EmbeddedPost> separable_posts(const MdrdConfig& c, std::size_t count, std::uint64_t seed) {
  auto posts = random_posts(c, count, seed);
  for (auto& p : posts) {
    double s = 0;
    for (std::size_t t = 0; t < p.tokens.rows(); ++t) s += p.tokens.at(t, 0);
    p.label = s > 0 ? 1 : 0;
    for (std::size_t t = 0; t < p.tokens.rows(); ++t) p.tokens.at(t, 0) += p.label ? 0.5 : -0.5;
  }
  return posts;
}

MdrdConfig trainer_config() {
  MdrdConfig c = tiny_config(41);
  c.batch_size = 8;
  c.learning_rate = 5e-3;
  c.max_epochs = 50;
  return c;
}

TEST(Trainer, FitsASeparableSet) {
  const MdrdConfig c = trainer_config();
  const auto train_set = separable_posts(c, 48, 42), val_set = separable_posts(c, 16, 43);
  const TrainResult result = train(train_set, val_set, c);
  ASSERT_EQ(result.history.epochs.size(), 50u);
  EXPECT_LT(result.history.epochs.back().train_loss, 0.1);
}

TEST(Trainer, SameSeedSameHistory) {
  MdrdConfig c = trainer_config();
  c.max_epochs = 3;
  c.mlp_dropout = 0.3;
  const auto train_set = separable_posts(c, 20, 44), val_set = separable_posts(c, 8, 45);
  const TrainResult a = train(train_set, val_set, c), b = train(train_set, val_set, c);
  EXPECT_EQ(to_json(a.history), to_json(b.history));
  EXPECT_EQ(checkpoint_bytes(a.model, {}, StoredPrecision::kFloat64),
            checkpoint_bytes(b.model, {}, StoredPrecision::kFloat64));
}

TEST(Trainer, ZeroLearningRateKeepsParameters) {
  MdrdConfig c = trainer_config();
  c.max_epochs = 2;
  c.learning_rate = 0.0;
  const auto train_set = separable_posts(c, 12, 46), val_set = separable_posts(c, 4, 47);
  MdrdModel initial(c);
  for (double wd : {0.0, 0.1}) {
    c.weight_decay = wd;
    const TrainResult r = train(train_set, val_set, c);
    EXPECT_EQ(checkpoint_bytes(r.model, {}, StoredPrecision::kFloat64),
              checkpoint_bytes(MdrdModel(c), {}, StoredPrecision::kFloat64));
  }
}

TEST(Trainer, KeepsTheBestValidationEpoch) {
  MdrdConfig c = trainer_config();
  c.max_epochs = 6;
  const auto train_set = separable_posts(c, 24, 48), val_set = separable_posts(c, 12, 49);
  const TrainResult r = train(train_set, val_set, c);
  double best = -1;
  std::size_t best_epoch = 0;
  for (const auto& e : r.history.epochs) {
    if (e.val_f1 > best) {
      best = e.val_f1;
      best_epoch = e.epoch;
    }
  }
  EXPECT_EQ(r.history.selected_epoch, best_epoch);
  MdrdModel model = r.model;
  EXPECT_NEAR(evaluate_model(model, val_set).metrics.macro_f1, best, 1e-12);
}

TEST(Trainer, RejectsEmptySplitsAndUnknownDomains) {
  const MdrdConfig c = trainer_config();
  const auto posts = separable_posts(c, 8, 50);
  EXPECT_THROW(train({}, posts, c), Error);
  EXPECT_THROW(train(posts, {}, c), Error);
  auto bad = posts;
  bad[0].domain = 9;
  EXPECT_THROW(train(bad, posts, c), Error);
}

}  // namespace
}  // namespace mdrd::model
