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

#include "canex/training/trainer.hpp"

#include <cmath>
#include <numeric>

#include <nlohmann/json.hpp>

#include "canex/data/canary.hpp"
#include "canex/error.hpp"
#include "canex/nlu/model.hpp"
#include "canex/numerics/adam.hpp"
#include "canex/numerics/ops.hpp"
#include "canex/numerics/rng.hpp"
#include "canex/training/early_stopping.hpp"

namespace canex::training {

using numerics::Tensor;

void TrainConfig::validate() const {
  if (max_epochs < 1) throw InvalidArgument("train config: max_epochs must be >= 1");
  if (!(learning_rate > 0.0)) throw InvalidArgument("train config: learning_rate must be > 0");
  if (patience < 1) throw InvalidArgument("train config: patience must be >= 1");
  if (batch_size < 1) throw InvalidArgument("train config: batch_size must be >= 1");
}

void to_json(nlohmann::json& j, const TrainConfig& c) {
  j = nlohmann::json{{"max_epochs", c.max_epochs},
                     {"learning_rate", c.learning_rate},
                     {"early_stopping_enabled", c.early_stopping_enabled},
                     {"patience", c.patience},
                     {"dropout_enabled", c.dropout_enabled},
                     {"batch_size", c.batch_size},
                     {"train_embeddings", c.train_embeddings},
                     {"shuffle_seed", c.shuffle_seed}};
}

void from_json(const nlohmann::json& j, TrainConfig& c) {
  TrainConfig d;
  c.max_epochs = j.value("max_epochs", d.max_epochs);
  c.learning_rate = j.value("learning_rate", d.learning_rate);
  c.early_stopping_enabled = j.value("early_stopping_enabled", d.early_stopping_enabled);
  c.patience = j.value("patience", d.patience);
  c.dropout_enabled = j.value("dropout_enabled", d.dropout_enabled);
  c.batch_size = j.value("batch_size", d.batch_size);
  c.train_embeddings = j.value("train_embeddings", d.train_embeddings);
  c.shuffle_seed = j.value("shuffle_seed", d.shuffle_seed);
}

void to_json(nlohmann::json& j, const TrainReport& r) {
  nlohmann::json epochs = nlohmann::json::array();
  for (const auto& e : r.epochs) {
    epochs.push_back({{"epoch", e.epoch}, {"train_loss", e.train_loss}, {"val_loss", e.val_loss}});
  }
  j = nlohmann::json{{"epochs", epochs},
                     {"stopped_epoch", r.stopped_epoch},
                     {"best_epoch", r.best_epoch},
                     {"val_intent_accuracy", r.val_quality.intent_accuracy},
                     {"val_tag_accuracy", r.val_quality.tag_accuracy},
                     {"val_examples", r.val_quality.examples},
                     {"embeddings_random_init", r.embeddings_random_init}};
}

bool TrainReport::operator==(const TrainReport& other) const {
  if (epochs.size() != other.epochs.size()) return false;
  for (std::size_t i = 0; i < epochs.size(); ++i) {
    if (epochs[i].epoch != other.epochs[i].epoch || epochs[i].train_loss != other.epochs[i].train_loss ||
        epochs[i].val_loss != other.epochs[i].val_loss) {
      return false;
    }
  }
  return stopped_epoch == other.stopped_epoch && best_epoch == other.best_epoch &&
         val_quality.intent_accuracy == other.val_quality.intent_accuracy &&
         val_quality.tag_accuracy == other.val_quality.tag_accuracy &&
         val_quality.examples == other.val_quality.examples &&
         embeddings_random_init == other.embeddings_random_init;
}

void TrainedModel::rebuild_token_chars() {
  token_chars.clear();
  token_chars.reserve(vocab.size());
  for (const auto& tok : vocab.tokens()) token_chars.push_back(data::char_ids(chars, tok));
}

EncodedExample TrainedModel::encode(const data::LabeledExample& example) const {
  EncodedExample e;
  e.tokens = vocab.lookup_all(example.tokens);
  e.intent = intents.index(example.intent);
  e.tags.reserve(example.ner_tags.size());
  for (const auto& t : example.ner_tags) e.tags.push_back(tags.index(t));
  return e;
}

std::vector<std::string> default_extra_tokens() {
  std::vector<std::string> out = data::digit_words();
  const auto& colors = data::color_names();
  out.insert(out.end(), colors.begin(), colors.end());
  return out;
}

double mean_loss(const TrainedModel& model, std::span<const EncodedExample> examples) {
  if (examples.empty()) return 0.0;
  double total = 0.0;
  for (const auto& e : examples) {
    total += nlu::discrete_loss(model.params, model.config, e.tokens, model.token_chars, e.intent, e.tags);
  }
  return total / static_cast<double>(examples.size());
}

ModelQuality evaluate_model(const TrainedModel& model, std::span<const data::LabeledExample> examples) {
  ModelQuality q;
  q.examples = examples.size();
  if (examples.empty()) return q;
  std::size_t intent_hits = 0;
  std::size_t tag_hits = 0;
  std::size_t tag_total = 0;
  for (const auto& ex : examples) {
    const EncodedExample e = model.encode(ex);
    const nlu::Prediction p = nlu::predict(model.params, model.config, e.tokens, model.token_chars);
    intent_hits += p.intent == e.intent ? 1 : 0;
    for (std::size_t i = 0; i < e.tags.size(); ++i) tag_hits += p.tags[i] == e.tags[i] ? 1 : 0;
    tag_total += e.tags.size();
  }
  q.intent_accuracy = static_cast<double>(intent_hits) / static_cast<double>(examples.size());
  q.tag_accuracy = static_cast<double>(tag_hits) / static_cast<double>(tag_total);
  return q;
}

TrainResult train(const data::Corpus& corpus, const nlu::ModelConfig& model_template,
                  const TrainConfig& config, std::uint64_t seed, const TrainExtras& extras) {
  config.validate();
  if (corpus.train.empty()) throw InvalidArgument("train: training split is empty");
  if (config.early_stopping_enabled && corpus.val.empty()) {
    throw InvalidArgument("train: early stopping needs a validation split");
  }

  TrainResult result;
  TrainedModel& model = result.model;
  TrainReport& report = result.report;

  model.vocab = data::build_vocabulary(corpus.train, corpus.val, extras.extra_tokens);
  model.chars = data::build_char_vocabulary(model.vocab.tokens());
  model.intents = data::collect_intents(corpus.train, corpus.val);
  model.tags = data::collect_tags(corpus.train, corpus.val);
  model.rebuild_token_chars();

  model.config = model_template;
  model.config.vocab_size = static_cast<int>(model.vocab.size());
  model.config.char_vocab_size = static_cast<int>(model.chars.size());
  model.config.intent_count = static_cast<int>(model.intents.size());
  model.config.tag_count = static_cast<int>(model.tags.size());
  model.config.validate();

  const numerics::Rng root(seed);
  numerics::Rng init_rng = root.split("init");
  numerics::Rng dropout_rng = root.split("dropout");
  numerics::Rng shuffle_rng = numerics::Rng(config.shuffle_seed).split("shuffle");

  model.params = nlu::init_params(model.config, init_rng);
  if (extras.pretrained != nullptr) {
    report.embeddings_random_init =
        nlu::apply_pretrained(model.params.word_embeddings, model.vocab.tokens(), *extras.pretrained).missing;
  }

  std::vector<EncodedExample> train_set;
  std::vector<EncodedExample> val_set;
  for (const auto& ex : corpus.train) train_set.push_back(model.encode(ex));
  for (const auto& ex : corpus.val) val_set.push_back(model.encode(ex));

  // Tensors in registry order (ModelParams::named() minus empty ones).
  std::vector<Tensor*> all_params;
  std::vector<bool> optimized;
  for (auto& [name, t] : model.params.named()) {
    if (t->size() == 0) continue;
    all_params.push_back(t);
    optimized.push_back(config.train_embeddings || name != "word_embeddings");
  }
  std::vector<Tensor*> opt_params;
  std::vector<const Tensor*> opt_shapes;
  for (std::size_t k = 0; k < all_params.size(); ++k) {
    if (!optimized[k]) continue;
    opt_params.push_back(all_params[k]);
    opt_shapes.push_back(all_params[k]);
  }
  numerics::AdamState adam(opt_shapes, {.learning_rate = config.learning_rate});
  std::vector<Tensor> grad_sum;
  for (const Tensor* t : opt_shapes) grad_sum.push_back(Tensor::Zero(t->rows(), t->cols()));
  std::vector<const Tensor*> grad_ptrs;
  for (const Tensor& g : grad_sum) grad_ptrs.push_back(&g);

  EarlyStopping stopper(config.patience);
  nlu::ModelParams best_params = model.params;
  int last_finite_epoch = 0;

  std::vector<std::size_t> order(train_set.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const nlu::DropoutSettings dropout{config.dropout_enabled ? &dropout_rng : nullptr};

  for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
    for (std::size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[shuffle_rng.uniform_index(i)]);
    }
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(config.batch_size)) {
      const std::size_t stop = std::min(order.size(), start + static_cast<std::size_t>(config.batch_size));
      for (Tensor& g : grad_sum) g.setZero();
      for (std::size_t b = start; b < stop; ++b) {
        const EncodedExample& e = train_set[order[b]];
        numerics::Tape tape;
        const nlu::BoundParams bound = nlu::bind_params(tape, model.params, model.config, true);
        std::vector<nlu::InputSlot> slots;
        for (int t : e.tokens) slots.push_back(nlu::InputSlot::discrete(t));
        const auto x = nlu::embed_tokens(bound, model.config, slots, model.token_chars, nullptr, dropout);
        const auto out = nlu::model_loss(bound, model.config, x, e.intent, e.tags, dropout);
        const double loss = out.loss.scalar();
        if (!std::isfinite(loss)) {
          throw DivergenceError("train: non-finite loss in epoch " + std::to_string(epoch) +
                                "; last finite epoch " + std::to_string(last_finite_epoch));
        }
        epoch_loss += loss;
        tape.backward(out.loss);
        const auto& registry = tape.registry();
        if (registry.size() != all_params.size()) throw ContractViolation("train: registry/parameter mismatch");
        std::size_t slot = 0;
        for (std::size_t k = 0; k < registry.size(); ++k) {
          if (optimized[k]) grad_sum[slot++] += registry[k].grad();
        }
      }
      const double inv = 1.0 / static_cast<double>(stop - start);
      for (Tensor& g : grad_sum) g *= inv;
      adam.apply(opt_params, grad_ptrs);
    }

    EpochRecord rec;
    rec.epoch = epoch;
    rec.train_loss = epoch_loss / static_cast<double>(train_set.size());
    rec.val_loss = val_set.empty() ? rec.train_loss : mean_loss(model, val_set);
    if (!std::isfinite(rec.train_loss) || !std::isfinite(rec.val_loss)) {
      throw DivergenceError("train: non-finite loss in epoch " + std::to_string(epoch) +
                            "; last finite epoch " + std::to_string(last_finite_epoch));
    }
    last_finite_epoch = epoch;
    report.epochs.push_back(rec);
    report.stopped_epoch = epoch;
    if (extras.on_epoch) extras.on_epoch(rec);

    if (config.early_stopping_enabled) {
      const bool stop = stopper.observe(epoch, rec.val_loss);
      if (stopper.last_improved()) best_params = model.params;
      if (stop) break;
    }
  }

  if (config.early_stopping_enabled) {
    model.params = std::move(best_params);
    report.best_epoch = stopper.best_epoch();
  } else {
    report.best_epoch = report.stopped_epoch;
  }
  report.val_quality = evaluate_model(model, corpus.val.empty() ? corpus.train : corpus.val);
  return result;
}

}  // namespace canex::training
