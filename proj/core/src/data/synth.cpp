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

#include "canex/data/synth.hpp"

#include <cmath>
#include <sstream>

#include "canex/data/canary.hpp"
#include "canex/error.hpp"
#include "canex/numerics/rng.hpp"

namespace canex::data {
namespace {

std::vector<std::string> split_words(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

template <typename T>
const T& pick(const std::vector<T>& items, numerics::Rng& rng) {
  return items[rng.uniform_index(items.size())];
}

void fill_template(const std::string& tmpl, const std::map<std::string, SlotFiller>& slots,
                   numerics::Rng& rng, LabeledExample& out) {
  for (const std::string& word : split_words(tmpl)) {
    if (word.size() > 2 && word.front() == '{' && word.back() == '}') {
      const std::string name = word.substr(1, word.size() - 2);
      const auto it = slots.find(name);
      if (it == slots.end()) throw InvalidArgument("template references unknown slot '" + name + "'");
      const auto value = split_words(pick(it->second.values, rng));
      for (std::size_t i = 0; i < value.size(); ++i) {
        out.tokens.push_back(value[i]);
        if (it->second.entity.empty()) {
          out.ner_tags.push_back("O");
        } else {
          out.ner_tags.push_back((i == 0 ? "B-" : "I-") + it->second.entity);
        }
      }
    } else {
      out.tokens.push_back(word);
      out.ner_tags.push_back("O");
    }
  }
}

}  // namespace

SynthConfig SynthConfig::defaults() {
  SynthConfig c;
  c.slots["artist"] = {"artist",
                       {"taylor swift", "the beatles", "adele", "drake", "miles davis", "daft punk",
                        "bob marley", "queen", "coldplay", "nina simone", "elton john",
                        "frank ocean", "lady gaga", "john legend", "norah jones", "bruno mars",
                        "radiohead", "shakira"}};
  c.slots["song"] = {"song",
                     {"hey jude", "bohemian rhapsody", "hello", "let it be", "wonderwall",
                      "thriller", "imagine", "clocks", "halo", "royals", "rolling in the deep",
                      "dancing queen", "hotel california", "smooth criminal", "creep", "viva la vida"}};
  c.slots["city"] = {"city",
                     {"paris", "london", "berlin", "tokyo", "chicago", "boston", "seattle", "madrid",
                      "rome", "dublin", "austin", "denver", "new york", "san francisco",
                      "los angeles", "cape town", "lisbon", "oslo"}};
  c.slots["date"] = {"date",
                     {"today", "tomorrow", "tonight", "this weekend", "next week", "on monday",
                      "on friday", "on sunday", "this evening", "next month", "on tuesday",
                      "on saturday"}};
  c.slots["time"] = {"time",
                     {"noon", "midnight", "dawn", "sunrise", "early morning", "late evening",
                      "lunch time", "bed time", "the afternoon", "half past noon"}};
  c.slots["playlist"] = {"playlist",
                         {"chill vibes", "workout", "road trip", "focus", "party mix", "sleep",
                          "study beats", "summer hits", "throwback", "dinner jazz"}};
  c.slots["genre"] = {"",
                      {"jazz", "rock", "pop", "classical", "hip hop", "blues", "country", "soul",
                       "metal", "reggae"}};
  c.slots["cuisine"] = {"",
                        {"italian", "thai", "mexican", "indian", "japanese", "french", "greek",
                         "korean", "vegan"}};

  std::vector<std::string> digit_times;
  for (const auto& d : digit_words()) {
    digit_times.push_back(d + " am");
    digit_times.push_back(d + " pm");
  }
  c.slots["digit_time"] = {"time", digit_times};
  c.slots["digit"] = {"", digit_words()};
  c.slots["color"] = {"", color_names()};

  c.intents = {
      {"PlayMusic",
       {"play {song} by {artist}", "play some {genre}", "i want to hear {artist}", "put on {song}",
        "can you play {song}", "play {genre} music by {artist}", "start playing {artist} please",
        "let me listen to {song}"},
       {"play the {color} album by {artist}"}},
      {"GetWeather",
       {"what is the weather in {city} {date}", "will it rain in {city} {date}",
        "weather forecast for {city}", "is it going to be cold in {city} {date}",
        "how hot will it be in {city}", "tell me the forecast {date}",
        "do i need an umbrella in {city} {date}"},
       {"will the leaves turn {color} in {city} {date}"}},
      {"BookRestaurant",
       {"book a table at a {cuisine} restaurant in {city}", "reserve a table for {date} in {city}",
        "find me a {cuisine} place {date}", "i need a reservation at {time} {date}",
        "book dinner in {city} at {time}", "get us a table at a {cuisine} spot {date}"},
       {"book a table for {digit} people {date}"}},
      {"SetAlarm",
       {"set an alarm for {time}", "wake me up at {time} {date}", "remind me at {time}",
        "set an alarm {date} at {time}", "i need an alarm for {time}", "please wake me at {time}"},
       {"set an alarm for {digit_time}", "wake me up at {digit_time} {date}"}},
      {"AddToPlaylist",
       {"add {song} to my {playlist} playlist", "put {artist} on {playlist}",
        "add this track to {playlist}", "save {song} to the {playlist} list",
        "include {artist} in my {playlist} playlist", "add {song} by {artist} to {playlist}"},
       {"add {song} to my {color} mix"}},
  };
  return c;
}

std::vector<LabeledExample> synth_corpus(const SynthConfig& config) {
  if (config.size < 1) throw InvalidArgument("synth_corpus: size must be >= 1");
  if (config.intents.empty()) throw InvalidArgument("synth_corpus: no intents configured");
  numerics::Rng rng(config.seed);
  std::vector<LabeledExample> out;
  out.reserve(config.size);
  for (std::size_t i = 0; i < config.size; ++i) {
    const IntentTemplates& intent = pick(config.intents, rng);
    const bool rare = !intent.rare_templates.empty() && rng.bernoulli(config.rare_rate);
    const std::string& tmpl = rare ? pick(intent.rare_templates, rng) : pick(intent.templates, rng);
    LabeledExample ex;
    ex.intent = intent.intent;
    fill_template(tmpl, config.slots, rng, ex);
    validate_example(ex);
    out.push_back(std::move(ex));
  }
  return out;
}

Corpus split_train_val(std::vector<LabeledExample> examples, double val_fraction, std::uint64_t seed) {
  if (val_fraction < 0.0 || val_fraction >= 1.0) {
    throw InvalidArgument("split_train_val: val_fraction must be in [0, 1)");
  }
  numerics::Rng rng(seed);
  for (std::size_t i = examples.size(); i > 1; --i) {
    std::swap(examples[i - 1], examples[rng.uniform_index(i)]);
  }
  const auto n_val =
      static_cast<std::size_t>(std::llround(val_fraction * static_cast<double>(examples.size())));
  Corpus c;
  c.val.assign(examples.begin(), examples.begin() + static_cast<std::ptrdiff_t>(n_val));
  c.train.assign(examples.begin() + static_cast<std::ptrdiff_t>(n_val), examples.end());
  return c;
}

}  // namespace canex::data
