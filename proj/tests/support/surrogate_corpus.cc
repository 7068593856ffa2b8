// Copyright 2026 The copyaug Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "support/surrogate_corpus.h"

#include <string_view>

#include "copyaug/randgen.h"
#include "json.hpp"

namespace copyaug::testing {
namespace {

constexpr std::string_view kFoodTemplates[] = {
    "i am looking for a {f} restaurant",
    "i want {f} food please",
    "can you find me a place that serves {f} food in the {a}",
    "how about {f}",
    "is there a {f} restaurant in the {a} part of town ?",
    "i would like some {f} food",
    "what about {f} food then",
    "{f} please",
    "do you have anything serving {f} ?",
    "i need a {r} {f} place",
    "i'm looking for a {r} restaurant serving {f} food",
    "let's try {f} instead",
    "i want a {r} {f} restaurant in the {a}",
    "what about the {f} ones ?",
    "something {f} in the {a} please",
};

constexpr std::string_view kIdleTemplates[] = {
    "what is the phone number ?",
    "the {a} part of town please",
    "thank you goodbye",
    "can i have the address please ?",
    "i do not care about the price",
    "moderately priced please",
    "yes that sounds good",
    "what is the postcode ?",
    "{a} please",
    "{r} please",
    "how about the {a} ?",
    "what about {r} ones ?",
    "i want something {r}",
    "let's try the {a} instead",
    "i'm looking for a {r} restaurant in the {a}",
};

constexpr std::string_view kSystemTemplates[] = {
    "what kind of food would you like ?",
    "there are no {p} restaurants in the {a} . would you like something else ?",
    "{n} is a nice {p} place in the {a} of town .",
    "what part of town do you have in mind ?",
    "the phone number of {n} is 01223 {d} .",
    "is there anything else i can help you with ?",
    "{n} serves {p} food . would you like their address ?",
};

constexpr std::string_view kAreas[] = {"north", "south", "east", "west", "centre"};
constexpr std::string_view kPrices[] = {"cheap", "expensive", "moderate", "moderately priced"};
constexpr std::string_view kNames[] = {"the golden house", "la margherita", "nandos",
                                       "the river bar", "pizza hut", "curry garden",
                                       "yippee noodle bar", "saigon city", "the copper kettle"};

struct Slots {
  std::string food;
  std::string prev;
  std::string_view area;
  std::string_view price;
  std::string_view name;
  int digits = 0;
};

std::string Fill(std::string_view tmpl, const Slots& v) {
  std::string out;
  for (std::size_t i = 0; i < tmpl.size(); ++i) {
    if (tmpl[i] == '{' && i + 2 < tmpl.size() && tmpl[i + 2] == '}') {
      switch (tmpl[i + 1]) {
        case 'f': out += v.food; break;
        case 'p': out += v.prev; break;
        case 'a': out += v.area; break;
        case 'r': out += v.price; break;
        case 'n': out += v.name; break;
        case 'd': out += std::to_string(v.digits); break;
      }
      i += 2;
    } else {
      out += tmpl[i];
    }
  }
  return out;
}

template <typename T, std::size_t N>
const T& Pick(const T (&arr)[N], Rng& rng) {
  return arr[rng.UniformIndex(N)];
}

}  // namespace

const std::vector<std::string>& SurrogateFoods() {
  static const std::vector<std::string> foods = {
      "thai", "chinese", "italian", "indian", "french", "british", "european",
      "modern european", "spanish", "korean", "japanese", "vietnamese", "turkish",
      "lebanese", "mexican", "greek", "portuguese", "african", "north american",
      "asian oriental", "mediterranean", "international", "gastropub", "seafood",
      "steakhouse", "vegetarian", "halal", "kosher", "persian", "moroccan",
      "polish", "russian", "swedish", "danish", "belgian", "swiss", "german",
      "austrian", "hungarian", "irish", "scottish", "welsh", "australian",
      "brazilian", "cuban", "caribbean", "jamaican", "indonesian", "malaysian",
      "singaporean", "afghan", "basque", "catalan", "tuscan", "venetian",
      "fusion", "barbeque", "creative", "traditional", "eritrean", "polynesian",
      "canapes", "corsica", "crossover", "english", "australasian", "christmas",
      "world", "unusual", "bistro", "scandinavian", "light bites", "cantonese"};
  return foods;
}

std::string MakeSurrogateWozJson(const SurrogateSpec& spec) {
  const std::vector<std::string>& foods = spec.foods.empty() ? SurrogateFoods() : spec.foods;
  Rng rng(spec.seed);
  nlohmann::ordered_json doc = nlohmann::ordered_json::array();
  for (int d = 0; d < spec.dialogues; ++d) {
    nlohmann::ordered_json turns = nlohmann::ordered_json::array();
    const int n_turns = 3 + static_cast<int>(rng.UniformIndex(3));
    std::string prev = foods[rng.UniformIndex(foods.size())];
    for (int t = 0; t < n_turns; ++t) {
      Slots v;
      v.prev = prev;
      v.area = Pick(kAreas, rng);
      v.price = Pick(kPrices, rng);
      v.name = Pick(kNames, rng);
      v.digits = 100000 + static_cast<int>(rng.UniformIndex(900000));
      std::string sys = t == 0 ? "" : Fill(Pick(kSystemTemplates, rng), v);
      v.area = Pick(kAreas, rng);
      std::string usr;
      nlohmann::ordered_json label = nlohmann::ordered_json::array();
      const double u = rng.UniformReal();
      if (u < 0.55) {
        v.food = foods[rng.UniformIndex(foods.size())];
        usr = Fill(Pick(kFoodTemplates, rng), v);
        label.push_back({"food", v.food});
        prev = v.food;
      } else if (u < 0.60) {
        usr = "i do not care what kind of food";
        label.push_back({"food", "dontcare"});
      } else {
        usr = Fill(Pick(kIdleTemplates, rng), v);
      }
      turns.push_back({{"system_transcript", sys},
                       {"turn_idx", t},
                       {"transcript", usr},
                       {"turn_label", label}});
    }
    doc.push_back({{"dialogue_idx", d}, {"dialogue", turns}});
  }
  return doc.dump();
}

}  // namespace copyaug::testing
