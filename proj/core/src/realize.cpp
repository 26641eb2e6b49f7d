#include "foilgen/realize.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace foilgen {

namespace {

const std::unordered_map<std::string_view, std::string_view>& irregular_plurals() {
  static const std::unordered_map<std::string_view, std::string_view> table{
      {"person", "people"},  {"man", "men"},       {"woman", "women"},
      {"child", "children"}, {"foot", "feet"},     {"tooth", "teeth"},
      {"mouse", "mice"},     {"goose", "geese"},   {"ox", "oxen"},
      {"leaf", "leaves"},    {"knife", "knives"},  {"shelf", "shelves"},
      {"wolf", "wolves"},    {"loaf", "loaves"},   {"calf", "calves"},
      {"half", "halves"},    {"scarf", "scarves"}, {"life", "lives"},
      {"wife", "wives"},     {"thief", "thieves"}, {"potato", "potatoes"},
      {"tomato", "tomatoes"}, {"hero", "heroes"},  {"cactus", "cacti"},
      {"policeman", "policemen"}, {"fireman", "firemen"}, {"die", "dice"},
  };
  return table;
}

// Same form in singular and plural.
const std::unordered_set<std::string_view>& invariant_nouns() {
  static const std::unordered_set<std::string_view> words{
      "sheep", "deer",  "fish",  "moose",  "series",    "species", "aircraft",
      "grass", "water", "hair",  "luggage", "furniture", "broccoli", "bison",
      "salmon", "shrimp", "snow", "sand",  "dirt",      "foliage", "equipment",
  };
  return words;
}

// Plural-only or already-plural words.
const std::unordered_set<std::string_view>& plural_only_nouns() {
  static const std::unordered_set<std::string_view> words{
      "jeans",  "pants",    "shorts",    "glasses",  "sunglasses", "scissors",
      "clothes", "trousers", "goggles",  "headphones", "binoculars", "tongs",
      "pajamas", "leggings", "skis",     "stairs",   "bleachers",  "people",
  };
  return words;
}

// Singular nouns that end in "s".
const std::unordered_set<std::string_view>& singular_s_nouns() {
  static const std::unordered_set<std::string_view> words{
      "bus", "gas", "lens", "canvas", "atlas", "chaos", "bias", "tennis", "cactus",
  };
  return words;
}

bool is_vowel(char c) {
  c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u';
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

std::pair<std::string_view, std::string_view> split_last_word(std::string_view noun) {
  auto space = noun.rfind(' ');
  if (space == std::string_view::npos) return {{}, noun};
  return {noun.substr(0, space + 1), noun.substr(space + 1)};
}

std::string pluralize_word(std::string_view word) {
  if (word.empty()) return {};
  if (auto it = irregular_plurals().find(word); it != irregular_plurals().end()) {
    return std::string(it->second);
  }
  if (invariant_nouns().contains(word) || plural_only_nouns().contains(word)) {
    return std::string(word);
  }
  for (const auto& [singular, plural] : irregular_plurals()) {
    if (plural == word) return std::string(word);
  }
  if (is_plural_noun(word)) return std::string(word);
  std::string out(word);
  if (ends_with(word, "s") || ends_with(word, "x") || ends_with(word, "z") ||
      ends_with(word, "ch") || ends_with(word, "sh")) {
    out += "es";
  } else if (word.size() >= 2 && word.back() == 'y' && !is_vowel(word[word.size() - 2])) {
    out.pop_back();
    out += "ies";
  } else {
    out += "s";
  }
  return out;
}

const std::string& require(const Bindings& b, const char* key, CaptionType type) {
  auto it = b.find(key);
  if (it == b.end()) {
    throw std::logic_error(std::string("missing binding '") + key + "' for " +
                           std::string(to_string(type)));
  }
  return it->second;
}

std::string_view be(std::string_view noun) { return is_plural_noun(noun) ? "are" : "is"; }

// "a white door", "an old bowl", "white jars".
std::string noun_phrase(std::string_view modifier, std::string_view noun) {
  std::string phrase;
  if (!modifier.empty()) {
    phrase.append(modifier);
    phrase.push_back(' ');
  }
  phrase.append(noun);
  if (is_plural_noun(noun)) return phrase;
  return std::string(indefinite_article(phrase)) + " " + phrase;
}

std::string sentence(std::string text) {
  if (!text.empty()) {
    text[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(text[0])));
  }
  text.push_back('.');
  return text;
}

}  // namespace

bool is_plural_noun(std::string_view noun) {
  auto word = split_last_word(noun).second;
  if (plural_only_nouns().contains(word)) return true;
  for (const auto& [singular, plural] : irregular_plurals()) {
    if (plural == word) return true;
  }
  if (invariant_nouns().contains(word) || singular_s_nouns().contains(word)) return false;
  if (irregular_plurals().contains(word)) return false;
  if (ends_with(word, "ss") || ends_with(word, "us") || ends_with(word, "is")) return false;
  return ends_with(word, "s");
}

std::string pluralize(std::string_view noun) {
  auto [prefix, last] = split_last_word(noun);
  return std::string(prefix) + pluralize_word(last);
}

std::string_view indefinite_article(std::string_view next_word) {
  return !next_word.empty() && is_vowel(next_word.front()) ? "an" : "a";
}

std::string number_word(int n) {
  static constexpr std::array<std::string_view, 21> kWords{
      "zero",    "one",     "two",      "three",    "four",     "five",    "six",
      "seven",   "eight",   "nine",     "ten",      "eleven",   "twelve",  "thirteen",
      "fourteen", "fifteen", "sixteen", "seventeen", "eighteen", "nineteen", "twenty"};
  if (n >= 0 && n < static_cast<int>(kWords.size())) return std::string(kWords[n]);
  return std::to_string(n);
}

std::string realize(CaptionType type, const Bindings& b) {
  auto get = [&](const char* key) -> const std::string& { return require(b, key, type); };
  std::string s;
  switch (type) {
    case CaptionType::Attribute:  // obj, attr
      s = "the " + get("obj") + " " + std::string(be(get("obj"))) + " " + get("attr");
      break;
    case CaptionType::AttributeRelation:  // attr, subj, pred, obj
      s = "the " + get("attr") + " " + get("subj") + " " + std::string(be(get("subj"))) + " " +
          get("pred") + " the " + get("obj");
      break;
    case CaptionType::Relation:  // subj, pred, obj
      s = "the " + get("subj") + " " + std::string(be(get("subj"))) + " " + get("pred") +
          " the " + get("obj");
      break;
    case CaptionType::RelationAttribute: {  // subj, pred, obj, optional subj_attr / obj_attr
      auto sa = b.find("subj_attr");
      auto oa = b.find("obj_attr");
      s = "the ";
      if (sa != b.end()) s += sa->second + " ";
      s += get("subj") + " " + std::string(be(get("subj"))) + " " + get("pred") + " the ";
      if (oa != b.end()) s += oa->second + " ";
      s += get("obj");
      break;
    }
    case CaptionType::ObjectCount: {  // n, obj
      const int n = std::stoi(get("n"));
      if (n == 1) {
        s = "there is one " + get("obj");
      } else {
        s = "there are " + number_word(n) + " " + pluralize(get("obj"));
      }
      break;
    }
    case CaptionType::ObjectCompareCount: {  // quant, obj1, obj2
      const auto& quant = get("quant");
      if (quant == kQuantAsMany) {
        s = "there are as many " + pluralize(get("obj1")) + " as " + pluralize(get("obj2"));
      } else {
        s = "there are " + quant + " " + pluralize(get("obj1")) + " than " + pluralize(get("obj2"));
      }
      break;
    }
    case CaptionType::VerifyObjectAttribute:  // polarity, obj, attr
      s = "there is " + get("polarity") + " " + get("obj") + " that is " + get("attr");
      break;
    case CaptionType::VerifyObjectRelation:  // polarity, subj, pred, obj
      s = "there is " + get("polarity") + " " + get("subj") + " that is " + get("pred") +
          " the " + get("obj");
      break;
    case CaptionType::AndLogicAttribute:  // attr1, obj1, attr2, obj2
      s = "there are both " + noun_phrase(get("attr1"), get("obj1")) + " and " +
          noun_phrase(get("attr2"), get("obj2"));
      break;
    case CaptionType::AndLogicRelation:  // subj1, pred1, obj1, subj2, pred2, obj2
      s = "there are both " + noun_phrase({}, get("subj1")) + " " + get("pred1") + " the " +
          get("obj1") + " and " + noun_phrase({}, get("subj2")) + " " + get("pred2") + " the " +
          get("obj2");
      break;
    case CaptionType::XorLogicAttribute:  // attr1, obj1, attr2, obj2
      s = "there " + std::string(be(get("obj1"))) + " either " +
          noun_phrase(get("attr1"), get("obj1")) + " or " + noun_phrase(get("attr2"), get("obj2"));
      break;
    case CaptionType::XorLogicRelation:  // subj, pred, obj1, obj2
      s = "the " + get("subj") + " " + std::string(be(get("subj"))) + " " + get("pred") +
          " either the " + get("obj1") + " or the " + get("obj2");
      break;
  }
  return sentence(std::move(s));
}

}  // namespace foilgen
