#include "ovad/caption_parts.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <stdexcept>

namespace ovad {

std::string_view to_string(PosTag t) {
  switch (t) {
    case PosTag::Noun: return "NOUN";
    case PosTag::PropNoun: return "PROPN";
    case PosTag::Adj: return "ADJ";
    case PosTag::Det: return "DET";
    case PosTag::Num: return "NUM";
    case PosTag::Adp: return "ADP";
    case PosTag::Verb: return "VERB";
    case PosTag::Other: return "OTHER";
  }
  return "OTHER";
}

PosTag parse_pos_tag(std::string_view s) {
  if (s == "NOUN") return PosTag::Noun;
  if (s == "PROPN") return PosTag::PropNoun;
  if (s == "ADJ") return PosTag::Adj;
  if (s == "DET") return PosTag::Det;
  if (s == "NUM") return PosTag::Num;
  if (s == "ADP") return PosTag::Adp;
  if (s == "VERB") return PosTag::Verb;
  return PosTag::Other;
}

namespace {

std::string lowercase(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

bool is_noun(PosTag t) { return t == PosTag::Noun || t == PosTag::PropNoun; }
bool is_modifier(PosTag t) { return t == PosTag::Adj || t == PosTag::Num; }

}  // namespace

TaggedCaption parse_tagged_caption(std::string_view line) {
  TaggedCaption out;
  std::istringstream in{std::string(line)};
  std::string token;
  while (in >> token) {
    const auto sep = token.rfind('_');
    if (sep == std::string::npos || sep == 0) {
      throw std::invalid_argument("token '" + token + "' is not of the form text_TAG");
    }
    out.push_back({lowercase(std::string_view(token).substr(0, sep)),
                   parse_pos_tag(std::string_view(token).substr(sep + 1))});
  }
  return out;
}

CaptionParts extract_parts(std::span<const TaggedToken> caption) {
  CaptionParts parts;
  for (const auto& t : caption) {
    if (is_noun(t.tag)) parts.nouns.push_back(t.text);
  }

  std::size_t i = 0;
  while (i < caption.size()) {
    std::size_t j = i;
    if (caption[j].tag == PosTag::Det) ++j;
    const std::size_t body = j;
    while (j < caption.size() && is_modifier(caption[j].tag)) ++j;
    const std::size_t modifiers = j - body;
    const std::size_t noun_start = j;
    while (j < caption.size() && is_noun(caption[j].tag)) ++j;
    const std::size_t nouns = j - noun_start;

    if (nouns == 0) {
      ++i;
      continue;
    }
    if (modifiers > 0 || nouns >= 2) {
      std::vector<std::string> phrase;
      std::vector<std::string> complement;
      for (std::size_t k = body; k < j; ++k) {
        phrase.push_back(caption[k].text);
        if (!is_noun(caption[k].tag)) complement.push_back(caption[k].text);
      }
      parts.noun_phrases.push_back(std::move(phrase));
      if (!complement.empty()) parts.noun_complements.push_back(std::move(complement));
    }
    i = j;
  }
  return parts;
}

std::map<std::string, std::size_t> count_adjectives(std::span<const TaggedCaption> corpus) {
  std::map<std::string, std::size_t> counts;
  for (const auto& caption : corpus) {
    for (const auto& t : caption) {
      if (t.tag == PosTag::Adj) ++counts[lowercase(t.text)];
    }
  }
  return counts;
}

std::vector<SynonymGroup> select_attribute_vocabulary(
    const std::map<std::string, std::size_t>& adjective_counts,
    const std::map<std::string, std::string>& synonym_lexicon,
    const std::set<std::string>& blocklist, std::size_t min_count) {
  std::map<std::string, SynonymGroup> groups;
  for (const auto& [word, count] : adjective_counts) {
    if (count < min_count || blocklist.count(word)) continue;
    auto lex = synonym_lexicon.find(word);
    const std::string key = lex == synonym_lexicon.end() ? word : lex->second;
    auto& g = groups[key];
    g.key = key;
    g.members.push_back(word);  // map iteration keeps members alphabetical
    g.total += count;
  }
  std::vector<SynonymGroup> out;
  for (auto& [_, g] : groups) out.push_back(std::move(g));
  std::stable_sort(out.begin(), out.end(), [](const SynonymGroup& l, const SynonymGroup& r) {
    return l.total > r.total;
  });
  return out;
}

std::string join_words(std::span<const std::string> words) {
  std::string out;
  for (const auto& w : words) {
    if (!out.empty()) out += ' ';
    out += w;
  }
  return out;
}

}  // namespace ovad
