#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ovad {

enum class PosTag { Noun, PropNoun, Adj, Det, Num, Adp, Verb, Other };

std::string_view to_string(PosTag t);
/// Accepts the tag names NOUN, PROPN, ADJ, DET, NUM, ADP, VERB; anything else
/// maps to Other.
PosTag parse_pos_tag(std::string_view s);

struct TaggedToken {
  std::string text;  // lowercase
  PosTag tag = PosTag::Other;

  friend bool operator==(const TaggedToken&, const TaggedToken&) = default;
};

using TaggedCaption = std::vector<TaggedToken>;

/// Parses one line of `text_TAG` tokens separated by whitespace. The last
/// '_' in a token separates text from tag; text is lowercased.
TaggedCaption parse_tagged_caption(std::string_view line);

struct CaptionParts {
  std::vector<std::string> nouns;
  std::vector<std::vector<std::string>> noun_phrases;
  std::vector<std::vector<std::string>> noun_complements;
};

/// Chunk grammar DET? (ADJ|NUM)* NOUN+ over maximal contiguous runs. A chunk
/// becomes a noun phrase (without its determiner) when it has a modifier or
/// at least two nouns; its complement is the phrase minus nouns, if any left.
CaptionParts extract_parts(std::span<const TaggedToken> caption);

/// Case-folded occurrence counts of ADJ tokens.
std::map<std::string, std::size_t> count_adjectives(std::span<const TaggedCaption> corpus);

struct SynonymGroup {
  std::string key;
  std::vector<std::string> members;  // alphabetical
  std::size_t total = 0;
};

/// Keeps adjectives seen at least `min_count` times that are not blocked,
/// merges them by lexicon group (unlisted adjectives form their own group)
/// and orders groups by total count, descending, then by key.
std::vector<SynonymGroup> select_attribute_vocabulary(
    const std::map<std::string, std::size_t>& adjective_counts,
    const std::map<std::string, std::string>& synonym_lexicon,
    const std::set<std::string>& blocklist, std::size_t min_count = 10);

std::string join_words(std::span<const std::string> words);

}  // namespace ovad
