#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace sir {

// Lowercased, whitespace-free, punctuation-free key. The only punctuation
// kept is a '.' with a digit on both sides.
std::string normalize_key(std::string_view text);

// Unicode-aware lowercasing of UTF-8 text (ASCII, Latin-1, Latin Extended-A,
// Greek and Cyrillic ranges); other code points pass through.
std::string to_lower_utf8(std::string_view text);

struct Token {
  std::string text;  // lowercased
  std::size_t begin = 0;  // byte offsets into the utterance
  std::size_t end = 0;
  bool is_number = false;
  bool quoted = false;  // came from a "double-quoted" literal

  friend bool operator==(const Token&, const Token&) = default;
};

// Splits an utterance into lowercase word tokens. Punctuation separates
// tokens and is dropped, except a decimal point between digits, a sign that
// starts a number, and apostrophes inside words (which are elided, so
// "don't" -> "dont"). Double-quoted text becomes one literal token.
std::vector<Token> tokenize(std::string_view utterance);

// Convenience for tests and config: token texts only.
std::vector<std::string> token_texts(std::string_view text);

enum class CompareOp { Eq, Gt, Lt, Ge, Le };

std::string_view to_symbol(CompareOp op);

using Phrase = std::vector<std::string>;

struct CueSpan {
  std::size_t begin = 0;
  std::size_t end = 0;  // exclusive

  std::size_t length() const noexcept { return end - begin; }
  friend bool operator==(const CueSpan&, const CueSpan&) = default;
};

// Longest cue matching at exactly `pos`.
std::optional<CueSpan> match_cue_at(const std::vector<std::string>& tokens, std::size_t pos,
                                    const std::set<Phrase>& cues);

// First position >= `from` where any cue matches; the longest cue there wins.
std::optional<CueSpan> match_cue(const std::vector<std::string>& tokens,
                                 const std::set<Phrase>& cues, std::size_t from = 0);

enum class CueRole { Count, Most, Least, Group, List, Or, And, Not, Comparator };

std::string_view to_string(CueRole role);

struct CueMatch {
  CueRole role = CueRole::List;
  std::optional<CompareOp> op;  // set for Comparator
  CueSpan span;
};

// Vocabulary driving intent recognition. Phrases are stored tokenized, so
// "don't" and "dont" are the same cue.
class Lexicon {
 public:
  static constexpr int kFormatVersion = 1;

  std::set<Phrase> count_cues;
  std::set<Phrase> most_cues;
  std::set<Phrase> least_cues;
  std::set<Phrase> group_cues;
  std::set<Phrase> list_cues;
  std::set<Phrase> or_cues;
  std::set<Phrase> and_cues;
  std::set<Phrase> not_cues;
  std::map<CompareOp, std::set<Phrase>> comparator_cues;
  std::set<std::string> stopwords;

  // Skip "of the" between a group cue and its column ("each of the counties").
  bool strip_of_the = true;
  // Accept singular/plural variants of column names ("counties" -> County).
  bool singularize_columns = true;

  // The shipped vocabulary.
  static Lexicon defaults();
  // Defaults minus the phrasing repairs, reproducing the original system's
  // documented failures.
  static Lexicon strict_paper();

  // Throws LexiconError when two cue sets share a phrase or a phrase is empty.
  void validate() const;

  // Longest cue of any role at `pos`.
  std::optional<CueMatch> cue_at(const std::vector<std::string>& tokens, std::size_t pos) const;

  bool is_stopword(std::string_view token) const { return stopwords.contains(std::string(token)); }

  friend bool operator==(const Lexicon&, const Lexicon&) = default;
};

// Text config format, one entry per line:
//
//   sir-lexicon 1
//   count: how many | number of | count
//   comparator.gt: more than | over
//   stopwords: the | a | of
//   option.strip-of-the: true
//
// '#' starts a comment. `key:` replaces the default set, `key+:` adds to it;
// keys not mentioned keep their default. Throws LexiconError.
Lexicon parse_lexicon(std::istream& in);
Lexicon load_lexicon_file(const std::string& path);
void write_lexicon(const Lexicon& lexicon, std::ostream& out);

}  // namespace sir
