#include "sir/lexicon.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "sir/error.hpp"
#include "sir/table.hpp"

namespace sir {

namespace {

constexpr char32_t kInvalid = 0xFFFFFFFF;

struct Decoded {
  char32_t cp;
  std::size_t len;
};

// Invalid sequences decode as a single byte with cp == kInvalid.
Decoded decode_utf8(std::string_view s, std::size_t i) {
  const auto b0 = static_cast<unsigned char>(s[i]);
  if (b0 < 0x80) return {b0, 1};
  std::size_t len = 0;
  char32_t cp = 0;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    cp = b0 & 0x07;
  } else {
    return {kInvalid, 1};
  }
  if (i + len > s.size()) return {kInvalid, 1};
  for (std::size_t k = 1; k < len; ++k) {
    const auto b = static_cast<unsigned char>(s[i + k]);
    if ((b & 0xC0) != 0x80) return {kInvalid, 1};
    cp = (cp << 6) | (b & 0x3F);
  }
  return {cp, len};
}

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

char32_t lower_cp(char32_t c) {
  if (c >= 'A' && c <= 'Z') return c + 32;
  if (c < 0x80) return c;
  if (c >= 0xC0 && c <= 0xDE && c != 0xD7) return c + 32;
  if (c == 0x130) return 'i';
  if ((c >= 0x100 && c <= 0x137) || (c >= 0x14A && c <= 0x177)) return (c % 2 == 0) ? c + 1 : c;
  if ((c >= 0x139 && c <= 0x148) || (c >= 0x179 && c <= 0x17E)) return (c % 2 == 1) ? c + 1 : c;
  if (c == 0x178) return 0xFF;
  if (c == 0x386) return 0x3AC;
  if (c >= 0x388 && c <= 0x38A) return c + 37;
  if (c == 0x38C) return 0x3CC;
  if (c == 0x38E || c == 0x38F) return c + 63;
  if (c >= 0x391 && c <= 0x3A9 && c != 0x3A2) return c + 32;
  if (c >= 0x400 && c <= 0x40F) return c + 80;
  if (c >= 0x410 && c <= 0x42F) return c + 32;
  return c;
}

bool is_space_cp(char32_t c) {
  switch (c) {
    case ' ': case '\t': case '\n': case '\r': case '\f': case '\v':
    case 0x85: case 0xA0: case 0x1680: case 0x2028: case 0x2029:
    case 0x202F: case 0x205F: case 0x3000: case 0xFEFF:
      return true;
    default:
      return c >= 0x2000 && c <= 0x200B;
  }
}

bool is_punct_cp(char32_t c) {
  if (c < 0x80) {
    return (c >= 0x21 && c <= 0x2F) || (c >= 0x3A && c <= 0x40) || (c >= 0x5B && c <= 0x60) ||
           (c >= 0x7B && c <= 0x7E);
  }
  switch (c) {
    case 0xA1: case 0xA7: case 0xAB: case 0xB6: case 0xB7: case 0xBB: case 0xBF:
      return true;
    default:
      break;
  }
  return (c >= 0x2010 && c <= 0x2027) || (c >= 0x2030 && c <= 0x205E) || (c >= 0x3001 && c <= 0x303F);
}

bool is_digit_cp(char32_t c) { return c >= '0' && c <= '9'; }
bool is_word_cp(char32_t c) { return c != kInvalid ? !is_space_cp(c) && !is_punct_cp(c) && c >= 0x20 : true; }
bool is_letter_cp(char32_t c) { return is_word_cp(c) && !is_digit_cp(c); }

struct Unit {
  char32_t cp;
  std::size_t begin;
  std::size_t len;
};

std::vector<Unit> decode_all(std::string_view s) {
  std::vector<Unit> units;
  units.reserve(s.size());
  for (std::size_t i = 0; i < s.size();) {
    const auto d = decode_utf8(s, i);
    units.push_back({d.cp, i, d.len});
    i += d.len;
  }
  return units;
}

void append_unit(std::string& out, std::string_view src, const Unit& u) {
  if (u.cp == kInvalid) {
    out.append(src.substr(u.begin, u.len));
  } else {
    append_utf8(out, lower_cp(u.cp));
  }
}

std::string_view trim_view(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

std::string to_lower_utf8(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (const auto& u : decode_all(text)) append_unit(out, text, u);
  return out;
}

std::string normalize_key(std::string_view text) {
  std::vector<Unit> units;
  for (const auto& u : decode_all(text)) {
    if (u.cp == kInvalid || !is_space_cp(u.cp)) units.push_back(u);
  }
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < units.size(); ++i) {
    const auto cp = units[i].cp;
    if (cp != kInvalid && is_punct_cp(cp)) {
      const bool decimal_point = cp == '.' && i > 0 && i + 1 < units.size() && is_digit_cp(units[i - 1].cp) &&
                                 is_digit_cp(units[i + 1].cp);
      if (!decimal_point) continue;
    }
    append_unit(out, text, units[i]);
  }
  return out;
}

std::vector<Token> tokenize(std::string_view utterance) {
  const auto units = decode_all(utterance);
  std::vector<Token> tokens;
  Token current;
  bool open = false;

  auto flush = [&] {
    if (open && !current.text.empty()) {
      current.is_number = !current.quoted && parse_decimal(current.text).has_value();
      tokens.push_back(std::move(current));
    }
    current = Token{};
    open = false;
  };
  auto add = [&](const Unit& u) {
    if (!open) {
      open = true;
      current.begin = u.begin;
    }
    append_unit(current.text, utterance, u);
    current.end = u.begin + u.len;
  };
  auto at = [&](std::size_t i) -> char32_t { return i < units.size() ? units[i].cp : 0; };

  for (std::size_t i = 0; i < units.size(); ++i) {
    const auto& u = units[i];
    const auto c = u.cp;
    if (c == '"') {
      std::size_t close = i + 1;
      while (close < units.size() && units[close].cp != '"') ++close;
      if (close < units.size()) {
        flush();
        const auto begin = units[i].begin + 1;
        const auto end = units[close].begin;
        const auto inner = trim_view(utterance.substr(begin, end - begin));
        if (!inner.empty()) {
          Token t;
          t.text = to_lower_utf8(inner);
          t.begin = units[i].begin;
          t.end = units[close].begin + 1;
          t.quoted = true;
          tokens.push_back(std::move(t));
        }
        i = close;
        continue;
      }
      flush();
      continue;
    }
    if (c != kInvalid && is_space_cp(c)) {
      flush();
      continue;
    }
    if (is_word_cp(c)) {
      add(u);
      continue;
    }
    // Punctuation.
    const bool has_text = open && !current.text.empty();
    const char32_t prev = i > 0 ? units[i - 1].cp : 0;
    const char32_t next = at(i + 1);
    if (c == '.' && is_digit_cp(next) && (!has_text || (is_digit_cp(prev) && has_text))) {
      add(u);
      continue;
    }
    if ((c == '\'' || c == 0x2019) && has_text && is_letter_cp(prev) && is_letter_cp(next)) {
      continue;  // elided: don't -> dont
    }
    if ((c == '-' || c == '+') && !has_text &&
        (is_digit_cp(next) || (next == '.' && is_digit_cp(at(i + 2))))) {
      add(u);
      continue;
    }
    flush();
  }
  flush();
  return tokens;
}

std::vector<std::string> token_texts(std::string_view text) {
  std::vector<std::string> out;
  for (auto& t : tokenize(text)) out.push_back(std::move(t.text));
  return out;
}

std::string_view to_symbol(CompareOp op) {
  switch (op) {
    case CompareOp::Eq:
      return "=";
    case CompareOp::Gt:
      return ">";
    case CompareOp::Lt:
      return "<";
    case CompareOp::Ge:
      return ">=";
    case CompareOp::Le:
      return "<=";
  }
  return "?";
}

std::string_view to_string(CueRole role) {
  switch (role) {
    case CueRole::Count:
      return "count";
    case CueRole::Most:
      return "most";
    case CueRole::Least:
      return "least";
    case CueRole::Group:
      return "group";
    case CueRole::List:
      return "list";
    case CueRole::Or:
      return "or";
    case CueRole::And:
      return "and";
    case CueRole::Not:
      return "not";
    case CueRole::Comparator:
      return "comparator";
  }
  return "?";
}

std::optional<CueSpan> match_cue_at(const std::vector<std::string>& tokens, std::size_t pos,
                                    const std::set<Phrase>& cues) {
  std::optional<CueSpan> best;
  for (const auto& phrase : cues) {
    if (phrase.empty() || pos + phrase.size() > tokens.size()) continue;
    if (best && phrase.size() <= best->length()) continue;
    if (std::equal(phrase.begin(), phrase.end(), tokens.begin() + static_cast<std::ptrdiff_t>(pos))) {
      best = CueSpan{pos, pos + phrase.size()};
    }
  }
  return best;
}

std::optional<CueSpan> match_cue(const std::vector<std::string>& tokens, const std::set<Phrase>& cues,
                                 std::size_t from) {
  for (std::size_t pos = from; pos < tokens.size(); ++pos) {
    if (auto span = match_cue_at(tokens, pos, cues)) return span;
  }
  return std::nullopt;
}

namespace {

std::set<Phrase> phrases(std::initializer_list<std::string_view> list) {
  std::set<Phrase> out;
  for (auto p : list) out.insert(token_texts(p));
  return out;
}

struct SetRef {
  std::string_view key;
  std::set<Phrase> Lexicon::*member;
  CueRole role;
};

constexpr SetRef kCueSets[] = {
    {"count", &Lexicon::count_cues, CueRole::Count}, {"most", &Lexicon::most_cues, CueRole::Most},
    {"least", &Lexicon::least_cues, CueRole::Least}, {"group", &Lexicon::group_cues, CueRole::Group},
    {"list", &Lexicon::list_cues, CueRole::List},    {"or", &Lexicon::or_cues, CueRole::Or},
    {"and", &Lexicon::and_cues, CueRole::And},       {"not", &Lexicon::not_cues, CueRole::Not},
};

struct OpKey {
  std::string_view key;
  CompareOp op;
};

constexpr OpKey kComparatorKeys[] = {
    {"comparator.eq", CompareOp::Eq}, {"comparator.gt", CompareOp::Gt}, {"comparator.lt", CompareOp::Lt},
    {"comparator.ge", CompareOp::Ge}, {"comparator.le", CompareOp::Le},
};

std::string join(const Phrase& p) {
  std::string out;
  for (const auto& w : p) {
    if (!out.empty()) out += ' ';
    out += w;
  }
  return out;
}

}  // namespace

Lexicon Lexicon::defaults() {
  Lexicon lx;
  lx.count_cues = phrases({"how many", "number of", "count", "total"});
  lx.most_cues = phrases({"most popular", "most common", "most frequent", "most frequently"});
  lx.least_cues = phrases({"least popular", "least common", "least frequent", "least frequently", "rarest"});
  lx.group_cues = phrases({"each", "every", "per", "by"});
  lx.list_cues = phrases({"show", "list", "what", "whats", "which", "give", "find", "display", "get"});
  lx.or_cues = phrases({"or"});
  lx.and_cues = phrases({"and"});
  lx.not_cues = phrases({"not", "without", "dont", "doesnt", "isnt", "arent", "no", "excluding", "except"});
  lx.comparator_cues[CompareOp::Eq] = phrases({"exactly", "equal to", "equals"});
  lx.comparator_cues[CompareOp::Gt] = phrases({"more than", "greater than", "over", "above", "larger than"});
  lx.comparator_cues[CompareOp::Lt] = phrases({"less than", "fewer than", "under", "below", "smaller than"});
  lx.comparator_cues[CompareOp::Ge] = phrases({"at least", "or more", "no less than", "no fewer than"});
  lx.comparator_cues[CompareOp::Le] = phrases({"at most", "or less", "or fewer", "no more than", "up to"});
  lx.stopwords = {"a",     "an",   "the",   "of",   "in",   "on",    "at",    "to",    "for",   "with",
                  "from",  "is",   "are",   "was",  "were", "be",    "been",  "do",    "does",  "did",
                  "have",  "has",  "had",   "there", "that", "this", "these", "those", "me",    "my",
                  "i",     "you",  "your",  "we",   "our",  "us",    "it",    "its",   "they",  "them",
                  "their", "all",  "any",   "some", "either", "both", "can",  "could", "would", "will",
                  "please", "whose", "who", "where", "how", "as",   "than",  "if",    "then",  "into"};
  lx.strip_of_the = true;
  lx.singularize_columns = true;
  return lx;
}

Lexicon Lexicon::strict_paper() {
  Lexicon lx = defaults();
  lx.strip_of_the = false;
  lx.singularize_columns = false;
  return lx;
}

void Lexicon::validate() const {
  std::map<Phrase, std::string> owner;
  auto claim = [&](const std::set<Phrase>& set, std::string_view key) {
    for (const auto& p : set) {
      if (p.empty()) throw LexiconError("EmptyCue", "empty phrase in '" + std::string(key) + "'");
      auto [it, inserted] = owner.emplace(p, std::string(key));
      if (!inserted) {
        throw LexiconError("OverlappingCues", "phrase '" + join(p) + "' is in both '" + it->second + "' and '" +
                                                  std::string(key) + "'");
      }
    }
  };
  for (const auto& s : kCueSets) claim(this->*(s.member), s.key);
  for (const auto& [op, set] : comparator_cues) claim(set, "comparator." + std::string(to_symbol(op)));
}

std::optional<CueMatch> Lexicon::cue_at(const std::vector<std::string>& tokens, std::size_t pos) const {
  std::optional<CueMatch> best;
  auto consider = [&](const std::set<Phrase>& set, CueRole role, std::optional<CompareOp> op) {
    if (auto span = match_cue_at(tokens, pos, set)) {
      if (!best || span->length() > best->span.length()) best = CueMatch{role, op, *span};
    }
  };
  for (const auto& s : kCueSets) consider(this->*(s.member), s.role, std::nullopt);
  for (const auto& [op, set] : comparator_cues) consider(set, CueRole::Comparator, op);
  return best;
}

Lexicon parse_lexicon(std::istream& in) {
  Lexicon lx = Lexicon::defaults();
  std::string line;
  std::size_t line_no = 0;
  bool saw_magic = false;

  auto fail = [&](const std::string& msg) -> LexiconError {
    return LexiconError("LexiconSyntax", "line " + std::to_string(line_no) + ": " + msg);
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto text = trim_view(line);
    if (text.empty()) continue;
    if (!saw_magic) {
      std::istringstream magic{std::string(text)};
      std::string word;
      int version = 0;
      if (!(magic >> word >> version) || word != "sir-lexicon") throw fail("expected 'sir-lexicon <version>'");
      if (version != Lexicon::kFormatVersion) throw fail("unsupported lexicon version " + std::to_string(version));
      saw_magic = true;
      continue;
    }
    const auto colon = text.find(':');
    if (colon == std::string_view::npos) throw fail("expected 'key: value'");
    auto key = std::string(trim_view(text.substr(0, colon)));
    const auto value = trim_view(text.substr(colon + 1));
    bool append = false;
    if (!key.empty() && key.back() == '+') {
      append = true;
      key.pop_back();
    }

    if (key == "option.strip-of-the" || key == "option.singularize-columns") {
      bool flag = false;
      if (value == "true") {
        flag = true;
      } else if (value != "false") {
        throw fail("option value must be true or false");
      }
      (key == "option.strip-of-the" ? lx.strip_of_the : lx.singularize_columns) = flag;
      continue;
    }

    std::set<Phrase> parsed;
    std::string_view rest = value;
    while (!rest.empty()) {
      const auto bar = rest.find('|');
      const auto item = trim_view(rest.substr(0, bar));
      if (!item.empty()) {
        auto words = token_texts(item);
        if (words.empty()) throw fail("phrase '" + std::string(item) + "' has no words");
        parsed.insert(std::move(words));
      }
      if (bar == std::string_view::npos) break;
      rest.remove_prefix(bar + 1);
    }

    auto assign = [&](std::set<Phrase>& target) {
      if (!append) target.clear();
      target.insert(parsed.begin(), parsed.end());
    };

    if (key == "stopwords") {
      if (!append) lx.stopwords.clear();
      for (const auto& p : parsed) {
        if (p.size() != 1) throw fail("stopwords must be single words");
        lx.stopwords.insert(p.front());
      }
      continue;
    }
    bool known = false;
    for (const auto& s : kCueSets) {
      if (key == s.key) {
        assign(lx.*(s.member));
        known = true;
      }
    }
    for (const auto& c : kComparatorKeys) {
      if (key == c.key) {
        assign(lx.comparator_cues[c.op]);
        known = true;
      }
    }
    if (!known) throw fail("unknown key '" + key + "'");
  }
  if (!saw_magic) throw LexiconError("LexiconSyntax", "missing 'sir-lexicon <version>' header");
  lx.validate();
  return lx;
}

Lexicon load_lexicon_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw LexiconError("IoError", "cannot open lexicon '" + path + "'");
  return parse_lexicon(in);
}

void write_lexicon(const Lexicon& lexicon, std::ostream& out) {
  auto put = [&](std::string_view key, const std::set<Phrase>& set) {
    out << key << ':';
    bool first = true;
    for (const auto& p : set) {
      out << (first ? " " : " | ") << join(p);
      first = false;
    }
    out << '\n';
  };
  out << "sir-lexicon " << Lexicon::kFormatVersion << '\n';
  for (const auto& s : kCueSets) put(s.key, lexicon.*(s.member));
  for (const auto& c : kComparatorKeys) {
    const auto it = lexicon.comparator_cues.find(c.op);
    put(c.key, it == lexicon.comparator_cues.end() ? std::set<Phrase>{} : it->second);
  }
  std::set<Phrase> stop;
  for (const auto& w : lexicon.stopwords) stop.insert({w});
  put("stopwords", stop);
  out << "option.strip-of-the: " << (lexicon.strip_of_the ? "true" : "false") << '\n';
  out << "option.singularize-columns: " << (lexicon.singularize_columns ? "true" : "false") << '\n';
}

}  // namespace sir
