#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "sir/error.hpp"
#include "sir/lexicon.hpp"
#include "support.hpp"

using namespace sir;

TEST(NormalizeKey, Examples) {
  EXPECT_EQ(normalize_key("Course Type"), "coursetype");
  EXPECT_EQ(normalize_key("CourseType"), "coursetype");
  EXPECT_EQ(normalize_key("  course\ttype "), "coursetype");
  EXPECT_EQ(normalize_key("Greenwood (Waters)"), "greenwoodwaters");
  EXPECT_EQ(normalize_key("E. 22nd St."), "e22ndst");
  EXPECT_EQ(normalize_key("2.5"), "2.5");
  EXPECT_EQ(normalize_key("-2.5"), "2.5");
  EXPECT_EQ(normalize_key("Web page"), "webpage");
  EXPECT_EQ(normalize_key("ÉCOLE Ñandú"), "écoleñandú");
  EXPECT_EQ(normalize_key("ПРИВЕТ"), "привет");
  EXPECT_EQ(normalize_key(""), "");
}

TEST(NormalizeKey, Idempotent) {
  const std::vector<std::string> alphabet{"a", "Z", "9", ".", " ", "\t", "-", "'", "\"", "(", "É", "ß", "Ω", "ж", "_", ",", "1", "0"};
  std::mt19937 rng(3);
  for (int i = 0; i < 5000; ++i) {
    std::string s;
    const auto n = rng() % 12;
    for (std::size_t k = 0; k < n; ++k) s += alphabet[rng() % alphabet.size()];
    const auto once = normalize_key(s);
    ASSERT_EQ(normalize_key(once), once) << "input: " << s;
    ASSERT_EQ(once.find(' '), std::string::npos);
  }
}

TEST(Tokenize, WordsNumbersAndPunctuation) {
  EXPECT_EQ(token_texts("How many EASY courses?"), (std::vector<std::string>{"how", "many", "easy", "courses"}));
  EXPECT_EQ(token_texts("more than 9.5 holes, please"),
            (std::vector<std::string>{"more", "than", "9.5", "holes", "please"}));
  EXPECT_EQ(token_texts("don't isn't"), (std::vector<std::string>{"dont", "isnt"}));
  EXPECT_EQ(token_texts("-3 and 18-hole"), (std::vector<std::string>{"-3", "and", "18", "hole"}));
  EXPECT_TRUE(token_texts("  ?! ").empty());
}

TEST(Tokenize, OffsetsAndFlags) {
  const auto tokens = tokenize("show \"Or Else\" 18");
  ASSERT_EQ(tokens.size(), 3u);
  EXPECT_EQ(tokens[0].begin, 0u);
  EXPECT_EQ(tokens[0].end, 4u);
  EXPECT_TRUE(tokens[1].quoted);
  EXPECT_EQ(tokens[1].text, "or else");
  EXPECT_TRUE(tokens[2].is_number);
  EXPECT_EQ(tokens[2].begin, 15u);
}

TEST(CueMatching, LongestWins) {
  const auto lx = Lexicon::defaults();
  const auto words = token_texts("no more than 5");
  const auto m = lx.cue_at(words, 0);
  ASSERT_TRUE(m);
  EXPECT_EQ(m->role, CueRole::Comparator);
  EXPECT_EQ(m->op, CompareOp::Le);
  EXPECT_EQ(m->span.length(), 3u);

  const auto count = lx.cue_at(token_texts("how many"), 0);
  ASSERT_TRUE(count);
  EXPECT_EQ(count->role, CueRole::Count);

  const auto found = match_cue(token_texts("the most popular terrain"), lx.most_cues);
  ASSERT_TRUE(found);
  EXPECT_EQ(found->begin, 1u);
  EXPECT_EQ(found->end, 3u);
  EXPECT_FALSE(lx.cue_at(token_texts("most used"), 0));
}

TEST(Lexicon, DefaultsAreValid) {
  EXPECT_NO_THROW(Lexicon::defaults().validate());
  EXPECT_NO_THROW(Lexicon::strict_paper().validate());
  const auto strict = Lexicon::strict_paper();
  EXPECT_FALSE(strict.strip_of_the);
  EXPECT_FALSE(strict.singularize_columns);
  auto relaxed = strict;
  relaxed.strip_of_the = relaxed.singularize_columns = true;
  EXPECT_EQ(relaxed, Lexicon::defaults());
}

TEST(Lexicon, ValidateRejectsOverlap) {
  auto lx = Lexicon::defaults();
  lx.list_cues.insert({"how", "many"});
  try {
    lx.validate();
    FAIL();
  } catch (const LexiconError& e) {
    EXPECT_EQ(e.code(), "OverlappingCues");
  }
  auto empty = Lexicon::defaults();
  empty.or_cues.insert(Phrase{});
  EXPECT_THROW(empty.validate(), LexiconError);
}

TEST(LexiconConfig, WriteParseRoundTrip) {
  for (const auto& lx : {Lexicon::defaults(), Lexicon::strict_paper()}) {
    std::stringstream ss;
    write_lexicon(lx, ss);
    EXPECT_EQ(parse_lexicon(ss), lx);
  }
}

TEST(LexiconConfig, ShippedFilesMatchBuiltins) {
  EXPECT_EQ(load_lexicon_file(fixture::data_path("lexicon/default.lex")), Lexicon::defaults());
  EXPECT_EQ(load_lexicon_file(fixture::data_path("lexicon/strict-paper.lex")), Lexicon::strict_paper());
  std::ostringstream out;
  write_lexicon(Lexicon::defaults(), out);
  EXPECT_EQ(out.str(), fixture::read_file(fixture::data_path("lexicon/default.lex")));
}

TEST(LexiconConfig, ReplaceAppendAndKeepDefaults) {
  std::istringstream in(
      "# custom\n"
      "sir-lexicon 1\n"
      "count: tally\n"
      "most+: top\n"
      "stopwords+: yonder\n"
      "option.strip-of-the: false\n");
  const auto lx = parse_lexicon(in);
  EXPECT_EQ(lx.count_cues, (std::set<Phrase>{{"tally"}}));
  EXPECT_TRUE(lx.most_cues.contains(Phrase{"top"}));
  EXPECT_TRUE(lx.most_cues.contains(Phrase{"most", "popular"}));
  EXPECT_TRUE(lx.is_stopword("yonder"));
  EXPECT_TRUE(lx.is_stopword("the"));
  EXPECT_FALSE(lx.strip_of_the);
  EXPECT_EQ(lx.list_cues, Lexicon::defaults().list_cues);
}

TEST(LexiconConfig, Errors) {
  const auto code = [](const std::string& text) {
    std::istringstream in(text);
    try {
      parse_lexicon(in);
    } catch (const LexiconError& e) {
      return e.code();
    }
    return std::string("none");
  };
  EXPECT_EQ(code("count: x\n"), "LexiconSyntax");
  EXPECT_EQ(code("sir-lexicon 2\n"), "LexiconSyntax");
  EXPECT_EQ(code("sir-lexicon 1\nbogus: x\n"), "LexiconSyntax");
  EXPECT_EQ(code("sir-lexicon 1\noption.strip-of-the: maybe\n"), "LexiconSyntax");
  EXPECT_EQ(code("sir-lexicon 1\nstopwords: two words\n"), "LexiconSyntax");
  EXPECT_EQ(code("sir-lexicon 1\nlist: how many\n"), "OverlappingCues");
  EXPECT_THROW(load_lexicon_file("/nonexistent.lex"), LexiconError);
}
