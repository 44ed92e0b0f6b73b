// Copyright 2026 The lexnoise Authors. All Rights Reserved.
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

#include <sstream>
#include <string>

#include "gtest/gtest.h"
#include "lexnoise/csv.hpp"
#include "lexnoise/lexicon.hpp"
#include "test_support.hpp"

namespace lexnoise {
namespace {

PronunciationLexicon parse(const std::string& text) {
  std::istringstream in(text);
  return parse_lexicon(in, "test.dict");
}

const char* kDict =
    ";;; comment\n"
    "CAT  K AE1 T\n"
    "SEA  S IY1\n"
    "SEE  S IY1\n"
    "TEA  T IY1\n"
    "OCEAN  OW1 SH AH0 N\n"
    "READ  R IY1 D\n"
    "READ(2)  R EH1 D\n"
    "RED  R EH0 D\n";

TEST(LexiconTest, ParsesEntries) {
  const auto lex = parse(kDict);
  EXPECT_EQ(lex.size(), 7u);
  EXPECT_EQ(lex.pronunciations("cat"), (std::vector<Pronunciation>{{"K", "AE1", "T"}}));
  EXPECT_EQ(lex.pronunciations("CAT").size(), 1u);
  const auto& read = lex.pronunciations("read");
  ASSERT_EQ(read.size(), 2u);
  EXPECT_EQ(read[0], (Pronunciation{"R", "IY1", "D"}));
  EXPECT_EQ(read[1], (Pronunciation{"R", "EH1", "D"}));
}

TEST(LexiconTest, DuplicatePlainEntriesBecomeAlternates) {
  const auto lex = parse("TOMATO T AH0 M EY1 T OW2\nTOMATO T AH0 M AA1 T OW2\n");
  ASSERT_EQ(lex.pronunciations("tomato").size(), 2u);
  EXPECT_EQ(lex.pronunciations("tomato")[1][3], "AA1");
}

TEST(LexiconTest, MalformedLineReportsLineNumber) {
  try {
    parse("CAT K AE1 T\n\nDOG\n");
    FAIL() << "expected an error";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("test.dict:3"), std::string::npos) << e.what();
  }
  EXPECT_THROW(parse(""), DataError);
  EXPECT_THROW(parse(";;; only comments\n"), DataError);
  EXPECT_THROW(parse("CAT(x) K AE1 T\n"), DataError);
  EXPECT_THROW(load_lexicon("/nonexistent.dict"), DataError);
}

TEST(LexiconTest, PhonemeLength) {
  const auto lex = parse(kDict);
  EXPECT_EQ(phoneme_length(lex, "cat"), 3u);
  EXPECT_EQ(phoneme_length(lex, "ocean"), 4u);
  EXPECT_EQ(phoneme_length(lex, "sea"), 2u);
  EXPECT_EQ(phoneme_length(lex, "Read"), 3u);
  EXPECT_THROW(phoneme_length(lex, "zzyzx"), OutOfVocabularyError);
}

TEST(LexiconTest, StressIsIgnored) {
  EXPECT_EQ(strip_stress("AE1"), "AE");
  EXPECT_EQ(strip_stress("T"), "T");
  EXPECT_EQ(strip_stress(Pronunciation{"OW1", "SH", "AH0", "N"}), (Pronunciation{"OW", "SH", "AH", "N"}));
}

TEST(PhoneticMatchTest, Examples) {
  const auto lex = parse(kDict);
  EXPECT_TRUE(phonetic_match(lex, "sea", "see"));
  EXPECT_TRUE(phonetic_match(lex, "sea", "Sea."));
  EXPECT_FALSE(phonetic_match(lex, "sea", "tea"));
  // Alternate pronunciation R EH1 D matches "red" (R EH0 D) once stress is dropped.
  EXPECT_TRUE(phonetic_match(lex, "read", "red"));
  // OOV falls back to spelling.
  EXPECT_TRUE(phonetic_match(lex, "zzyzx", "ZZYZX!"));
  EXPECT_FALSE(phonetic_match(lex, "zzyzx", "sea"));
  EXPECT_FALSE(phonetic_match(lex, "sea", ""));
}

TEST(PhoneticMatchTest, SymmetricAndReflexive) {
  const auto lex = parse(kDict);
  for (const auto& [a, pa] : lex.entries()) {
    EXPECT_TRUE(phonetic_match(lex, a, a));
    for (const auto& [b, pb] : lex.entries()) {
      EXPECT_EQ(phonetic_match(lex, a, b), phonetic_match(lex, b, a)) << a << " " << b;
    }
  }
}

TEST(LexiconTest, WriteAndReloadPreservesLookups) {
  const auto lex = parse(kDict);
  std::ostringstream out;
  lex.write(out);
  const auto again = parse(out.str());
  ASSERT_EQ(again.size(), lex.size());
  for (const auto& [word, prons] : lex.entries()) {
    EXPECT_EQ(again.pronunciations(word), prons);
    EXPECT_EQ(phoneme_length(again, word), phoneme_length(lex, word));
  }
}

TEST(LexiconTest, SampleDictionaryLoads) {
  const auto lex = load_lexicon(testing::data_file("lexicon-sample.dict"));
  EXPECT_EQ(phoneme_length(lex, "ocean"), 4u);
  EXPECT_EQ(phoneme_length(lex, "sea"), 2u);
  EXPECT_TRUE(phonetic_match(lex, "sea", "see"));
}

TEST(PairsTest, ParsesRecord) {
  const auto pairs = parse_pairs(csv::parse(
      "pair_id,word_a,word_b,context\n"
      "p1,sea,ocean,\"and he runs away scared and dives into the {TARGET}\"\n"));
  ASSERT_EQ(pairs.size(), 1u);
  EXPECT_EQ(pairs[0].word_a, "sea");
  EXPECT_EQ(pairs[0].word_b, "ocean");
  EXPECT_EQ(pairs[0].render("ocean"), "and he runs away scared and dives into the ocean");
  EXPECT_EQ(pairs[0].left_context(),
            (std::vector<std::string>{"and", "he", "runs", "away", "scared", "and", "dives", "into", "the"}));
}

TEST(PairsTest, OptionalAudioColumns) {
  const auto pairs = parse_pairs(csv::parse(
      "pair_id,word_a,word_b,context,audio_a,audio_b\n"
      "p1,Sea,Ocean,{TARGET} now,a.wav,b.wav\n"));
  EXPECT_EQ(pairs[0].word_a, "sea");
  EXPECT_EQ(pairs[0].audio_b, "b.wav");
  EXPECT_TRUE(pairs[0].left_context().empty());
}

TEST(PairsTest, Errors) {
  EXPECT_THROW(parse_pairs(csv::parse("pair_id,word_a,word_b,context\np1,sea,ocean,no slot here\n")), DataError);
  EXPECT_THROW(parse_pairs(csv::parse("pair_id,word_a,word_b,context\np1,sea,sea,the {TARGET}\n")), DataError);
  EXPECT_THROW(parse_pairs(csv::parse("pair_id,word_a,word_b,context\np1,sea,ocean,{TARGET} {TARGET}\n")),
               DataError);
  EXPECT_THROW(parse_pairs(csv::parse(
                   "pair_id,word_a,word_b,context\np1,sea,ocean,the {TARGET}\np1,big,large,the {TARGET}\n")),
               DataError);
  EXPECT_THROW(parse_pairs(csv::parse("pair_id,word_a,context\np1,sea,the {TARGET}\n")), DataError);
  try {
    parse_pairs(csv::parse("pair_id,word_a,word_b,context\np1,sea,ocean,the {TARGET}\np2,a,a,{TARGET}\n", "pairs.csv"));
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("pairs.csv:3"), std::string::npos) << e.what();
  }
}

TEST(PairsTest, SampleFileLoads) {
  const auto pairs = load_pairs(testing::data_file("pairs-sample.csv"));
  EXPECT_EQ(pairs.size(), 5u);
  const auto lex = load_lexicon(testing::data_file("lexicon-sample.dict"));
  for (const auto& p : pairs) {
    EXPECT_TRUE(lex.contains(p.word_a)) << p.word_a;
    EXPECT_TRUE(lex.contains(p.word_b)) << p.word_b;
  }
}

TEST(CsvTest, QuotingRoundTrip) {
  std::ostringstream out;
  csv::write_row(out, {"a", "b,c", "say \"hi\"", "line\nbreak", ""});
  const auto t = csv::parse("h1,h2,h3,h4,h5\n" + out.str());
  ASSERT_EQ(t.rows.size(), 1u);
  EXPECT_EQ(t.rows[0], (std::vector<std::string>{"a", "b,c", "say \"hi\"", "line\nbreak", ""}));
}

TEST(CsvTest, FormatDoubleRoundTrips) {
  for (double v : {0.1, 1.0 / 3.0, -2.5, 1e-300, 0.0}) {
    const auto t = csv::parse("x\n" + csv::format_double(v) + "\n");
    EXPECT_EQ(csv::parse_double(t.rows[0][0], t, 0, "x"), v);
  }
  EXPECT_EQ(csv::format_double(0.5), "0.5");
}

TEST(CsvTest, RaggedRowIsAnError) { EXPECT_THROW(csv::parse("a,b\n1\n"), DataError); }

}  // namespace
}  // namespace lexnoise
