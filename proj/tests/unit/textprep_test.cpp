#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "koala/textprep/corpus_reader.hpp"
#include "koala/textprep/normalize.hpp"
#include "koala/textprep/tokenize.hpp"

using namespace koala::textprep;

namespace {

std::vector<std::string> tok(std::string_view s) { return tokenize(s).tokens; }

// Random text drawn from a pool that exercises every normalization rule.
std::string random_text(std::mt19937_64& rng) {
  static const std::vector<std::string> pool = {
      "a", "B", "zz", " ", "  ", "\t", "\n", ",", ".", "!", "'", "\"", "-", "(", ")",
      "\xE2\x80\x9C",  // “
      "\xE2\x80\x9D",  // ”
      "\xE2\x80\x99",  // ’
      "\xE2\x80\x93",  // –
      "\xE2\x80\x94",  // —
      "\xE2\x80\xA6",  // …
      "\xC2\xA0",      // no-break space
      "\xE2\x80\x8B",  // zero width space (Cf)
      "\x07", "\x1B", "\r", "\x7F",
      "\xC3\xA9",      // é
      "\xE6\x97\xA5",  // 日
      "\xFF",          // invalid byte
      "3.14", "don't", "x-y"};
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  std::uniform_int_distribution<int> len(0, 40);
  std::string s;
  for (int i = len(rng); i > 0; --i) s += pool[pick(rng)];
  return s;
}

}  // namespace

TEST(NormalizeText, PreservesCase) { EXPECT_EQ(normalize_text("Hello"), "Hello"); }

TEST(NormalizeText, EmptyInput) { EXPECT_EQ(normalize_text(""), ""); }

TEST(NormalizeText, DropsControlThenCollapsesSpaces) {
  EXPECT_EQ(normalize_text("a\u0007b  c"), "ab c");
}

TEST(NormalizeText, PunctuationTable) {
  EXPECT_EQ(normalize_text("“quoted”"), "\"quoted\"");
  EXPECT_EQ(normalize_text("it’s"), "it's");
  EXPECT_EQ(normalize_text("‘a’"), "'a'");
  EXPECT_EQ(normalize_text("1–2 a—b"), "1-2 a-b");
  EXPECT_EQ(normalize_text("wait…"), "wait...");
}

TEST(NormalizeText, TabsAndUnicodeSpacesBecomeOneSpace) {
  EXPECT_EQ(normalize_text("a\t\tb"), "a b");
  EXPECT_EQ(normalize_text("a\u00A0\u2003b"), "a b");
}

TEST(NormalizeText, KeepsNewlinesAndRemovesFormatChars) {
  EXPECT_EQ(normalize_text("a\nb"), "a\nb");
  EXPECT_EQ(normalize_text("a\u200Bb\uFEFF"), "ab");
  EXPECT_EQ(normalize_text("a\r\nb"), "a\nb");
}

TEST(NormalizeText, RepairsInvalidUtf8) {
  EXPECT_FALSE(is_valid_utf8("a\xFF" "b"));
  EXPECT_EQ(normalize_text("a\xFF" "b"), "a�" "b");
  EXPECT_EQ(repair_utf8("\xE2\x82"), "�");
  EXPECT_EQ(repair_utf8("ok \xC3\xA9"), "ok \xC3\xA9");
  EXPECT_FALSE(is_valid_utf8("\xED\xA0\x80"));  // surrogate
  EXPECT_FALSE(is_valid_utf8("\xC0\xAF"));      // overlong
}

TEST(Tokenize, SplitsEdgePunctuation) {
  EXPECT_EQ(tok("Hello, world!"), (std::vector<std::string>{"Hello", ",", "world", "!"}));
}

TEST(Tokenize, KeepsInternalPunctuation) {
  EXPECT_EQ(tok("state-of-the-art"), std::vector<std::string>{"state-of-the-art"});
  EXPECT_EQ(tok("don't pay $3.50."),
            (std::vector<std::string>{"don't", "pay", "$", "3.50", "."}));
}

TEST(Tokenize, Empty) {
  EXPECT_TRUE(tok("").empty());
  EXPECT_TRUE(tok(" \n ").empty());
}

TEST(Tokenize, NewlinesSeparateTokens) {
  EXPECT_EQ(tok("a\nb"), (std::vector<std::string>{"a", "b"}));
}

TEST(Tokenize, RunsOfPunctuationBecomeSingleCharacters) {
  EXPECT_EQ(tok("(\"hi\")..."),
            (std::vector<std::string>{"(", "\"", "hi", "\"", ")", ".", ".", "."}));
}

TEST(TextprepProperties, RandomizedInvariants) {
  std::mt19937_64 rng(7);
  for (int iter = 0; iter < 2000; ++iter) {
    const std::string raw = random_text(rng);
    const std::string once = normalize_text(raw);
    ASSERT_EQ(normalize_text(once), once) << "idempotence";
    ASSERT_TRUE(is_valid_utf8(once));

    const auto seq = prepare(raw);
    for (const auto& t : seq.tokens) {
      ASSERT_FALSE(t.empty());
      for (unsigned char c : t) ASSERT_TRUE(c > 0x20 && c != 0x7F) << "token '" << t << "'";
      // Case preservation: every token is a verbatim piece of the input.
      ASSERT_NE(once.find(t), std::string::npos);
    }
    // Query/corpus consistency.
    ASSERT_EQ(tokenize(join_tokens(seq.tokens)).tokens, seq.tokens);
    ASSERT_EQ(prepare(raw).tokens, seq.tokens) << "determinism";
  }
}

TEST(CorpusReader, JsonLines) {
  std::istringstream in(R"({"doc_id": "a", "text": "Hello, world!"}

{"doc_id": 7, "text": "second"}
)");
  const auto docs = read_documents(in, InputFormat::kJsonLines, "toy");
  ASSERT_EQ(docs.size(), 2u);
  EXPECT_EQ(docs[0].doc_id, "a");
  EXPECT_EQ(docs[0].text, "Hello, world!");
  EXPECT_EQ(docs[0].corpus_id, "toy");
  EXPECT_EQ(docs[1].doc_id, "7");
}

TEST(CorpusReader, MalformedLineReportsLineNumber) {
  std::istringstream in("{\"doc_id\": \"a\", \"text\": \"ok\"}\n{\"doc_id\": \"b\", \"te");
  try {
    read_documents(in, InputFormat::kJsonLines, "toy");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(CorpusReader, MissingFieldAndDuplicateId) {
  std::istringstream missing("{\"doc_id\": \"a\"}\n");
  EXPECT_THROW(read_documents(missing, InputFormat::kJsonLines, "c"), ParseError);
  std::istringstream dup("{\"doc_id\": \"a\", \"text\": \"x\"}\n{\"doc_id\": \"a\", \"text\": \"y\"}\n");
  try {
    read_documents(dup, InputFormat::kJsonLines, "c");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(CorpusReader, PlainTextBlocks) {
  std::istringstream in("first doc\nstill first\n\n\nsecond\n");
  const auto docs = read_documents(in, InputFormat::kPlainText, "p");
  ASSERT_EQ(docs.size(), 2u);
  EXPECT_EQ(docs[0].text, "first doc\nstill first");
  EXPECT_EQ(docs[0].doc_id, synthetic_doc_id(0));
  EXPECT_LT(synthetic_doc_id(9), synthetic_doc_id(10));
}

TEST(CorpusReader, InvalidUtf8IsRepaired) {
  std::istringstream in("bad \xFF text\n");
  const auto docs = read_documents(in, InputFormat::kPlainText, "p");
  ASSERT_EQ(docs.size(), 1u);
  EXPECT_TRUE(is_valid_utf8(docs[0].text));
}
