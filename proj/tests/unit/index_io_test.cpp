#include <gtest/gtest.h>

#include <filesystem>
#include <random>

#include "koala/csa/encoded_corpus.hpp"
#include "koala/csa/index_io.hpp"
#include "test_corpora.hpp"

using namespace koala;
using namespace koala::csa;

namespace {

FmIndex sample_index(std::uint64_t seed = 1) {
  std::mt19937_64 rng(seed);
  const auto docs = fixtures::random_docs(rng, 500, 12, 30);
  return FmIndex::build(encode_corpus(docs), {"sample", 1'700'000'123});
}

FormatErrc error_of(const std::string& bytes) {
  try {
    deserialize(bytes);
  } catch (const IndexFormatError& e) {
    return e.code();
  }
  ADD_FAILURE() << "deserialize accepted corrupt bytes";
  return FormatErrc::kMalformed;
}

void put_u64(std::string& s, std::size_t at, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) s[at + i] = static_cast<char>((v >> (8 * i)) & 0xFF);
}

// Rewrites the trailer so that only structural checks can object.
void reseal(std::string& s) {
  put_u64(s, s.size() - 8, crc64(std::span<const char>(s.data(), s.size() - 8)));
}

}  // namespace

TEST(Crc64, KnownVector) {
  // CRC-64/XZ check value.
  const std::string check = "123456789";
  EXPECT_EQ(crc64(check), 0x995DC9BBDF1939FAULL);
}

TEST(IndexIo, RoundTrip) {
  const auto idx = sample_index();
  const auto bytes = serialize(idx);
  EXPECT_EQ(bytes.substr(0, 8), "KOALAIDX");
  const auto back = deserialize(bytes);
  EXPECT_EQ(back.metadata(), idx.metadata());
  EXPECT_EQ(back.vocabulary().tokens(), idx.vocabulary().tokens());
  EXPECT_TRUE(std::equal(back.c_table().begin(), back.c_table().end(), idx.c_table().begin(),
                         idx.c_table().end()));
  EXPECT_EQ(back.reconstruct_text(), idx.reconstruct_text());
  EXPECT_EQ(serialize(back), bytes);
}

TEST(IndexIo, SaveAndLoadFile) {
  const auto idx = sample_index(2);
  const auto path = std::filesystem::temp_directory_path() / "koala_io_test.kidx";
  save_index(idx, path);
  const auto back = load_index(path);
  EXPECT_EQ(back.metadata(), idx.metadata());
  std::filesystem::remove(path);
  EXPECT_THROW(load_index(path), Error);
}

TEST(IndexIo, BadMagic) {
  auto bytes = serialize(sample_index());
  bytes[0] = 'X';
  EXPECT_EQ(error_of(bytes), FormatErrc::kBadMagic);
  EXPECT_EQ(error_of("KOA"), FormatErrc::kTruncated);
  EXPECT_EQ(error_of(""), FormatErrc::kTruncated);
}

TEST(IndexIo, UnsupportedVersion) {
  auto bytes = serialize(sample_index());
  bytes[8] = 2;
  EXPECT_EQ(error_of(bytes), FormatErrc::kUnsupportedVersion);
}

TEST(IndexIo, Truncated) {
  const auto bytes = serialize(sample_index());
  EXPECT_EQ(error_of(bytes.substr(0, bytes.size() - 1)), FormatErrc::kTruncated);
  EXPECT_EQ(error_of(bytes.substr(0, 12)), FormatErrc::kTruncated);
  EXPECT_EQ(error_of(bytes + "x"), FormatErrc::kMalformed);
}

TEST(IndexIo, EveryFlippedByteIsDetected) {
  const auto bytes = serialize(sample_index(3));
  for (std::size_t i = 0; i < bytes.size(); i += 7) {
    auto bad = bytes;
    bad[i] = static_cast<char>(bad[i] ^ 0x5A);
    EXPECT_THROW(deserialize(bad), IndexFormatError) << "offset " << i;
  }
  auto body = bytes;
  body[kIndexHeaderSize + 3] ^= 1;
  EXPECT_EQ(error_of(body), FormatErrc::kChecksumMismatch);
}

TEST(IndexIo, StructuralChecksAfterValidChecksum) {
  // A c_table entry that disagrees with the BWT but carries a valid CRC.
  const auto idx = sample_index(4);
  auto bytes = serialize(idx);
  const auto& meta = idx.metadata();
  std::size_t at = kIndexHeaderSize + 4 + meta.corpus_id.size() + 24 + 8;
  for (const auto& t : idx.vocabulary().tokens()) at += 4 + t.size();
  at += 8;  // c_table count
  put_u64(bytes, at + 8 * 3, idx.c_table()[3] + 1);
  reseal(bytes);
  EXPECT_EQ(error_of(bytes), FormatErrc::kMalformed);
}

TEST(IndexIo, ErrcNames) {
  EXPECT_STREQ(to_string(FormatErrc::kChecksumMismatch), "checksum mismatch");
}
