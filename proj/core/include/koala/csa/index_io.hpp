#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>

#include "koala/csa/fm_index.hpp"
#include "koala/error.hpp"

namespace koala::csa {

// On-disk layout, all integers little-endian:
//
//   "KOALAIDX"                 8 bytes
//   u32 format version         currently 1
//   u64 total file length      including the trailer
//   metadata                   str corpus_id, u64 doc_count,
//                              u64 token_count, i64 build_timestamp
//   vocabulary                 u64 count, then per token: u32 len, bytes
//   c_table                    u64 count, then u64 entries
//   rank payload               u64 text length, u32 levels, then per level:
//                              u64 word count, u64 words
//   u64 CRC-64/XZ              over every preceding byte
//
// str is u32 length followed by the bytes. Rank directories are rebuilt on
// load.
inline constexpr std::string_view kIndexMagic = "KOALAIDX";
inline constexpr std::size_t kIndexHeaderSize = 20;

enum class FormatErrc {
  kBadMagic,
  kUnsupportedVersion,
  kTruncated,
  kChecksumMismatch,
  kMalformed,
};

const char* to_string(FormatErrc e);

class IndexFormatError : public Error {
 public:
  IndexFormatError(FormatErrc code, const std::string& what);
  FormatErrc code() const { return code_; }

 private:
  FormatErrc code_;
};

std::string serialize(const FmIndex& index);
FmIndex deserialize(std::span<const char> bytes);

std::uint64_t crc64(std::span<const char> bytes);

void save_index(const FmIndex& index, const std::filesystem::path& path);
FmIndex load_index(const std::filesystem::path& path);

}  // namespace koala::csa
