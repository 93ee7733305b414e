#include "koala/csa/index_io.hpp"

#include <cstring>
#include <fstream>
#include <limits>

#include <boost/crc.hpp>

namespace koala::csa {

const char* to_string(FormatErrc e) {
  switch (e) {
    case FormatErrc::kBadMagic: return "bad magic";
    case FormatErrc::kUnsupportedVersion: return "unsupported version";
    case FormatErrc::kTruncated: return "truncated";
    case FormatErrc::kChecksumMismatch: return "checksum mismatch";
    case FormatErrc::kMalformed: return "malformed";
  }
  return "unknown";
}

IndexFormatError::IndexFormatError(FormatErrc code, const std::string& what)
    : Error(std::string("index format error (") + to_string(code) + "): " + what),
      code_(code) {}

std::uint64_t crc64(std::span<const char> bytes) {
  // CRC-64/XZ (ECMA-182 polynomial, reflected).
  boost::crc_optimal<64, 0x42F0E1EBA9EA3693ULL, ~0ULL, ~0ULL, true, true> crc;
  crc.process_bytes(bytes.data(), bytes.size());
  return crc.checksum();
}

namespace {

class Writer {
 public:
  void u32(std::uint32_t v) { put(v, 4); }
  void u64(std::uint64_t v) { put(v, 8); }
  void i64(std::int64_t v) { put(static_cast<std::uint64_t>(v), 8); }
  void str(std::string_view s) {
    u32(static_cast<std::uint32_t>(s.size()));
    out_.append(s);
  }
  void raw(std::string_view s) { out_.append(s); }
  std::string& buffer() { return out_; }

 private:
  void put(std::uint64_t v, int bytes) {
    for (int i = 0; i < bytes; ++i) {
      out_.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
    }
  }
  std::string out_;
};

class Reader {
 public:
  explicit Reader(std::span<const char> bytes) : bytes_(bytes) {}

  std::uint32_t u32() { return static_cast<std::uint32_t>(get(4)); }
  std::uint64_t u64() { return get(8); }
  std::int64_t i64() { return static_cast<std::int64_t>(get(8)); }
  std::string str() {
    const auto len = u32();
    need(len);
    std::string s(bytes_.data() + pos_, len);
    pos_ += len;
    return s;
  }
  std::size_t remaining() const { return bytes_.size() - pos_; }
  // Guards a count read from the file before allocating for it.
  void check_count(std::uint64_t count, std::size_t min_bytes_each) {
    if (min_bytes_each && count > remaining() / min_bytes_each) {
      throw IndexFormatError(FormatErrc::kMalformed, "element count exceeds payload");
    }
  }

 private:
  void need(std::size_t n) {
    if (remaining() < n) {
      throw IndexFormatError(FormatErrc::kMalformed, "section runs past the payload");
    }
  }
  std::uint64_t get(int n) {
    need(static_cast<std::size_t>(n));
    std::uint64_t v = 0;
    for (int i = 0; i < n; ++i) {
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes_[pos_ + i]))
           << (8 * i);
    }
    pos_ += static_cast<std::size_t>(n);
    return v;
  }

  std::span<const char> bytes_;
  std::size_t pos_ = 0;
};

std::uint64_t read_le(std::span<const char> bytes, std::size_t offset, int n) {
  std::uint64_t v = 0;
  for (int i = 0; i < n; ++i) {
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes[offset + i]))
         << (8 * i);
  }
  return v;
}

}  // namespace

std::string serialize(const FmIndex& index) {
  Writer w;
  w.raw(kIndexMagic);
  w.u32(kFormatVersion);
  w.u64(0);  // total length, patched below

  const auto& meta = index.metadata();
  w.str(meta.corpus_id);
  w.u64(meta.doc_count);
  w.u64(meta.token_count);
  w.i64(meta.build_timestamp);

  const auto& tokens = index.vocabulary().tokens();
  w.u64(tokens.size());
  for (const auto& t : tokens) w.str(t);

  const auto c_table = index.c_table();
  w.u64(c_table.size());
  for (auto c : c_table) w.u64(c);

  const auto& wm = index.bwt();
  w.u64(wm.size());
  w.u32(wm.levels());
  for (const auto& level : wm.level_bits()) {
    const auto words = level.words();
    w.u64(words.size());
    for (auto word : words) w.u64(word);
  }

  std::string& out = w.buffer();
  const std::uint64_t total = out.size() + 8;
  for (int i = 0; i < 8; ++i) {
    out[12 + i] = static_cast<char>((total >> (8 * i)) & 0xFF);
  }
  w.u64(crc64(out));
  return std::move(out);
}

FmIndex deserialize(std::span<const char> bytes) {
  if (bytes.size() < kIndexMagic.size()) {
    throw IndexFormatError(FormatErrc::kTruncated, "file shorter than the magic");
  }
  if (std::memcmp(bytes.data(), kIndexMagic.data(), kIndexMagic.size()) != 0) {
    throw IndexFormatError(FormatErrc::kBadMagic, "not a koala index");
  }
  if (bytes.size() < 12) {
    throw IndexFormatError(FormatErrc::kTruncated, "header cut short");
  }
  const auto version = static_cast<std::uint32_t>(read_le(bytes, 8, 4));
  if (version != kFormatVersion) {
    throw IndexFormatError(FormatErrc::kUnsupportedVersion,
                           "version " + std::to_string(version));
  }
  if (bytes.size() < kIndexHeaderSize + 8) {
    throw IndexFormatError(FormatErrc::kTruncated, "header cut short");
  }
  const std::uint64_t total = read_le(bytes, 12, 8);
  if (bytes.size() < total) {
    throw IndexFormatError(FormatErrc::kTruncated,
                           "expected " + std::to_string(total) + " bytes, found " +
                               std::to_string(bytes.size()));
  }
  if (bytes.size() > total || total < kIndexHeaderSize + 8) {
    throw IndexFormatError(FormatErrc::kMalformed, "declared length does not match file");
  }
  const auto body = bytes.first(bytes.size() - 8);
  if (crc64(body) != read_le(bytes, bytes.size() - 8, 8)) {
    throw IndexFormatError(FormatErrc::kChecksumMismatch, "CRC-64 does not match");
  }

  Reader r(body.subspan(kIndexHeaderSize));
  IndexMetadata meta;
  meta.format_version = version;
  meta.corpus_id = r.str();
  meta.doc_count = r.u64();
  meta.token_count = r.u64();
  meta.build_timestamp = r.i64();

  const auto vocab_size = r.u64();
  r.check_count(vocab_size, 4);
  std::vector<std::string> tokens;
  tokens.reserve(vocab_size);
  for (std::uint64_t i = 0; i < vocab_size; ++i) tokens.push_back(r.str());

  const auto c_size = r.u64();
  r.check_count(c_size, 8);
  std::vector<std::uint64_t> c_table(c_size);
  for (auto& c : c_table) c = r.u64();

  const auto text_length = r.u64();
  const auto levels = r.u32();
  if (levels == 0 || levels > 32) {
    throw IndexFormatError(FormatErrc::kMalformed, "bad level count");
  }
  std::vector<RankBitVector> level_bits;
  level_bits.reserve(levels);
  try {
    for (std::uint32_t l = 0; l < levels; ++l) {
      const auto word_count = r.u64();
      r.check_count(word_count, 8);
      std::vector<std::uint64_t> words(word_count);
      for (auto& word : words) word = r.u64();
      level_bits.emplace_back(std::move(words), text_length);
    }
    if (r.remaining() != 0) {
      throw IndexFormatError(FormatErrc::kMalformed, "unexpected trailing payload");
    }
    if (c_size < kFirstTokenSymbol + 1 ||
        levels != WaveletMatrix::bits_for_alphabet(c_size - 1)) {
      throw IndexFormatError(FormatErrc::kMalformed, "level count does not fit the alphabet");
    }
    FmIndex index(std::move(meta), Vocabulary::from_tokens(std::move(tokens)),
                  std::move(c_table), WaveletMatrix(std::move(level_bits), text_length));
    const auto c = index.c_table();
    for (Symbol s = 0; s < index.alphabet_size(); ++s) {
      if (index.rank(s, text_length) != c[s + 1] - c[s]) {
        throw IndexFormatError(FormatErrc::kMalformed, "c_table disagrees with the BWT");
      }
    }
    return index;
  } catch (const InvalidArgument& e) {
    throw IndexFormatError(FormatErrc::kMalformed, e.what());
  }
}

void save_index(const FmIndex& index, const std::filesystem::path& path) {
  const std::string bytes = serialize(index);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("failed writing " + path.string());
}

FmIndex load_index(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open index " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  return deserialize(bytes);
}

}  // namespace koala::csa
