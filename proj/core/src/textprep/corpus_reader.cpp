#include "koala/textprep/corpus_reader.hpp"

#include <cstdio>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "koala/textprep/normalize.hpp"

namespace koala::textprep {

ParseError::ParseError(const std::string& what, std::size_t line)
    : Error(line ? "line " + std::to_string(line) + ": " + what : what),
      line_(line) {}

std::string synthetic_doc_id(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "doc-%010zu", index);
  return buf;
}

namespace {

bool is_blank(const std::string& line) {
  return line.find_first_not_of(" \t\r") == std::string::npos;
}

void read_jsonl(std::istream& in, const std::string& corpus_id,
                const DocumentSink& sink) {
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank(line)) continue;
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(repair_utf8(line));
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(std::string("malformed JSON: ") + e.what(), line_no);
    }
    if (!obj.is_object()) throw ParseError("expected a JSON object", line_no);
    auto id = obj.find("doc_id");
    auto text = obj.find("text");
    if (id == obj.end()) throw ParseError("missing field doc_id", line_no);
    if (text == obj.end() || !text->is_string()) {
      throw ParseError("missing string field text", line_no);
    }
    std::string doc_id =
        id->is_string() ? id->get<std::string>() : id->dump();
    if (!seen.insert(doc_id).second) {
      throw ParseError("duplicate doc_id " + doc_id, line_no);
    }
    sink(RawDocument{std::move(doc_id), text->get<std::string>(), corpus_id});
  }
  if (in.bad()) throw ParseError("read error", line_no);
}

void read_plain(std::istream& in, const std::string& corpus_id,
                const DocumentSink& sink) {
  std::string line;
  std::string block;
  std::size_t index = 0;
  auto flush = [&] {
    if (block.empty()) return;
    sink(RawDocument{synthetic_doc_id(index++), repair_utf8(block), corpus_id});
    block.clear();
  };
  while (std::getline(in, line)) {
    if (is_blank(line)) {
      flush();
      continue;
    }
    if (!block.empty()) block.push_back('\n');
    block += line;
  }
  flush();
}

}  // namespace

void read_documents(std::istream& in, InputFormat format,
                    const std::string& corpus_id, const DocumentSink& sink) {
  if (format == InputFormat::kJsonLines) {
    read_jsonl(in, corpus_id, sink);
  } else {
    read_plain(in, corpus_id, sink);
  }
}

std::vector<RawDocument> read_documents(std::istream& in, InputFormat format,
                                        const std::string& corpus_id) {
  std::vector<RawDocument> docs;
  read_documents(in, format, corpus_id,
                 [&docs](RawDocument&& d) { docs.push_back(std::move(d)); });
  return docs;
}

}  // namespace koala::textprep
