#include "eliterank/corpus_io.hpp"

#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace eliterank {

namespace {

std::ifstream open_or_throw(const std::string& path, std::ios::openmode mode) {
  std::ifstream in(path, mode);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  return in;
}

// --- binary primitives, little-endian fixed width ---

void put_u32(std::ostream& out, std::uint32_t v) {
  unsigned char buf[4];
  for (int i = 0; i < 4; ++i) buf[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(buf), 4);
}

void put_u64(std::ostream& out, std::uint64_t v) {
  unsigned char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(buf), 8);
}

void put_str(std::ostream& out, const std::string& s) {
  put_u32(out, static_cast<std::uint32_t>(s.size()));
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::uint32_t get_u32(std::istream& in) {
  unsigned char buf[4];
  in.read(reinterpret_cast<char*>(buf), 4);
  if (!in) throw std::runtime_error("index file: truncated");
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= std::uint32_t{buf[i]} << (8 * i);
  return v;
}

std::uint64_t get_u64(std::istream& in) {
  unsigned char buf[8];
  in.read(reinterpret_cast<char*>(buf), 8);
  if (!in) throw std::runtime_error("index file: truncated");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= std::uint64_t{buf[i]} << (8 * i);
  return v;
}

std::string get_str(std::istream& in) {
  const std::uint32_t len = get_u32(in);
  std::string s(len, '\0');
  in.read(s.data(), len);
  if (!in) throw std::runtime_error("index file: truncated");
  return s;
}

constexpr char kIndexMagic[8] = {'E', 'L', 'R', 'K', 'I', 'D', 'X', '1'};
constexpr std::uint32_t kIndexVersion = 1;

}  // namespace

void for_each_jsonl_doc(const std::string& path,
                        const std::function<void(Document)>& fn) {
  std::ifstream in = open_or_throw(path, std::ios::in);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": invalid JSON: " + e.what());
    }
    if (!obj.is_object() || !obj.contains("id") || !obj["id"].is_string() ||
        !obj.contains("text") || !obj["text"].is_string()) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": expected {\"id\": str, \"text\": str}");
    }
    fn(Document{obj["id"].get<std::string>(), obj["text"].get<std::string>()});
  }
}

std::vector<Document> read_jsonl(const std::string& path) {
  std::vector<Document> docs;
  for_each_jsonl_doc(path, [&](Document d) { docs.push_back(std::move(d)); });
  return docs;
}

namespace {

std::string strip_tags(const std::string& sgml) {
  std::string out;
  out.reserve(sgml.size());
  bool in_tag = false;
  for (const char c : sgml) {
    if (c == '<') {
      in_tag = true;
      out.push_back(' ');
    } else if (c == '>') {
      in_tag = false;
    } else if (!in_tag) {
      out.push_back(c);
    }
  }
  return out;
}

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

}  // namespace

void for_each_trec_doc(const std::string& path,
                       const std::function<void(Document)>& fn) {
  std::ifstream in = open_or_throw(path, std::ios::in);
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string content = buffer.str();

  std::size_t pos = 0;
  while (true) {
    const std::size_t doc_start = content.find("<DOC>", pos);
    if (doc_start == std::string::npos) break;
    const std::size_t doc_end = content.find("</DOC>", doc_start);
    if (doc_end == std::string::npos) {
      throw std::runtime_error(path + ": unterminated <DOC> element");
    }
    const std::string body =
        content.substr(doc_start + 5, doc_end - doc_start - 5);

    const std::size_t no_start = body.find("<DOCNO>");
    const std::size_t no_end = body.find("</DOCNO>");
    if (no_start == std::string::npos || no_end == std::string::npos ||
        no_end < no_start) {
      throw std::runtime_error(path + ": <DOC> without <DOCNO>");
    }
    const std::string doc_id = trim(body.substr(no_start + 7, no_end - no_start - 7));
    std::string rest = body.substr(0, no_start) + " " + body.substr(no_end + 8);
    fn(Document{doc_id, strip_tags(rest)});
    pos = doc_end + 6;
  }
}

std::vector<Document> read_trec_sgml(const std::string& path) {
  std::vector<Document> docs;
  for_each_trec_doc(path, [&](Document d) { docs.push_back(std::move(d)); });
  return docs;
}

void save_index(const CorpusIndex& index, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  const IndexData& d = index.data();

  out.write(kIndexMagic, sizeof(kIndexMagic));
  put_u32(out, kIndexVersion);
  put_u32(out, d.tokenizer.lowercase ? 1 : 0);
  put_u64(out, d.tokenizer.stopwords.size());
  for (const auto& s : d.tokenizer.stopwords) put_str(out, s);

  put_u64(out, d.doc_ids.size());
  for (std::size_t i = 0; i < d.doc_ids.size(); ++i) {
    put_str(out, d.doc_ids[i]);
    put_u32(out, d.doc_lens[i]);
  }

  put_u64(out, d.terms.size());
  for (std::size_t t = 0; t < d.terms.size(); ++t) {
    put_str(out, d.terms[t]);
    put_u64(out, d.postings[t].size());
    for (const Posting& p : d.postings[t]) {
      put_u32(out, p.doc);
      put_u32(out, p.tf);
    }
  }
  put_u64(out, index.identity_hash());
  if (!out) throw std::runtime_error("write failed: " + path);
}

CorpusIndex load_index(const std::string& path) {
  std::ifstream in = open_or_throw(path, std::ios::binary);

  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kIndexMagic, sizeof(magic)) != 0) {
    throw std::runtime_error(path + ": not an index file");
  }
  const std::uint32_t version = get_u32(in);
  if (version != kIndexVersion) {
    throw std::runtime_error(path + ": unsupported index version " +
                             std::to_string(version));
  }

  IndexData d;
  d.tokenizer.lowercase = get_u32(in) != 0;
  const std::uint64_t n_stop = get_u64(in);
  for (std::uint64_t i = 0; i < n_stop; ++i) {
    d.tokenizer.stopwords.insert(get_str(in));
  }

  const std::uint64_t n_docs = get_u64(in);
  d.doc_ids.reserve(n_docs);
  d.doc_lens.reserve(n_docs);
  for (std::uint64_t i = 0; i < n_docs; ++i) {
    d.doc_ids.push_back(get_str(in));
    d.doc_lens.push_back(get_u32(in));
  }

  const std::uint64_t n_terms = get_u64(in);
  d.terms.reserve(n_terms);
  d.postings.reserve(n_terms);
  for (std::uint64_t t = 0; t < n_terms; ++t) {
    d.terms.push_back(get_str(in));
    const std::uint64_t n_postings = get_u64(in);
    std::vector<Posting> plist;
    plist.reserve(n_postings);
    for (std::uint64_t p = 0; p < n_postings; ++p) {
      const std::uint32_t doc = get_u32(in);
      const std::uint32_t tf = get_u32(in);
      plist.push_back({doc, tf});
    }
    d.postings.push_back(std::move(plist));
  }
  const std::uint64_t stored_hash = get_u64(in);

  CorpusIndex index(std::move(d));
  if (index.identity_hash() != stored_hash) {
    throw std::runtime_error(path + ": identity hash mismatch (corrupt file)");
  }
  return index;
}

}  // namespace eliterank
