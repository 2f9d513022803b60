#ifndef ELITERANK_CORPUS_IO_HPP
#define ELITERANK_CORPUS_IO_HPP

#include <functional>
#include <string>
#include <vector>

#include "eliterank/corpus.hpp"

namespace eliterank {

// JSON-lines corpus: one object per line with string fields "id" and "text".
void for_each_jsonl_doc(const std::string& path,
                        const std::function<void(Document)>& fn);
std::vector<Document> read_jsonl(const std::string& path);

// TREC SGML: <DOC><DOCNO>id</DOCNO> ... </DOC>; all other tags are treated
// as token separators.
void for_each_trec_doc(const std::string& path,
                       const std::function<void(Document)>& fn);
std::vector<Document> read_trec_sgml(const std::string& path);

// Versioned binary index file. load_index(save_index(x)) reproduces every
// statistic bit-exactly; files are integrity-checked via the identity hash.
void save_index(const CorpusIndex& index, const std::string& path);
CorpusIndex load_index(const std::string& path);

}  // namespace eliterank

#endif  // ELITERANK_CORPUS_IO_HPP
