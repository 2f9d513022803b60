#ifndef ELITERANK_EVAL_HPP
#define ELITERANK_EVAL_HPP

#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "eliterank/ranking.hpp"

namespace eliterank {

// TREC relevance judgments: "qid 0 docid grade", binary view at grade >= 1.
class Qrels {
 public:
  static Qrels parse_file(const std::string& path);
  static Qrels parse(std::istream& in, const std::string& source_name);

  void add(const std::string& query_id, const std::string& doc_id, int grade);

  bool has_query(const std::string& query_id) const;
  bool relevant(const std::string& query_id, const std::string& doc_id) const;
  std::uint64_t num_relevant(const std::string& query_id) const;
  std::size_t num_queries() const { return judgments_.size(); }

 private:
  // query -> doc -> grade; ordered maps keep every traversal deterministic
  std::map<std::string, std::map<std::string, int>> judgments_;
};

// Per-query metrics follow the usual definitions: AP averages precision at
// the ranks holding relevant documents over the total number of relevant
// documents; RR is the inverse rank of the first relevant document (0 when
// none is retrieved); Recall@k is the judged-relevant fraction retrieved in
// the top k. All three require >= 1 relevant document for the query.
double average_precision(const RankedList& ranked, const Qrels& qrels);
double reciprocal_rank(const RankedList& ranked, const Qrels& qrels);
double recall_at_k(const RankedList& ranked, const Qrels& qrels,
                   std::uint32_t k);

struct QueryMetrics {
  std::string query_id;
  double ap = 0.0;
  double rr = 0.0;
  double recall = 0.0;
  std::uint64_t num_relevant = 0;
};

struct MetricReport {
  std::uint32_t k = 1000;
  std::vector<QueryMetrics> per_query;
  double map = 0.0;
  double mrr = 0.0;
  double mean_recall = 0.0;
  // Run queries that could not be evaluated: absent from the qrels, or
  // judged with zero relevant documents. Excluded from all means.
  std::vector<std::string> skipped_no_judgments;
  std::vector<std::string> skipped_no_relevant;
};

// Parses a TREC run file into per-query lists ordered by the rank column.
// Ranks must form 1..n per query; malformed lines are rejected with their
// line number.
std::vector<RankedList> read_trec_run(const std::string& path);

// Evaluates over the queries present in both the run and the qrels (with at
// least one relevant document); throws when that intersection is empty.
MetricReport evaluate_run(const std::vector<RankedList>& run,
                          const Qrels& qrels, std::uint32_t k);
MetricReport evaluate_run_file(const std::string& run_path,
                               const Qrels& qrels, std::uint32_t k);

void write_report_json(const MetricReport& report, std::ostream& out);
void print_report_table(const MetricReport& report, std::ostream& out);

}  // namespace eliterank

#endif  // ELITERANK_EVAL_HPP
