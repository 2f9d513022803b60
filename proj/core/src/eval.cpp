#include "eliterank/eval.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace eliterank {

Qrels Qrels::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  return parse(in, path);
}

Qrels Qrels::parse(std::istream& in, const std::string& source_name) {
  Qrels qrels;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string qid, iteration, docid, grade_text;
    if (!(fields >> qid >> iteration >> docid >> grade_text)) {
      throw std::runtime_error(source_name + ":" + std::to_string(line_no) +
                               ": expected 'qid 0 docid grade'");
    }
    std::string extra;
    if (fields >> extra) {
      throw std::runtime_error(source_name + ":" + std::to_string(line_no) +
                               ": trailing fields");
    }
    int grade = 0;
    try {
      std::size_t used = 0;
      grade = std::stoi(grade_text, &used);
      if (used != grade_text.size()) throw std::invalid_argument(grade_text);
    } catch (const std::exception&) {
      throw std::runtime_error(source_name + ":" + std::to_string(line_no) +
                               ": bad relevance grade '" + grade_text + "'");
    }
    if (grade < 0) {
      throw std::runtime_error(source_name + ":" + std::to_string(line_no) +
                               ": negative relevance grade");
    }
    auto& for_query = qrels.judgments_[qid];
    if (!for_query.emplace(docid, grade).second) {
      throw std::runtime_error(source_name + ":" + std::to_string(line_no) +
                               ": duplicate judgment for (" + qid + ", " +
                               docid + ")");
    }
  }
  if (qrels.judgments_.empty()) {
    throw std::runtime_error(source_name + ": no judgments");
  }
  return qrels;
}

void Qrels::add(const std::string& query_id, const std::string& doc_id,
                int grade) {
  if (!judgments_[query_id].emplace(doc_id, grade).second) {
    throw std::invalid_argument("qrels: duplicate judgment for (" + query_id +
                                ", " + doc_id + ")");
  }
}

bool Qrels::has_query(const std::string& query_id) const {
  return judgments_.contains(query_id);
}

bool Qrels::relevant(const std::string& query_id,
                     const std::string& doc_id) const {
  const auto q = judgments_.find(query_id);
  if (q == judgments_.end()) return false;
  const auto d = q->second.find(doc_id);
  return d != q->second.end() && d->second >= 1;
}

std::uint64_t Qrels::num_relevant(const std::string& query_id) const {
  const auto q = judgments_.find(query_id);
  if (q == judgments_.end()) return 0;
  std::uint64_t n = 0;
  for (const auto& [doc, grade] : q->second) {
    if (grade >= 1) ++n;
  }
  return n;
}

double average_precision(const RankedList& ranked, const Qrels& qrels) {
  const std::uint64_t total = qrels.num_relevant(ranked.query_id);
  if (total == 0) {
    throw std::invalid_argument("average_precision: query '" +
                                ranked.query_id + "' has no relevant docs");
  }
  std::uint64_t hits = 0;
  double sum = 0.0;
  std::uint64_t rank_no = 0;
  for (const ScoredDoc& entry : ranked.entries) {
    ++rank_no;
    if (qrels.relevant(ranked.query_id, entry.doc_id)) {
      ++hits;
      sum += static_cast<double>(hits) / static_cast<double>(rank_no);
    }
  }
  return sum / static_cast<double>(total);
}

double reciprocal_rank(const RankedList& ranked, const Qrels& qrels) {
  if (qrels.num_relevant(ranked.query_id) == 0) {
    throw std::invalid_argument("reciprocal_rank: query '" + ranked.query_id +
                                "' has no relevant docs");
  }
  std::uint64_t rank_no = 0;
  for (const ScoredDoc& entry : ranked.entries) {
    ++rank_no;
    if (qrels.relevant(ranked.query_id, entry.doc_id)) {
      return 1.0 / static_cast<double>(rank_no);
    }
  }
  return 0.0;
}

double recall_at_k(const RankedList& ranked, const Qrels& qrels,
                   std::uint32_t k) {
  const std::uint64_t total = qrels.num_relevant(ranked.query_id);
  if (total == 0) {
    throw std::invalid_argument("recall_at_k: query '" + ranked.query_id +
                                "' has no relevant docs");
  }
  std::uint64_t hits = 0;
  std::uint64_t rank_no = 0;
  for (const ScoredDoc& entry : ranked.entries) {
    ++rank_no;
    if (rank_no > k) break;
    if (qrels.relevant(ranked.query_id, entry.doc_id)) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(total);
}

std::vector<RankedList> read_trec_run(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);

  struct Row {
    std::string doc_id;
    std::uint64_t rank;
    double score;
  };
  std::vector<std::string> order;
  std::map<std::string, std::vector<Row>> by_query;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string qid, q0, docid, rank_text, score_text, tag;
    if (!(fields >> qid >> q0 >> docid >> rank_text >> score_text >> tag)) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": expected 'qid Q0 docid rank score tag'");
    }
    Row row;
    try {
      row.rank = std::stoull(rank_text);
      row.score = std::stod(score_text);
    } catch (const std::exception&) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": bad rank or score");
    }
    row.doc_id = docid;
    if (!by_query.contains(qid)) order.push_back(qid);
    by_query[qid].push_back(std::move(row));
  }

  std::vector<RankedList> run;
  run.reserve(order.size());
  for (const std::string& qid : order) {
    auto& rows = by_query[qid];
    std::sort(rows.begin(), rows.end(),
              [](const Row& a, const Row& b) { return a.rank < b.rank; });
    RankedList list;
    list.query_id = qid;
    list.entries.reserve(rows.size());
    std::set<std::string> seen;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].rank != i + 1) {
        throw std::runtime_error(path + ": query '" + qid +
                                 "' ranks are not consecutive from 1");
      }
      if (!seen.insert(rows[i].doc_id).second) {
        throw std::runtime_error(path + ": query '" + qid +
                                 "' retrieves '" + rows[i].doc_id +
                                 "' more than once");
      }
      list.entries.push_back({rows[i].doc_id, rows[i].score});
    }
    run.push_back(std::move(list));
  }
  return run;
}

MetricReport evaluate_run(const std::vector<RankedList>& run,
                          const Qrels& qrels, std::uint32_t k) {
  MetricReport report;
  report.k = k;

  for (const RankedList& list : run) {
    if (!qrels.has_query(list.query_id)) {
      report.skipped_no_judgments.push_back(list.query_id);
      continue;
    }
    const std::uint64_t total = qrels.num_relevant(list.query_id);
    if (total == 0) {
      report.skipped_no_relevant.push_back(list.query_id);
      continue;
    }
    QueryMetrics m;
    m.query_id = list.query_id;
    m.num_relevant = total;
    m.ap = average_precision(list, qrels);
    m.rr = reciprocal_rank(list, qrels);
    m.recall = recall_at_k(list, qrels, k);
    report.per_query.push_back(std::move(m));
  }

  if (report.per_query.empty()) {
    throw std::runtime_error(
        "evaluate_run: no query is present in both the run and the qrels "
        "with at least one relevant document");
  }

  double ap = 0.0, rr = 0.0, recall = 0.0;
  for (const QueryMetrics& m : report.per_query) {
    ap += m.ap;
    rr += m.rr;
    recall += m.recall;
  }
  const auto n = static_cast<double>(report.per_query.size());
  report.map = ap / n;
  report.mrr = rr / n;
  report.mean_recall = recall / n;
  return report;
}

MetricReport evaluate_run_file(const std::string& run_path, const Qrels& qrels,
                               std::uint32_t k) {
  return evaluate_run(read_trec_run(run_path), qrels, k);
}

void write_report_json(const MetricReport& report, std::ostream& out) {
  nlohmann::ordered_json doc;
  doc["k"] = report.k;
  doc["aggregates"] = {
      {"num_queries", report.per_query.size()},
      {"map", report.map},
      {"mrr", report.mrr},
      {"recall_at_k", report.mean_recall},
  };
  auto& rows = doc["per_query"] = nlohmann::ordered_json::array();
  for (const QueryMetrics& m : report.per_query) {
    rows.push_back({
        {"query_id", m.query_id},
        {"ap", m.ap},
        {"rr", m.rr},
        {"recall_at_k", m.recall},
        {"num_relevant", m.num_relevant},
    });
  }
  doc["skipped"] = {
      {"no_judgments", report.skipped_no_judgments},
      {"no_relevant", report.skipped_no_relevant},
  };
  out << doc.dump(2) << '\n';
}

void print_report_table(const MetricReport& report, std::ostream& out) {
  out << std::left << std::setw(12) << "query" << std::right << std::setw(10)
      << "AP" << std::setw(10) << "RR" << std::setw(14)
      << ("Recall@" + std::to_string(report.k)) << '\n';
  char buf[64];
  for (const QueryMetrics& m : report.per_query) {
    std::snprintf(buf, sizeof(buf), "%10.4f%10.4f%14.4f", m.ap, m.rr,
                  m.recall);
    out << std::left << std::setw(12) << m.query_id << buf << '\n';
  }
  std::snprintf(buf, sizeof(buf), "%10.4f%10.4f%14.4f", report.map,
                report.mrr, report.mean_recall);
  out << std::left << std::setw(12) << "all" << buf << '\n';
  if (!report.skipped_no_judgments.empty()) {
    out << "skipped (not in qrels):";
    for (const auto& q : report.skipped_no_judgments) out << ' ' << q;
    out << '\n';
  }
  if (!report.skipped_no_relevant.empty()) {
    out << "skipped (no relevant docs):";
    for (const auto& q : report.skipped_no_relevant) out << ' ' << q;
    out << '\n';
  }
}

}  // namespace eliterank
