// eliterank: index a corpus, fit the per-term 2-Poisson eliteness mixtures,
// rank with the eliteness scorers or the BM25 / language-model baselines,
// and evaluate TREC-format runs.

#include <charconv>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "eliterank/corpus.hpp"
#include "eliterank/corpus_io.hpp"
#include "eliterank/eliteness_model.hpp"
#include "eliterank/eval.hpp"
#include "eliterank/ranking.hpp"
#include "eliterank/synthetic.hpp"

namespace {

using namespace eliterank;

struct TopicsEntry {
  std::string qid;
  std::string text;
};

std::vector<TopicsEntry> read_topics(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::vector<TopicsEntry> topics;
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
    if (!obj.contains("qid") || !obj["qid"].is_string() ||
        !obj.contains("text") || !obj["text"].is_string()) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": expected {\"qid\": str, \"text\": str}");
    }
    topics.push_back({obj["qid"].get<std::string>(),
                      obj["text"].get<std::string>()});
  }
  return topics;
}

std::set<std::string> read_stopwords(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) words.insert(line);
  }
  return words;
}

// shortest decimal digits that round-trip the double
std::string shortest(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

struct IndexArgs {
  std::string input;
  std::string format = "jsonl";
  std::string out;
  bool no_lowercase = false;
  std::string stopwords_path;
};

int cmd_index(const IndexArgs& args) {
  TokenizerConfig cfg;
  cfg.lowercase = !args.no_lowercase;
  if (!args.stopwords_path.empty()) {
    cfg.stopwords = read_stopwords(args.stopwords_path);
  }

  IndexBuilder builder(cfg);
  auto add = [&](Document doc) { builder.add(doc); };
  if (args.format == "jsonl") {
    for_each_jsonl_doc(args.input, add);
  } else if (args.format == "trec") {
    for_each_trec_doc(args.input, add);
  } else {
    throw std::runtime_error("unknown --format '" + args.format +
                             "' (expected jsonl or trec)");
  }
  const CorpusIndex index = builder.finish();
  save_index(index, args.out);

  std::cout << "indexed " << args.input << "\n"
            << "  N:          " << index.doc_count() << "\n"
            << "  vocab:      " << index.vocab_size() << "\n"
            << "  avgDL:      " << index.avg_doc_len() << "\n"
            << "  written to: " << args.out << "\n";
  return 0;
}

struct FitArgs {
  std::string index_path;
  std::string out;
  std::string report_path;
  EMConfig em;
  unsigned threads = 1;
};

int cmd_fit(const FitArgs& args) {
  const CorpusIndex index = load_index(args.index_path);
  const auto start = std::chrono::steady_clock::now();
  const ElitenessModel model = fit_model(index, args.em, args.threads);
  const std::chrono::duration<double> elapsed =
      std::chrono::steady_clock::now() - start;
  save_model(model, index, args.out);

  const FitReport report = model.report();
  std::cout << "fitted " << report.terms << " terms in " << elapsed.count()
            << "s\n"
            << "  converged:     " << report.converged << "\n"
            << "  clamped:       " << report.clamped << "\n"
            << "  init fallback: " << report.mean_fallback << "\n"
            << "  failed:        " << report.failed << "\n"
            << "  written to:    " << args.out << "\n";
  for (const FitResult& fit : model.fits) {
    if (!fit.usable) std::cerr << "fit failure: " << fit.error << "\n";
  }

  if (!args.report_path.empty()) {
    nlohmann::ordered_json doc;
    doc["terms"] = report.terms;
    doc["converged"] = report.converged;
    doc["clamped"] = report.clamped;
    doc["init_fallback"] = report.mean_fallback;
    doc["failed"] = report.failed;
    std::ofstream out(args.report_path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write file: " +
                                       args.report_path);
    out << doc.dump(2) << '\n';
  }
  return 0;
}

struct SearchArgs {
  std::string index_path;
  std::string model_path;
  std::string topics_path;
  std::string scorer = "final";
  double b = 0.64;
  double k1 = 1.2;
  double bm25_b = 0.75;
  double lm_lambda = 0.7;
  double lm_mu = 2000.0;
  std::uint32_t top_k = 1000;
  std::string run_tag;
  std::string out;
};

int cmd_search(const SearchArgs& args) {
  if (args.b < 0.0 || args.b > 1.0) {
    throw std::runtime_error("--b must lie in [0,1]");
  }
  const CorpusIndex index = load_index(args.index_path);
  const ScorerKind kind = parse_scorer(args.scorer);

  const bool needs_model = kind == ScorerKind::kFinal ||
                           kind == ScorerKind::kLogicalInclusion ||
                           kind == ScorerKind::kStrictIdentity;
  ElitenessModel model;
  if (needs_model) {
    if (args.model_path.empty()) {
      throw std::runtime_error("scorer '" + args.scorer +
                               "' requires --model");
    }
    model = load_model(args.model_path, index);
  }

  ScorerOptions opts;
  opts.b = args.b;
  opts.bm25.k1 = args.k1;
  opts.bm25.b = args.bm25_b;
  opts.lm.lambda = args.lm_lambda;
  opts.lm.mu = args.lm_mu;
  const auto scorer =
      make_scorer(kind, index, needs_model ? &model : nullptr, opts);

  const std::string tag =
      args.run_tag.empty() ? "eliterank-" + args.scorer : args.run_tag;

  std::ofstream out(args.out, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write file: " + args.out);

  std::uint64_t queries = 0;
  for (const TopicsEntry& topic : read_topics(args.topics_path)) {
    const QueryRepr q = make_query(topic.qid, topic.text, index);
    if (!q.unknown_terms.empty()) {
      std::cerr << "query " << q.query_id << ": " << q.unknown_terms.size()
                << " term(s) not in vocabulary:";
      for (const auto& t : q.unknown_terms) std::cerr << ' ' << t;
      std::cerr << "\n";
    }
    if (needs_model) {
      if (const std::size_t skipped = count_skipped_terms(q, model)) {
        std::cerr << "query " << q.query_id << ": " << skipped
                  << " term(s) without a usable fit, skipped\n";
      }
    }
    const RankedList ranked = rank(q, index, *scorer, args.top_k);
    write_trec_run(out, ranked, tag);
    ++queries;
  }
  if (!out) throw std::runtime_error("write failed: " + args.out);
  std::cout << "ran " << queries << " queries (scorer=" << args.scorer
            << ", b=" << args.b << ") -> " << args.out << "\n";
  return 0;
}

struct EvalArgs {
  std::string run_path;
  std::string qrels_path;
  std::uint32_t metric_k = 1000;
  std::string out;
};

int cmd_eval(const EvalArgs& args) {
  const Qrels qrels = Qrels::parse_file(args.qrels_path);
  const MetricReport report =
      evaluate_run_file(args.run_path, qrels, args.metric_k);
  print_report_table(report, std::cout);
  if (!args.out.empty()) {
    std::ofstream out(args.out, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write file: " + args.out);
    write_report_json(report, out);
  }
  return 0;
}

struct SweepArgs {
  std::string index_path;
  std::string topics_path;
  std::string qrels_path;
  std::string scorer = "final";
  std::vector<double> b_grid;
  std::vector<std::uint32_t> n_grid;
  EMConfig em;
  std::uint32_t top_k = 1000;
  std::uint32_t metric_k = 1000;
  unsigned threads = 1;
  std::string out;
};

int cmd_sweep(const SweepArgs& args) {
  if (args.b_grid.empty() || args.n_grid.empty()) {
    throw std::runtime_error("sweep: --b-grid and --n-grid must be non-empty");
  }
  for (const double b : args.b_grid) {
    if (b < 0.0 || b > 1.0) {
      throw std::runtime_error("sweep: every b must lie in [0,1]");
    }
  }
  const CorpusIndex index = load_index(args.index_path);
  const Qrels qrels = Qrels::parse_file(args.qrels_path);
  const std::vector<TopicsEntry> topics = read_topics(args.topics_path);
  const ScorerKind kind = parse_scorer(args.scorer);

  std::ofstream out(args.out, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write file: " + args.out);
  out << "b,n,map,mrr,recall_at_k\n";

  char metrics_buf[64];
  for (const std::uint32_t n : args.n_grid) {
    EMConfig em = args.em;
    em.n_boost = n;
    const ElitenessModel model = fit_model(index, em, args.threads);

    for (const double b : args.b_grid) {
      ScorerOptions opts;
      opts.b = b;
      const auto scorer = make_scorer(kind, index, &model, opts);

      std::vector<RankedList> run;
      run.reserve(topics.size());
      for (const TopicsEntry& topic : topics) {
        const QueryRepr q = make_query(topic.qid, topic.text, index);
        run.push_back(rank(q, index, *scorer, args.top_k));
      }
      const MetricReport report = evaluate_run(run, qrels, args.metric_k);
      std::snprintf(metrics_buf, sizeof(metrics_buf), "%.6f,%.6f,%.6f",
                    report.map, report.mrr, report.mean_recall);
      out << shortest(b) << ',' << n << ',' << metrics_buf << '\n';
    }
  }
  if (!out) throw std::runtime_error("write failed: " + args.out);
  std::cout << "sweep (" << args.b_grid.size() << " b values x "
            << args.n_grid.size() << " n values) -> " << args.out << "\n";
  return 0;
}

struct SynthArgs {
  std::string out_docs;
  std::string out_topics;
  std::string out_qrels;
  std::uint64_t n_docs = 10000;
  std::uint32_t n_terms = 10;
  double p = 0.1;
  double mu1 = 5.0;
  double mu0 = 0.2;
  std::uint32_t filler_max = 0;
  std::uint64_t seed = 1;
};

// Seeded 2-Poisson corpus with one query per planted term; a document is
// relevant to a term's query when the generator drew it elite.
int cmd_synth(const SynthArgs& args) {
  SyntheticSpec spec;
  spec.n_docs = args.n_docs;
  spec.seed = args.seed;
  spec.filler_max = args.filler_max;
  char term_buf[32];
  for (std::uint32_t t = 0; t < args.n_terms; ++t) {
    std::snprintf(term_buf, sizeof(term_buf), "term%04u", t);
    spec.terms.push_back({term_buf, args.p, args.mu1, args.mu0});
  }
  const SyntheticCorpus corpus = generate_synthetic(spec);

  {
    std::ofstream out(args.out_docs, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write file: " + args.out_docs);
    for (const Document& doc : corpus.docs) {
      nlohmann::json line = {{"id", doc.id}, {"text", doc.text}};
      out << line.dump() << '\n';
    }
  }
  if (!args.out_topics.empty()) {
    std::ofstream out(args.out_topics, std::ios::trunc);
    if (!out) {
      throw std::runtime_error("cannot write file: " + args.out_topics);
    }
    for (std::size_t t = 0; t < spec.terms.size(); ++t) {
      nlohmann::json line = {{"qid", "q" + std::to_string(t)},
                             {"text", spec.terms[t].term}};
      out << line.dump() << '\n';
    }
  }
  if (!args.out_qrels.empty()) {
    std::ofstream out(args.out_qrels, std::ios::trunc);
    if (!out) {
      throw std::runtime_error("cannot write file: " + args.out_qrels);
    }
    for (std::size_t t = 0; t < spec.terms.size(); ++t) {
      for (std::uint64_t d = 0; d < spec.n_docs; ++d) {
        out << 'q' << t << " 0 " << corpus.docs[d].id << ' '
            << (corpus.elite[t][d] ? 1 : 0) << '\n';
      }
    }
  }
  std::cout << "generated " << spec.n_docs << " docs, " << spec.terms.size()
            << " planted terms (seed=" << args.seed << ") -> "
            << args.out_docs << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"2-Poisson eliteness retrieval engine"};
  app.require_subcommand(1);

  IndexArgs index_args;
  auto* index_cmd =
      app.add_subcommand("index", "Build and persist a corpus index");
  index_cmd->add_option("--input", index_args.input, "Corpus file")
      ->required();
  index_cmd->add_option("--format", index_args.format, "jsonl | trec")
      ->envname("ELITERANK_FORMAT");
  index_cmd->add_option("--out", index_args.out, "Index output path")
      ->required();
  index_cmd->add_flag("--no-lowercase", index_args.no_lowercase,
                      "Keep the original case");
  index_cmd->add_option("--stopwords", index_args.stopwords_path,
                        "Stopword list, one per line");

  FitArgs fit_args;
  auto* fit_cmd =
      app.add_subcommand("fit", "Fit the per-term eliteness mixtures");
  fit_cmd->add_option("--index", fit_args.index_path, "Index path")
      ->required();
  fit_cmd->add_option("--out", fit_args.out, "Model output path")->required();
  fit_cmd->add_option("--report", fit_args.report_path,
                      "Fit report JSON path");
  fit_cmd->add_option("--max-iters", fit_args.em.max_iters, "EM iteration cap")
      ->envname("ELITERANK_MAX_ITERS");
  fit_cmd->add_option("--tol", fit_args.em.tol,
                      "Mean per-doc log-likelihood tolerance")
      ->envname("ELITERANK_TOL");
  fit_cmd->add_option("--n-boost", fit_args.em.n_boost,
                      "Initialization boost for the elite mean")
      ->envname("ELITERANK_N_BOOST");
  fit_cmd->add_option("--mu0-init", fit_args.em.mu0_init,
                      "Non-elite mean initial value");
  fit_cmd->add_option("--threads", fit_args.threads,
                      "Fit worker threads (0 = hardware)")
      ->envname("ELITERANK_THREADS");

  SearchArgs search_args;
  auto* search_cmd = app.add_subcommand("search", "Rank topics into a run");
  search_cmd->add_option("--index", search_args.index_path, "Index path")
      ->required();
  search_cmd->add_option("--model", search_args.model_path,
                         "Model path (eliteness scorers)");
  search_cmd->add_option("--topics", search_args.topics_path,
                         "Topics JSONL: {\"qid\", \"text\"}")
      ->required();
  search_cmd
      ->add_option("--scorer", search_args.scorer,
                   "final | logical-inclusion | strict-identity | idf | "
                   "bm25 | lm-jm | lm-dirichlet")
      ->envname("ELITERANK_SCORER");
  search_cmd
      ->add_option("--b", search_args.b,
                   "Length-normalization strength in [0,1]")
      ->envname("ELITERANK_B");
  search_cmd->add_option("--k1", search_args.k1, "BM25 k1");
  search_cmd->add_option("--bm25-b", search_args.bm25_b, "BM25 b");
  search_cmd->add_option("--lm-lambda", search_args.lm_lambda,
                         "Jelinek-Mercer lambda");
  search_cmd->add_option("--lm-mu", search_args.lm_mu, "Dirichlet mu");
  search_cmd->add_option("--top-k", search_args.top_k, "Run depth")
      ->envname("ELITERANK_TOP_K");
  search_cmd->add_option("--run-tag", search_args.run_tag, "Run tag");
  search_cmd->add_option("--out", search_args.out, "Run output path")
      ->required();

  EvalArgs eval_args;
  auto* eval_cmd = app.add_subcommand("eval", "Score a run against qrels");
  eval_cmd->add_option("--run", eval_args.run_path, "TREC run file")
      ->required();
  eval_cmd->add_option("--qrels", eval_args.qrels_path, "Qrels file")
      ->required();
  eval_cmd->add_option("--metric-k", eval_args.metric_k, "Recall cutoff")
      ->envname("ELITERANK_METRIC_K");
  eval_cmd->add_option("--out", eval_args.out, "Report JSON path");

  SweepArgs sweep_args;
  sweep_args.b_grid = {0.0, 0.25, 0.5, 0.64, 0.75, 1.0};
  sweep_args.n_grid = {3};
  auto* sweep_cmd = app.add_subcommand(
      "sweep", "Grid-evaluate b and the n-boost into a CSV");
  sweep_cmd->add_option("--index", sweep_args.index_path, "Index path")
      ->required();
  sweep_cmd->add_option("--topics", sweep_args.topics_path, "Topics JSONL")
      ->required();
  sweep_cmd->add_option("--qrels", sweep_args.qrels_path, "Qrels file")
      ->required();
  sweep_cmd->add_option("--scorer", sweep_args.scorer, "Scorer selector");
  sweep_cmd->add_option("--b-grid", sweep_args.b_grid,
                        "b values (comma separated)")
      ->delimiter(',');
  sweep_cmd->add_option("--n-grid", sweep_args.n_grid,
                        "n-boost values (comma separated)")
      ->delimiter(',');
  sweep_cmd->add_option("--max-iters", sweep_args.em.max_iters,
                        "EM iteration cap");
  sweep_cmd->add_option("--tol", sweep_args.em.tol, "EM tolerance");
  sweep_cmd->add_option("--top-k", sweep_args.top_k, "Run depth");
  sweep_cmd->add_option("--metric-k", sweep_args.metric_k, "Recall cutoff");
  sweep_cmd->add_option("--threads", sweep_args.threads, "Fit worker threads")
      ->envname("ELITERANK_THREADS");
  sweep_cmd->add_option("--out", sweep_args.out, "CSV output path")
      ->required();

  SynthArgs synth_args;
  auto* synth_cmd = app.add_subcommand(
      "synth", "Generate a seeded 2-Poisson synthetic corpus");
  synth_cmd->group("");  // hidden; used by tests and reproduction scripts
  synth_cmd->add_option("--out-docs", synth_args.out_docs, "Docs JSONL path")
      ->required();
  synth_cmd->add_option("--out-topics", synth_args.out_topics,
                        "Topics JSONL path");
  synth_cmd->add_option("--out-qrels", synth_args.out_qrels, "Qrels path");
  synth_cmd->add_option("--n-docs", synth_args.n_docs, "Documents");
  synth_cmd->add_option("--n-terms", synth_args.n_terms, "Planted terms");
  synth_cmd->add_option("--p", synth_args.p, "Eliteness probability");
  synth_cmd->add_option("--mu1", synth_args.mu1, "Elite Poisson mean");
  synth_cmd->add_option("--mu0", synth_args.mu0, "Non-elite Poisson mean");
  synth_cmd->add_option("--filler-max", synth_args.filler_max,
                        "Max filler tokens per doc");
  synth_cmd->add_option("--seed", synth_args.seed, "RNG seed")
      ->envname("ELITERANK_SEED");

  CLI11_PARSE(app, argc, argv);

  try {
    if (index_cmd->parsed()) return cmd_index(index_args);
    if (fit_cmd->parsed()) return cmd_fit(fit_args);
    if (search_cmd->parsed()) return cmd_search(search_args);
    if (eval_cmd->parsed()) return cmd_eval(eval_args);
    if (sweep_cmd->parsed()) return cmd_sweep(sweep_args);
    if (synth_cmd->parsed()) return cmd_synth(synth_args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
