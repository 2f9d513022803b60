#include "eliterank/eliteness_model.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "eliterank/parallel.hpp"

namespace eliterank {

namespace {

// 17 significant digits round-trip any double exactly.
std::string fmt_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double parse_double(const std::string& s, const std::string& context) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') {
    throw std::runtime_error(context + ": bad number '" + s + "'");
  }
  return v;
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    if (tab == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  return fields;
}

constexpr char kModelMagic[] = "#eliterank-model";
constexpr int kModelVersion = 1;

}  // namespace

const FitResult* ElitenessModel::usable_fit(TermId t) const {
  if (t >= fits.size() || !fits[t].usable) return nullptr;
  return &fits[t];
}

FitReport ElitenessModel::report() const {
  FitReport r;
  r.terms = fits.size();
  for (const FitResult& fit : fits) {
    if (!fit.usable) {
      ++r.failed;
      continue;
    }
    if (fit.converged) ++r.converged;
    if (fit.clamped) ++r.clamped;
    if (fit.mean_fallback) ++r.mean_fallback;
  }
  return r;
}

ElitenessModel fit_model(const CorpusIndex& index, const EMConfig& cfg,
                         unsigned threads) {
  cfg.validate();
  ElitenessModel model;
  model.doc_count = index.doc_count();
  model.corpus_hash = index.identity_hash();
  model.config = cfg;
  model.fits.resize(index.vocab_size());

  parallel_for(index.vocab_size(), threads, [&](std::size_t t) {
    try {
      model.fits[t] = em_fit(index.term_stats(static_cast<TermId>(t)), cfg);
    } catch (const std::exception& e) {
      model.fits[t] = FitResult{};
      model.fits[t].usable = false;
      model.fits[t].error =
          "term '" + index.term(static_cast<TermId>(t)) + "': " + e.what();
    }
  });
  return model;
}

void save_model(const ElitenessModel& model, const CorpusIndex& index,
                const std::string& path) {
  if (model.corpus_hash != index.identity_hash() ||
      model.fits.size() != index.vocab_size()) {
    throw std::invalid_argument("save_model: model was not fitted on this index");
  }
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write file: " + path);

  char hash_hex[17];
  std::snprintf(hash_hex, sizeof(hash_hex), "%016" PRIx64, model.corpus_hash);

  out << kModelMagic << "\tv" << kModelVersion << "\tN=" << model.doc_count
      << "\tcorpus_hash=" << hash_hex
      << "\tmax_iters=" << model.config.max_iters
      << "\ttol=" << fmt_g17(model.config.tol)
      << "\tn_boost=" << model.config.n_boost
      << "\tmu0_init=" << fmt_g17(model.config.mu0_init)
      << "\tmu_floor=" << fmt_g17(model.config.mu_floor)
      << "\tp_clamp=" << fmt_g17(model.config.p_clamp) << "\n";

  for (TermId t = 0; t < model.fits.size(); ++t) {
    const FitResult& fit = model.fits[t];
    if (!fit.usable) continue;  // failed terms are omitted; loaders skip them
    out << index.term(t) << '\t' << fmt_g17(fit.params.mu_elite) << '\t'
        << fmt_g17(fit.params.mu_nonelite) << '\t'
        << fmt_g17(fit.params.p_elite) << '\t' << (fit.converged ? 1 : 0)
        << '\t' << fit.iterations << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

ElitenessModel load_model(const std::string& path, const CorpusIndex& index) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);

  std::string header;
  if (!std::getline(in, header)) {
    throw std::runtime_error(path + ": empty model file");
  }
  const std::vector<std::string> fields = split_tabs(header);
  if (fields.size() != 10 || fields[0] != kModelMagic || fields[1] != "v1") {
    throw std::runtime_error(path + ": not a model file");
  }
  auto value_of = [&](std::size_t i, const std::string& key) {
    const std::string prefix = key + "=";
    if (fields[i].rfind(prefix, 0) != 0) {
      throw std::runtime_error(path + ": malformed header field '" +
                               fields[i] + "'");
    }
    return fields[i].substr(prefix.size());
  };

  ElitenessModel model;
  model.doc_count =
      std::strtoull(value_of(2, "N").c_str(), nullptr, 10);
  model.corpus_hash =
      std::strtoull(value_of(3, "corpus_hash").c_str(), nullptr, 16);
  model.config.max_iters = static_cast<std::uint32_t>(
      std::strtoul(value_of(4, "max_iters").c_str(), nullptr, 10));
  model.config.tol = parse_double(value_of(5, "tol"), path);
  model.config.n_boost = static_cast<std::uint32_t>(
      std::strtoul(value_of(6, "n_boost").c_str(), nullptr, 10));
  model.config.mu0_init = parse_double(value_of(7, "mu0_init"), path);
  model.config.mu_floor = parse_double(value_of(8, "mu_floor"), path);
  model.config.p_clamp = parse_double(value_of(9, "p_clamp"), path);

  if (model.doc_count != index.doc_count() ||
      model.corpus_hash != index.identity_hash()) {
    throw std::runtime_error(path +
                             ": model/index binding mismatch (the model was "
                             "fitted on a different index)");
  }

  model.fits.resize(index.vocab_size());
  for (FitResult& fit : model.fits) {
    fit.usable = false;
    fit.error = "term missing from model file";
  }

  std::string line;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::vector<std::string> rec = split_tabs(line);
    if (rec.size() != 6) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": expected 6 tab-separated fields");
    }
    const auto term = index.term_id(rec[0]);
    if (!term) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": term '" + rec[0] +
                               "' is not in the index vocabulary");
    }
    FitResult& fit = model.fits[*term];
    fit.params.mu_elite = parse_double(rec[1], path);
    fit.params.mu_nonelite = parse_double(rec[2], path);
    fit.params.p_elite = parse_double(rec[3], path);
    fit.converged = rec[4] == "1";
    fit.iterations = static_cast<std::uint32_t>(
        std::strtoul(rec[5].c_str(), nullptr, 10));
    fit.usable = true;
    fit.error.clear();
  }
  return model;
}

}  // namespace eliterank
