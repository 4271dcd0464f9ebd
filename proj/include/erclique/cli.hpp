#pragma once

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "erclique/erclique.hpp"
#include "json.hpp"

namespace erclique::cli {

using nlohmann::json;

inline constexpr const char* kOutDirEnv = "ERCLIQUE_OUT_DIR";

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Process exit codes.
enum ExitCode : int { kOk = 0, kFailure = 1, kConfigError = 2, kInputError = 3, kCutoffExceeded = 4 };

struct ExpansionCase {
  std::uint64_t p = 0;
  double c = 0;
  double eps = 0;
};

struct ExperimentConfig {
  std::string command;
  int n = 8;
  int k = 3;
  int s = 2;
  double c = 0.5;
  std::uint64_t seed = 1;
  int trials = 1;
  int workers = 1;
  std::string input;
  std::vector<std::string> algorithms{"brute"};
  std::optional<std::uint64_t> iterations;
  double greedy_eps = 0.5;
  std::vector<double> cutoffs;
  std::string error_model = "exact";
  std::optional<double> delta;  // empty: the tolerance 1 / (4 B^D 2^k)
  std::vector<std::uint64_t> faulty_calls;
  int repetitions = 5;
  double gamma = 0.5;
  std::string expansion = "minimal";
  int expansion_t = 0;
  double c_const = 1.0;
  int decide_const = 8;
  std::vector<ExpansionCase> cases;
  std::vector<int> sizes;
  std::string output_dir;
  bool timing = true;
  bool compare = true;
};

namespace detail {

template <class T>
void read_key(const json& doc, const char* key, T& out) {
  if (!doc.contains(key)) return;
  try {
    out = doc.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config key '") + key + "': " + e.what());
  }
}

}  // namespace detail

inline ExperimentConfig config_from_json(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  static const std::vector<std::string> known{
      "command", "n",          "k",          "s",          "c",           "seed",     "trials",
      "workers", "input",      "algorithms", "iterations", "greedy_eps",  "cutoff",   "cutoffs",
      "error_model", "delta",  "faulty_calls", "repetitions", "gamma",    "expansion", "expansion_t",
      "c_const", "decide_const", "cases",    "sizes",      "output_dir",  "timing",   "compare"};
  for (const auto& item : doc.items()) {
    if (std::find(known.begin(), known.end(), item.key()) == known.end()) {
      throw ConfigError("unknown config key '" + item.key() + "'");
    }
  }
  ExperimentConfig cfg;
  detail::read_key(doc, "command", cfg.command);
  detail::read_key(doc, "n", cfg.n);
  detail::read_key(doc, "k", cfg.k);
  detail::read_key(doc, "s", cfg.s);
  detail::read_key(doc, "c", cfg.c);
  detail::read_key(doc, "seed", cfg.seed);
  detail::read_key(doc, "trials", cfg.trials);
  detail::read_key(doc, "workers", cfg.workers);
  detail::read_key(doc, "input", cfg.input);
  if (doc.contains("algorithms") && doc["algorithms"].is_string()) {
    cfg.algorithms = {doc["algorithms"].get<std::string>()};
  } else {
    detail::read_key(doc, "algorithms", cfg.algorithms);
  }
  if (doc.contains("iterations") && !doc["iterations"].is_null()) {
    std::uint64_t t = 0;
    detail::read_key(doc, "iterations", t);
    cfg.iterations = t;
  }
  detail::read_key(doc, "greedy_eps", cfg.greedy_eps);
  if (doc.contains("cutoff")) {
    double single = 0;
    detail::read_key(doc, "cutoff", single);
    cfg.cutoffs = {single};
  }
  detail::read_key(doc, "cutoffs", cfg.cutoffs);
  detail::read_key(doc, "error_model", cfg.error_model);
  if (doc.contains("delta")) {
    const auto& d = doc["delta"];
    if (d.is_string() && d.get<std::string>() == "auto") {
      cfg.delta.reset();
    } else if (d.is_number()) {
      cfg.delta = d.get<double>();
    } else {
      throw ConfigError("config key 'delta': expected a number or \"auto\"");
    }
  }
  detail::read_key(doc, "faulty_calls", cfg.faulty_calls);
  detail::read_key(doc, "repetitions", cfg.repetitions);
  detail::read_key(doc, "gamma", cfg.gamma);
  detail::read_key(doc, "expansion", cfg.expansion);
  detail::read_key(doc, "expansion_t", cfg.expansion_t);
  detail::read_key(doc, "c_const", cfg.c_const);
  detail::read_key(doc, "decide_const", cfg.decide_const);
  if (doc.contains("cases")) {
    if (!doc["cases"].is_array()) throw ConfigError("config key 'cases': expected an array");
    for (const auto& item : doc["cases"]) {
      ExpansionCase ec;
      try {
        if (item.is_array() && item.size() == 3) {
          ec = {item[0].get<std::uint64_t>(), item[1].get<double>(), item[2].get<double>()};
        } else if (item.is_object()) {
          ec = {item.at("p").get<std::uint64_t>(), item.at("c").get<double>(), item.at("eps").get<double>()};
        } else {
          throw ConfigError("config key 'cases': each case is [p, c, eps] or {p, c, eps}");
        }
      } catch (const json::exception& e) {
        throw ConfigError(std::string("config key 'cases': ") + e.what());
      }
      cfg.cases.push_back(ec);
    }
  }
  detail::read_key(doc, "sizes", cfg.sizes);
  detail::read_key(doc, "output_dir", cfg.output_dir);
  detail::read_key(doc, "timing", cfg.timing);
  detail::read_key(doc, "compare", cfg.compare);
  return cfg;
}

inline ExpansionLength expansion_length(const ExperimentConfig& cfg) {
  if (cfg.expansion == "minimal") return {ExpansionLength::Policy::minimal, 0};
  if (cfg.expansion == "certified") return {ExpansionLength::Policy::certified, 0};
  if (cfg.expansion == "fixed") return {ExpansionLength::Policy::fixed, cfg.expansion_t};
  throw ConfigError("expansion must be one of minimal, certified, fixed");
}

inline const std::vector<std::string>& commands() {
  static const std::vector<std::string> names{"sample", "count", "reduce", "parity-reduce", "decide", "verify-expansion", "bench"};
  return names;
}

// Range checks shared by every command, plus the ones specific to cfg.command.
inline void validate(const ExperimentConfig& cfg) {
  const auto& names = commands();
  if (std::find(names.begin(), names.end(), cfg.command) == names.end()) {
    throw ConfigError("unknown command '" + cfg.command + "'");
  }
  if (!(cfg.c > 0.0 && cfg.c < 1.0)) throw ConfigError("c must lie in (0, 1)");
  if (cfg.s < 2 || cfg.s > kMaxUniformity) throw ConfigError("s must lie in [2, 8]");
  if (cfg.k < cfg.s) throw ConfigError("k must be at least s");
  if (cfg.k > 20) throw ConfigError("k must be at most 20");
  if (cfg.input.empty() && cfg.n < cfg.k && cfg.command != "verify-expansion" && cfg.command != "bench") {
    throw ConfigError("n must be at least k");
  }
  if (cfg.trials < 1) throw ConfigError("trials must be at least 1");
  if (cfg.workers < 1) throw ConfigError("workers must be at least 1");
  if (cfg.repetitions < 1) throw ConfigError("repetitions must be at least 1");
  if (!(cfg.gamma > 0.0 && cfg.gamma <= 1.0)) throw ConfigError("gamma must lie in (0, 1]");
  if (!(cfg.greedy_eps > 0.0 && cfg.greedy_eps < 1.0)) throw ConfigError("greedy_eps must lie in (0, 1)");
  if (!(cfg.c_const > 0.0)) throw ConfigError("c_const must be positive");
  if (cfg.decide_const < 1) throw ConfigError("decide_const must be at least 1");
  if (cfg.expansion_t < 0) throw ConfigError("expansion_t must be nonnegative");
  (void)expansion_length(cfg);
  if (cfg.error_model != "exact" && cfg.error_model != "random-flip" && cfg.error_model != "adversarial") {
    throw ConfigError("error_model must be one of exact, random-flip, adversarial");
  }
  if (cfg.delta && !(*cfg.delta >= 0.0 && *cfg.delta <= 1.0)) throw ConfigError("delta must lie in [0, 1]");
  for (double v : cfg.cutoffs) {
    if (!(v > 0.0)) throw ConfigError("cutoffs must be positive");
  }
  if (cfg.iterations && *cfg.iterations < 1) throw ConfigError("iterations must be at least 1");
  for (const auto& a : cfg.algorithms) {
    if (a != "brute" && a != "greedy" && a != "itgen" && a != "matmul") {
      throw ConfigError("unknown algorithm '" + a + "' (expected brute, greedy, itgen, matmul)");
    }
    if (a == "matmul" && (cfg.s != 2 || cfg.k < 3)) throw ConfigError("matmul requires s = 2 and k >= 3");
  }
  if (cfg.command == "count" && cfg.algorithms.empty()) throw ConfigError("count needs at least one algorithm");
  if (cfg.command == "verify-expansion") {
    if (cfg.cases.empty()) throw ConfigError("verify-expansion needs at least one (p, c, eps) case");
    for (const auto& ec : cfg.cases) {
      if (ec.p < 3 || !is_prime(ec.p)) throw ConfigError("verify-expansion: p must be an odd prime");
      if (!(ec.c > 0.0 && ec.c < 1.0)) throw ConfigError("verify-expansion: c must lie in (0, 1)");
      if (!(ec.eps > 0.0 && ec.eps < 1.0)) throw ConfigError("verify-expansion: eps must lie in (0, 1)");
    }
  }
  if (cfg.command == "bench") {
    for (int n : cfg.sizes) {
      if (n < cfg.k) throw ConfigError("bench: every size must be at least k");
    }
  }
}

// ---- output ----------------------------------------------------------------

inline std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

inline std::string csv_quote(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

struct CsvTable {
  std::string name;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string to_string() const {
    std::string out;
    auto line = [&](const std::vector<std::string>& fields) {
      for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out += ',';
        out += csv_quote(fields[i]);
      }
      out += '\n';
    };
    line(header);
    for (const auto& r : rows) {
      if (r.size() != header.size()) throw std::logic_error("csv row width differs from header");
      line(r);
    }
    return out;
  }
};

struct RunOutput {
  std::vector<CsvTable> tables;
  std::vector<std::pair<std::string, json>> documents;
  std::vector<std::pair<std::string, std::string>> files;
  std::string summary;
};

// Flag or config value first, then the environment variable; empty means stdout.
inline std::string resolve_output_dir(const ExperimentConfig& cfg) {
  if (!cfg.output_dir.empty()) return cfg.output_dir;
  if (const char* env = std::getenv(kOutDirEnv)) return env;
  return {};
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

// Without an output directory, tables go to `console` and documents are dropped.
inline void emit(const RunOutput& run, const std::string& out_dir, std::ostream& console, std::ostream& log) {
  if (out_dir.empty()) {
    for (const auto& t : run.tables) console << t.to_string();
    for (const auto& [name, text] : run.files) console << text;
  } else {
    std::filesystem::create_directories(out_dir);
    const std::filesystem::path dir(out_dir);
    for (const auto& t : run.tables) write_text(dir / (t.name + ".csv"), t.to_string());
    for (const auto& [name, doc] : run.documents) write_text(dir / name, doc.dump(2) + "\n");
    for (const auto& [name, text] : run.files) write_text(dir / name, text);
    log << "wrote " << run.tables.size() + run.documents.size() + run.files.size() << " file(s) to " << out_dir << '\n';
  }
  if (!run.summary.empty()) log << run.summary << '\n';
}

// ---- execution helpers -----------------------------------------------------

// Runs fn(0..count-1) on `workers` threads; results come back in index order.
template <class Fn>
auto parallel_map(std::size_t count, int workers, Fn fn) -> std::vector<decltype(fn(std::size_t{0}))> {
  using R = decltype(fn(std::size_t{0}));
  std::vector<std::optional<R>> slots(count);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        slots[i].emplace(fn(i));
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = count;
        return;
      }
    }
  };
  const std::size_t threads = std::min<std::size_t>(static_cast<std::size_t>(std::max(workers, 1)), std::max<std::size_t>(count, 1));
  if (threads <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);
  std::vector<R> out;
  out.reserve(count);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

inline std::uint64_t trial_seed(const ExperimentConfig& cfg, std::size_t trial) { return derive_seed(cfg.seed, trial); }

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count(); }

 private:
  std::chrono::steady_clock::time_point start_;
};

inline std::string timing_field(const ExperimentConfig& cfg, double seconds) {
  return cfg.timing ? format_double(seconds) : std::string();
}

// The input file if one is configured; otherwise the adversarial suite followed
// by G(n, 1/2, s) samples, one per trial.
inline std::vector<NamedHypergraph> reduction_inputs(const ExperimentConfig& cfg) {
  if (!cfg.input.empty()) {
    Hypergraph g = load_hypergraph(cfg.input);
    if (g.n() < cfg.k) throw ConfigError("input has fewer than k vertices");
    if (g.s() != cfg.s) throw ConfigError("input uniformity differs from s");
    return {{cfg.input, std::move(g)}};
  }
  return worst_case_inputs(cfg.n, cfg.s, cfg.k, static_cast<std::size_t>(cfg.trials), cfg.seed);
}

inline PipelineConfig pipeline_config(const ExperimentConfig& cfg) {
  PipelineConfig p;
  p.repetitions = cfg.repetitions;
  p.gamma = cfg.gamma;
  p.expansion = expansion_length(cfg);
  return p;
}

// Largest per-edge bit count B over the primes used for (n, k, s, c).
inline int max_expansion_bits(const ExperimentConfig& cfg, int n) {
  const EdgeIndex index(n, cfg.k, cfg.s);
  const double eps = cfg.gamma / static_cast<double>(index.size());
  int bits = 0;
  for (std::uint64_t p : select_primes(n, cfg.k, cfg.s)) {
    bits = std::max(bits, choose_expansion_t(p, cfg.c, eps, expansion_length(cfg)) + 1);
  }
  return bits;
}

// Error rate at which every evaluation round stays correct with probability 3/4:
// 1 / (4 B^D 2^k) with B the bit count and D = C(k, s).
inline double tolerance_delta(int bits, int k, int s) {
  const double d = static_cast<double>(binomial(static_cast<std::uint64_t>(k), static_cast<std::uint64_t>(s)));
  return 1.0 / (4.0 * std::pow(static_cast<double>(bits), d) * std::ldexp(1.0, k));
}

inline AverageCaseOracle make_oracle(const ExperimentConfig& cfg, double delta, std::uint64_t seed) {
  if (cfg.error_model == "random-flip") return AverageCaseOracle::random_flip(delta, seed);
  if (cfg.error_model == "adversarial") return AverageCaseOracle::adversarial(cfg.faulty_calls);
  return AverageCaseOracle::exact();
}

inline json report_to_json(const ReductionReport& r, const std::string& input, bool timing) {
  json per_prime = json::array();
  for (const auto& p : r.per_prime) {
    json votes = json::array();
    for (const auto& v : p.votes) votes.push_back(v ? json(*v) : json(nullptr));
    per_prime.push_back({{"prime", p.prime},
                         {"bits", p.bits},
                         {"votes", votes},
                         {"residue", p.residue ? json(*p.residue) : json(nullptr)},
                         {"vote_margin", p.vote_margin},
                         {"sampler_failures", p.sampler_failures}});
  }
  json doc{{"input", input},
           {"n", r.n},
           {"k", r.k},
           {"s", r.s},
           {"c", r.c},
           {"seed", r.seed},
           {"count", r.count.str()},
           {"reference", r.reference ? json(r.reference->str()) : json(nullptr)},
           {"residues", {{"primes", r.residues.primes}, {"residues", r.residues.residues}}},
           {"per_prime", per_prime},
           {"oracle_calls", r.oracle_calls},
           {"injected_errors", r.injected_errors},
           {"decoded", r.decoded},
           {"succeeded", r.succeeded}};
  if (timing) doc["seconds"] = r.seconds;
  return doc;
}

inline std::string trial_name(const char* prefix, std::size_t trial) {
  std::ostringstream os;
  os << prefix << '-';
  os.width(4);
  os.fill('0');
  os << trial << ".json";
  return os.str();
}

inline std::string bool_field(bool b) { return b ? "true" : "false"; }

// ---- runners ---------------------------------------------------------------

// Without an output directory a single sample is written to stdout as a hypergraph file.
inline RunOutput run_sample(const ExperimentConfig& cfg) {
  const bool to_console = resolve_output_dir(cfg).empty();
  if (to_console && cfg.trials > 1) throw ConfigError("sample with several trials needs an output directory");
  RunOutput out;
  CsvTable table{"sample", {"trial", "seed", "n", "s", "c", "edges", "file"}, {}};
  for (int i = 0; i < cfg.trials; ++i) {
    const std::uint64_t seed = trial_seed(cfg, static_cast<std::size_t>(i));
    const Hypergraph g = sample_er(cfg.n, cfg.c, cfg.s, seed);
    std::ostringstream text;
    write_hypergraph(text, g);
    std::ostringstream name;
    name << "sample-";
    name.width(4);
    name.fill('0');
    name << i << ".hg";
    out.files.emplace_back(name.str(), text.str());
    table.rows.push_back({std::to_string(i), std::to_string(seed), std::to_string(cfg.n), std::to_string(cfg.s),
                          format_double(cfg.c), std::to_string(g.edge_count()), name.str()});
  }
  if (!to_console) out.tables.push_back(std::move(table));
  return out;
}

// One row per (trial, algorithm). Trial inputs are G(n, c, s) with per-trial
// seeds, or the configured input file.
inline RunOutput run_count(const ExperimentConfig& cfg) {
  std::vector<std::pair<std::string, Hypergraph>> graphs;
  if (!cfg.input.empty()) {
    Hypergraph g = load_hypergraph(cfg.input);
    if (g.s() != cfg.s) throw ConfigError("input uniformity differs from s");
    graphs.emplace_back(cfg.input, std::move(g));
  } else {
    for (int i = 0; i < cfg.trials; ++i) {
      graphs.emplace_back("er", sample_er(cfg.n, cfg.c, cfg.s, trial_seed(cfg, static_cast<std::size_t>(i))));
    }
  }
  CsvTable table{"count",
                 {"trial", "seed", "input", "algorithm", "n", "s", "k", "c", "count", "reference", "agree", "iterations",
                  "cutoffs", "seconds"},
                 {}};
  auto rows = parallel_map(graphs.size(), cfg.workers, [&](std::size_t i) {
    const Hypergraph& g = graphs[i].second;
    const std::uint64_t seed = trial_seed(cfg, i);
    std::string reference;
    if (cfg.compare) reference = brute_force_count(g, cfg.k).str();
    std::vector<std::vector<std::string>> out;
    for (const auto& algo : cfg.algorithms) {
      std::string iterations;
      std::string cutoffs;
      Stopwatch clock;
      std::string count;
      if (algo == "brute") {
        count = brute_force_count(g, cfg.k).str();
      } else if (algo == "greedy") {
        const std::uint64_t t = cfg.iterations ? *cfg.iterations : required_iterations(g.n(), cfg.c, cfg.k, g.s(), cfg.greedy_eps);
        iterations = std::to_string(t);
        count = std::to_string(greedy_random_sampling(g, cfg.k, t, derive_seed(seed, 1)).members.size());
      } else if (algo == "itgen") {
        std::vector<double> levels;
        const std::size_t want = static_cast<std::size_t>(cfg.k - g.s() + 2);
        if (cfg.cutoffs.empty()) {
          levels = expected_size_cutoffs(g.n(), cfg.c, cfg.k, g.s());
        } else if (cfg.cutoffs.size() == 1) {
          levels.assign(want, cfg.cutoffs[0]);
        } else if (cfg.cutoffs.size() == want) {
          levels = cfg.cutoffs;
        } else {
          throw ConfigError("cutoffs: give one value or one per level s-1..k");
        }
        for (std::size_t j = 0; j < levels.size(); ++j) cutoffs += (j ? ";" : "") + format_double(levels[j]);
        count = std::to_string(it_gen_cliques(g, cfg.k, levels).members.size());
      } else {
        count = matrix_mult_count(g, cfg.k).str();
      }
      const double secs = clock.seconds();
      out.push_back({std::to_string(i), std::to_string(seed), graphs[i].first, algo, std::to_string(g.n()),
                     std::to_string(g.s()), std::to_string(cfg.k), format_double(cfg.c), count, reference,
                     cfg.compare ? bool_field(count == reference) : std::string(), iterations, cutoffs,
                     timing_field(cfg, secs)});
    }
    return out;
  });
  std::size_t agree = 0;
  std::size_t compared = 0;
  for (auto& group : rows) {
    for (auto& r : group) {
      if (cfg.compare) {
        ++compared;
        if (r[10] == "true") ++agree;
      }
      table.rows.push_back(std::move(r));
    }
  }
  RunOutput out;
  out.tables.push_back(std::move(table));
  if (cfg.compare) out.summary = "agreement " + std::to_string(agree) + "/" + std::to_string(compared);
  return out;
}

inline RunOutput run_reduce(const ExperimentConfig& cfg) {
  const auto inputs = reduction_inputs(cfg);
  const PipelineConfig pipeline = pipeline_config(cfg);
  const int n = inputs.front().graph.n();
  const double delta = cfg.delta ? *cfg.delta : tolerance_delta(max_expansion_bits(cfg, n), cfg.k, cfg.s);
  auto reports = parallel_map(inputs.size(), cfg.workers, [&](std::size_t i) {
    const std::uint64_t seed = trial_seed(cfg, i);
    AverageCaseOracle oracle = make_oracle(cfg, delta, derive_seed(seed, 2));
    return to_er_count(inputs[i].graph, cfg.k, oracle, cfg.c, pipeline, seed, brute_force_count(inputs[i].graph, cfg.k));
  });
  RunOutput out;
  CsvTable table{"reduce",
                 {"trial", "input", "seed", "n", "s", "k", "c", "error_model", "delta", "count", "reference",
                  "succeeded", "decoded", "oracle_calls", "injected_errors", "min_vote_margin", "seconds"},
                 {}};
  double successes = 0;
  double calls = 0;
  double errors = 0;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const auto& r = reports[i];
    int margin = std::numeric_limits<int>::max();
    for (const auto& p : r.per_prime) margin = std::min(margin, p.vote_margin);
    table.rows.push_back({std::to_string(i), inputs[i].name, std::to_string(r.seed), std::to_string(r.n),
                          std::to_string(r.s), std::to_string(r.k), format_double(r.c), cfg.error_model,
                          format_double(cfg.error_model == "random-flip" ? delta : 0.0), r.count.str(),
                          r.reference->str(), bool_field(r.succeeded), bool_field(r.decoded),
                          std::to_string(r.oracle_calls), std::to_string(r.injected_errors), std::to_string(margin),
                          timing_field(cfg, r.seconds)});
    out.documents.emplace_back(trial_name("reduce-trial", i), report_to_json(r, inputs[i].name, cfg.timing));
    successes += r.succeeded ? 1 : 0;
    calls += static_cast<double>(r.oracle_calls);
    errors += static_cast<double>(r.injected_errors);
  }
  const double trials = static_cast<double>(reports.size());
  CsvTable summary{"reduce-summary",
                   {"trials", "success_rate", "mean_oracle_calls", "mean_injected_errors"},
                   {{std::to_string(reports.size()), format_double(successes / trials), format_double(calls / trials),
                     format_double(errors / trials)}}};
  out.summary = "success rate " + format_double(successes / trials) + " over " + std::to_string(reports.size()) + " trial(s)";
  out.tables.push_back(std::move(table));
  out.tables.push_back(std::move(summary));
  return out;
}

inline RunOutput run_parity_reduce(const ExperimentConfig& cfg) {
  const auto inputs = reduction_inputs(cfg);
  const PipelineConfig pipeline = pipeline_config(cfg);
  const double delta = cfg.delta ? *cfg.delta : 0.0;
  auto reports = parallel_map(inputs.size(), cfg.workers, [&](std::size_t i) {
    const std::uint64_t seed = trial_seed(cfg, i);
    AverageCaseOracle oracle = make_oracle(cfg, delta, derive_seed(seed, 2));
    return to_er_parity(inputs[i].graph, cfg.k, oracle, cfg.c, pipeline, seed, parity_count(inputs[i].graph, cfg.k));
  });
  RunOutput out;
  CsvTable table{"parity-reduce",
                 {"trial", "input", "seed", "n", "s", "k", "c", "bit", "reference", "succeeded", "decoded", "attempts",
                  "extension_degree", "expansion_bits", "oracle_calls", "injected_errors", "seconds"},
                 {}};
  double successes = 0;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const auto& r = reports[i];
    table.rows.push_back({std::to_string(i), inputs[i].name, std::to_string(r.seed), std::to_string(r.n),
                          std::to_string(r.s), std::to_string(r.k), format_double(r.c), std::to_string(r.bit),
                          std::to_string(*r.reference), bool_field(r.succeeded), bool_field(r.decoded),
                          std::to_string(r.attempts), std::to_string(r.extension_degree),
                          std::to_string(r.expansion_bits), std::to_string(r.oracle_calls),
                          std::to_string(r.injected_errors), timing_field(cfg, r.seconds)});
    json doc{{"input", inputs[i].name}, {"n", r.n},           {"k", r.k},
             {"s", r.s},                {"c", r.c},           {"seed", r.seed},
             {"bit", r.bit},            {"reference", *r.reference},
             {"unbiased_path", r.unbiased_path},              {"extension_degree", r.extension_degree},
             {"expansion_bits", r.expansion_bits},            {"attempts", r.attempts},
             {"sampler_failures", r.sampler_failures},        {"oracle_calls", r.oracle_calls},
             {"injected_errors", r.injected_errors},          {"decoded", r.decoded},
             {"succeeded", r.succeeded}};
    if (cfg.timing) doc["seconds"] = r.seconds;
    out.documents.emplace_back(trial_name("parity-trial", i), std::move(doc));
    successes += r.succeeded ? 1 : 0;
  }
  out.summary = "success rate " + format_double(successes / static_cast<double>(reports.size())) + " over " +
                std::to_string(reports.size()) + " trial(s)";
  out.tables.push_back(std::move(table));
  return out;
}

// Parity solver: exact parity of the clique count.
inline RunOutput run_decide(const ExperimentConfig& cfg) {
  const auto inputs = reduction_inputs(cfg);
  auto rows = parallel_map(inputs.size(), cfg.workers, [&](std::size_t i) {
    const Hypergraph& g = inputs[i].graph;
    const std::uint64_t seed = trial_seed(cfg, i);
    std::uint64_t evaluations = 0;
    Stopwatch clock;
    const bool accepted = decide_via_parity(g, cfg.k, parity_count, seed, cfg.decide_const, &evaluations);
    const double secs = clock.seconds();
    const bool present = count_cliques(g, cfg.k) > 0;
    return std::vector<std::string>{std::to_string(i), inputs[i].name, std::to_string(seed), std::to_string(g.n()),
                                    std::to_string(g.s()), std::to_string(cfg.k), bool_field(accepted),
                                    bool_field(present), std::to_string(evaluations), timing_field(cfg, secs)};
  });
  CsvTable table{"decide",
                 {"trial", "input", "seed", "n", "s", "k", "accepted", "has_clique", "evaluations", "seconds"},
                 std::move(rows)};
  RunOutput out;
  out.tables.push_back(std::move(table));
  return out;
}

inline RunOutput run_verify_expansion(const ExperimentConfig& cfg) {
  CsvTable table{"verify-expansion",
                 {"p", "c", "eps", "required_t", "bits", "tv", "pass", "closed_form_tv", "closed_form_residual"},
                 {}};
  bool all_pass = true;
  for (const auto& ec : cfg.cases) {
    const double q = bias_bound(ec.c);
    const int t = required_t_mod_p(ec.p, q, ec.eps);
    const auto dist = exact_distribution(ExpansionSpec::uniform(ec.p, q, t, ec.c));
    const double tv = tv_to_uniform(dist);
    const bool pass = tv <= ec.eps;
    all_pass = all_pass && pass;
    std::string closed;
    std::string residual;
    if (ec.c == 0.5) {
      const double cf = closed_form_tv_half(ec.p, t);
      closed = format_double(cf);
      residual = format_double(std::fabs(cf - tv));
    }
    table.rows.push_back({std::to_string(ec.p), format_double(ec.c), format_double(ec.eps), std::to_string(t),
                          std::to_string(t + 1), format_double(tv), bool_field(pass), closed, residual});
  }
  RunOutput out;
  out.tables.push_back(std::move(table));
  out.summary = all_pass ? "all cases pass" : "some cases fail";
  return out;
}

// Mean wall time per algorithm over `trials` samples of G(n, c, s) for each n in sizes.
inline RunOutput run_bench(const ExperimentConfig& cfg) {
  const std::vector<int> sizes = cfg.sizes.empty() ? std::vector<int>{cfg.n} : cfg.sizes;
  CsvTable table{"bench", {"n", "s", "k", "c", "algorithm", "trials", "mean_count", "mean_seconds"}, {}};
  for (int n : sizes) {
    std::vector<Hypergraph> graphs;
    for (int i = 0; i < cfg.trials; ++i) graphs.push_back(sample_er(n, cfg.c, cfg.s, derive_seed(derive_seed(cfg.seed, static_cast<std::uint64_t>(n)), static_cast<std::uint64_t>(i))));
    for (const auto& algo : cfg.algorithms) {
      if (algo == "matmul" && (cfg.s != 2 || cfg.k < 3)) continue;
      double total_count = 0;
      Stopwatch clock;
      for (std::size_t i = 0; i < graphs.size(); ++i) {
        const Hypergraph& g = graphs[i];
        if (algo == "brute") {
          total_count += static_cast<double>(count_cliques(g, cfg.k));
        } else if (algo == "greedy") {
          const std::uint64_t t = cfg.iterations ? *cfg.iterations : required_iterations(n, cfg.c, cfg.k, cfg.s, cfg.greedy_eps);
          total_count += static_cast<double>(greedy_random_sampling(g, cfg.k, t, derive_seed(cfg.seed, i)).members.size());
        } else if (algo == "itgen") {
          total_count += static_cast<double>(it_gen_cliques(g, cfg.k).members.size());
        } else {
          total_count += matrix_mult_count(g, cfg.k).convert_to<double>();
        }
      }
      const double trials = static_cast<double>(graphs.size());
      table.rows.push_back({std::to_string(n), std::to_string(cfg.s), std::to_string(cfg.k), format_double(cfg.c), algo,
                            std::to_string(graphs.size()), format_double(total_count / trials),
                            timing_field(cfg, clock.seconds() / trials)});
    }
  }
  RunOutput out;
  out.tables.push_back(std::move(table));
  return out;
}

inline RunOutput run(const ExperimentConfig& cfg) {
  validate(cfg);
  if (cfg.command == "sample") return run_sample(cfg);
  if (cfg.command == "count") return run_count(cfg);
  if (cfg.command == "reduce") return run_reduce(cfg);
  if (cfg.command == "parity-reduce") return run_parity_reduce(cfg);
  if (cfg.command == "decide") return run_decide(cfg);
  if (cfg.command == "verify-expansion") return run_verify_expansion(cfg);
  return run_bench(cfg);
}

// Runs cfg and writes its output; maps failures to exit codes with a message on `log`.
inline int execute(const ExperimentConfig& cfg, std::ostream& console, std::ostream& log) {
  try {
    const RunOutput out = run(cfg);
    emit(out, resolve_output_dir(cfg), console, log);
    return kOk;
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const ParseError& e) {
    log << "parse error: " << e.what() << '\n';
    return kInputError;
  } catch (const CutoffExceeded& e) {
    log << "itgen: " << e.what() << '\n';
    return kCutoffExceeded;
  } catch (const std::invalid_argument& e) {
    log << "invalid argument: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
    return kFailure;
  }
}

}  // namespace erclique::cli
