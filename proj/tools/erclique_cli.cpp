// Command-line front end: a JSON config (--config) plus flag overrides.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "erclique/cli.hpp"

namespace {

using erclique::cli::json;

struct Flags {
  std::string config_path;
  int n = 0, k = 0, s = 0, trials = 0, workers = 0, repetitions = 0, decide_const = 0, expansion_t = 0;
  double c = 0, gamma = 0, greedy_eps = 0, c_const = 0;
  std::uint64_t seed = 0, iterations = 0;
  std::string input, error_model, delta, expansion, output_dir;
  std::vector<std::string> algorithms;
  std::vector<double> cutoffs;
  std::vector<std::uint64_t> faulty_calls;
  std::vector<std::string> cases;
  std::vector<int> sizes;
  bool no_timing = false;
  bool no_compare = false;
};

void add_options(CLI::App& sub, Flags& f) {
  sub.add_option("--config", f.config_path, "JSON config document; flags override its keys");
  sub.add_option("-n,--n", f.n, "vertices");
  sub.add_option("-k,--k", f.k, "clique size");
  sub.add_option("-s,--s", f.s, "uniformity");
  sub.add_option("-c,--c", f.c, "edge probability");
  sub.add_option("--seed", f.seed, "global seed; trial i uses derive_seed(seed, i)");
  sub.add_option("--trials", f.trials, "number of trials");
  sub.add_option("--workers", f.workers, "worker threads");
  sub.add_option("-i,--input", f.input, "hypergraph file");
  sub.add_option("--algorithms", f.algorithms, "count algorithms: brute greedy itgen matmul");
  sub.add_option("--iterations", f.iterations, "greedy walks T (default: the required count)");
  sub.add_option("--greedy-eps", f.greedy_eps, "failure probability used to size T");
  sub.add_option("--cutoffs", f.cutoffs, "itgen cutoffs: one value for every level or one per level");
  sub.add_option("--error-model", f.error_model, "exact | random-flip | adversarial");
  sub.add_option("--delta", f.delta, "random-flip error rate, or 'auto'");
  sub.add_option("--faulty-calls", f.faulty_calls, "oracle call indices answered wrongly (adversarial)");
  sub.add_option("--repetitions", f.repetitions, "self-reduction repetitions per prime");
  sub.add_option("--gamma", f.gamma, "total expansion failure budget");
  sub.add_option("--expansion", f.expansion, "minimal | certified | fixed");
  sub.add_option("--expansion-t", f.expansion_t, "expansion length for --expansion fixed");
  sub.add_option("--c-const", f.c_const, "constant C in the slowdown formulas");
  sub.add_option("--decide-const", f.decide_const, "rounds multiplier for decide");
  sub.add_option("--cases", f.cases, "verify-expansion cases as p:c:eps");
  sub.add_option("--sizes", f.sizes, "bench vertex counts");
  sub.add_option("-o,--output-dir", f.output_dir, "output directory (default: $ERCLIQUE_OUT_DIR, else stdout)");
  sub.add_flag("--no-timing", f.no_timing, "leave the seconds columns empty");
  sub.add_flag("--no-compare", f.no_compare, "skip the brute-force reference in count");
}

json parse_case(const std::string& text) {
  const auto a = text.find(':');
  const auto b = text.find(':', a == std::string::npos ? a : a + 1);
  if (a == std::string::npos || b == std::string::npos) {
    throw erclique::cli::ConfigError("case '" + text + "' must be written p:c:eps");
  }
  try {
    return json::array({std::stoull(text.substr(0, a)), std::stod(text.substr(a + 1, b - a - 1)), std::stod(text.substr(b + 1))});
  } catch (const std::exception&) {
    throw erclique::cli::ConfigError("case '" + text + "' must be written p:c:eps");
  }
}

json build_document(const CLI::App& sub, const Flags& f) {
  json doc = json::object();
  if (!f.config_path.empty()) {
    std::ifstream in(f.config_path);
    if (!in) throw erclique::cli::ConfigError("cannot open config " + f.config_path);
    try {
      doc = json::parse(in);
    } catch (const json::parse_error& e) {
      throw erclique::cli::ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw erclique::cli::ConfigError("config must be a JSON object");
  }
  auto given = [&](const char* name) { return sub.count(name) > 0; };
  if (given("--n")) doc["n"] = f.n;
  if (given("--k")) doc["k"] = f.k;
  if (given("--s")) doc["s"] = f.s;
  if (given("--c")) doc["c"] = f.c;
  if (given("--seed")) doc["seed"] = f.seed;
  if (given("--trials")) doc["trials"] = f.trials;
  if (given("--workers")) doc["workers"] = f.workers;
  if (given("--input")) doc["input"] = f.input;
  if (given("--algorithms")) doc["algorithms"] = f.algorithms;
  if (given("--iterations")) doc["iterations"] = f.iterations;
  if (given("--greedy-eps")) doc["greedy_eps"] = f.greedy_eps;
  if (given("--cutoffs")) {
    doc.erase("cutoff");
    doc["cutoffs"] = f.cutoffs;
  }
  if (given("--error-model")) doc["error_model"] = f.error_model;
  if (given("--delta")) {
    if (f.delta == "auto") {
      doc["delta"] = "auto";
    } else {
      try {
        doc["delta"] = std::stod(f.delta);
      } catch (const std::exception&) {
        throw erclique::cli::ConfigError("--delta expects a number or 'auto'");
      }
    }
  }
  if (given("--faulty-calls")) doc["faulty_calls"] = f.faulty_calls;
  if (given("--repetitions")) doc["repetitions"] = f.repetitions;
  if (given("--gamma")) doc["gamma"] = f.gamma;
  if (given("--expansion")) doc["expansion"] = f.expansion;
  if (given("--expansion-t")) doc["expansion_t"] = f.expansion_t;
  if (given("--c-const")) doc["c_const"] = f.c_const;
  if (given("--decide-const")) doc["decide_const"] = f.decide_const;
  if (given("--cases")) {
    json cases = json::array();
    for (const auto& text : f.cases) cases.push_back(parse_case(text));
    doc["cases"] = cases;
  }
  if (given("--sizes")) doc["sizes"] = f.sizes;
  if (given("--output-dir")) doc["output_dir"] = f.output_dir;
  if (f.no_timing) doc["timing"] = false;
  if (f.no_compare) doc["compare"] = false;
  doc["command"] = sub.get_name();
  return doc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Clique counting on random hypergraphs and worst-case to average-case reductions"};
  app.require_subcommand(1);
  Flags flags;
  const std::vector<std::pair<std::string, std::string>> subcommands{
      {"sample", "draw G(n, c, s) hypergraphs"},
      {"count", "count k-cliques with brute, greedy, itgen or matmul"},
      {"reduce", "worst-case clique count through the average-case oracle"},
      {"parity-reduce", "worst-case clique parity through the average-case oracle"},
      {"decide", "k-clique detection from a parity solver"},
      {"verify-expansion", "check binary-expansion TV against eps"},
      {"bench", "time the counting algorithms"}};
  for (const auto& [name, help] : subcommands) add_options(*app.add_subcommand(name, help), flags);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : erclique::cli::kConfigError;
  }
  const CLI::App* sub = app.get_subcommands().front();
  erclique::cli::ExperimentConfig cfg;
  try {
    cfg = erclique::cli::config_from_json(build_document(*sub, flags));
  } catch (const erclique::cli::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return erclique::cli::kConfigError;
  }
  return erclique::cli::execute(cfg, std::cout, std::cerr);
}
