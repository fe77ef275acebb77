// Copyright 2026 The jointbeam Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// jointbeam command-line driver: decode, oracle, bench, weights.

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdint>
#include <exception>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "jointbeam/bench.h"
#include "jointbeam/errors.h"
#include "jointbeam/hypothesis.h"
#include "jointbeam/model_io.h"
#include "jointbeam/oracle.h"
#include "jointbeam/search.h"
#include "jointbeam/stage_weights.h"

namespace {

using namespace jointbeam;

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;
constexpr int kExitGuard = 3;

constexpr const char* kPresetHelp =
    "Weight presets, as (mu_ctc, mu_rnnt, mu_att):\n"
    "  att-driven-default   (0.3, 0.3, 0.4)\n"
    "  ctc-driven-default   (0.1, 0.4, 0.5)\n"
    "  rnnt-driven-default  (0.1, 0.4, 0.5)\n"
    "  ctc-rnnt (0.3, 0.7, 0)   ctc-att (0.3, 0, 0.7)   rnnt-att (0, 0.5, 0.5)\n"
    "Which three-decoder triple suits which driving search is ambiguous.\n"
    "The defaults above are one reading of it; pass --mu-* or --preset to\n"
    "choose otherwise.";

std::string shortest(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

struct ModelSource {
  std::vector<std::string> paths;
  std::optional<std::uint64_t> seed;
  std::size_t vocab_size = 4;
  std::size_t frames = 8;
  double concentration = 4.0;

  void add_options(CLI::App* cmd, bool many) {
    auto* model = many ? cmd->add_option("--model", paths, "Model bundle JSON (repeatable)")
                       : cmd->add_option("--model", paths, "Model bundle JSON")->expected(1);
    auto* s = cmd->add_option("--seed", seed, "Build hash models from this seed instead of a file");
    model->excludes(s);
    s->excludes(model);
    cmd->add_option("--vocab-size", vocab_size, "Regular tokens for --seed models")->capture_default_str();
    cmd->add_option("--frames", frames, "Frames for --seed models")->capture_default_str();
    cmd->add_option("--concentration", concentration, "Logit scale for --seed models")->capture_default_str();
  }

  struct Input {
    std::string name;
    std::shared_ptr<const ModelBundle> models;
  };

  std::vector<Input> load() const {
    std::vector<Input> out;
    if (seed) {
      HashBundleOptions opts;
      opts.seed = *seed;
      opts.vocab_size = vocab_size;
      opts.frames = frames;
      opts.concentration = concentration;
      out.push_back({"seed:" + std::to_string(*seed), std::make_shared<const ModelBundle>(make_hash_bundle(opts))});
      return out;
    }
    if (paths.empty()) throw UsageError("one of --model or --seed is required");
    for (const auto& p : paths) out.push_back({p, std::make_shared<const ModelBundle>(load_models(p))});
    return out;
  }
};

struct DecodeArgs {
  ModelSource source;
  std::string algorithm;
  std::size_t k_beam = 20;
  std::optional<std::size_t> k_pre;
  std::optional<double> mu_ctc, mu_rnnt, mu_att;
  std::optional<std::string> preset;
  double beta = 0.0;
  std::size_t n_best = 1;
  std::optional<std::size_t> max_len;
  std::size_t jobs = 1;
};

int run_decode(const DecodeArgs& a) {
  SearchConfig cfg;
  cfg.algorithm = parse_algorithm(a.algorithm);
  cfg.weights = a.preset ? find_weight_preset(*a.preset) : default_weights(cfg.algorithm);
  if (a.mu_ctc) cfg.weights.mu_ctc = *a.mu_ctc;
  if (a.mu_rnnt) cfg.weights.mu_rnnt = *a.mu_rnnt;
  if (a.mu_att) cfg.weights.mu_att = *a.mu_att;
  cfg.weights.beta = a.beta;
  cfg.k_beam = a.k_beam;
  cfg.k_pre = a.k_pre.value_or(std::max<std::size_t>(30, a.k_beam));
  cfg.n_best = a.n_best;
  cfg.max_output_len = a.max_len;
  if (a.jobs == 0) throw UsageError("--jobs must be at least 1");
  cfg.validate();

  const auto inputs = a.source.load();
  std::vector<std::string> lines(inputs.size());
  std::vector<std::exception_ptr> errors(inputs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < inputs.size(); i = next++) {
      try {
        const SearchResult r = run_search(*inputs[i].models, cfg);
        nlohmann::json out;
        out["input"] = inputs[i].name;
        out["algorithm"] = std::string(algorithm_name(cfg.algorithm));
        out["weights"] = {{"mu_ctc", cfg.weights.mu_ctc},
                          {"mu_rnnt", cfg.weights.mu_rnnt},
                          {"mu_att", cfg.weights.mu_att},
                          {"beta", cfg.weights.beta}};
        out["nbest"] = nbest_to_json(r.nbest, inputs[i].models->vocab);
        lines[i] = out.dump();
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t n_threads = std::min(a.jobs, inputs.size());
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    if (errors[i]) {
      try {
        std::rethrow_exception(errors[i]);
      } catch (const UsageError& e) {
        throw UsageError(inputs[i].name + ": " + e.what());
      } catch (const std::exception& e) {
        throw Error(inputs[i].name + ": " + e.what());
      }
    }
    std::cout << lines[i] << '\n';
  }
  return kExitOk;
}

struct OracleArgs {
  ModelSource source;
  std::size_t max_len = 4;
};

int run_oracle(const OracleArgs& a) {
  const auto inputs = a.source.load();
  const auto report = oracle::verify_bundle(*inputs.front().models, a.max_len);
  std::cout << report.to_json().dump(2) << '\n';
  return report.all_passed() ? kExitOk : kExitRuntime;
}

// {"algorithm=att,ctc", "k_beam=1,20;weights=default"} -> axis -> values
std::map<std::string, std::string> parse_grid(const std::vector<std::string>& specs) {
  std::map<std::string, std::string> axes;
  std::string part;
  for (const auto& spec : specs) {
    std::stringstream ss(spec);
    while (std::getline(ss, part, ';')) {
      if (part.empty()) continue;
      const auto eq = part.find('=');
      if (eq == std::string::npos) throw UsageError("--grid: expected axis=v1,v2 but got \"" + part + "\"");
      const std::string axis = part.substr(0, eq);
      if (axis != "algorithm" && axis != "k_beam" && axis != "weights")
        throw UsageError("--grid: unknown axis \"" + axis + "\" (valid: algorithm, k_beam, weights)");
      axes[axis] = part.substr(eq + 1);
    }
  }
  return axes;
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

struct BenchArgs {
  std::vector<std::string> models;
  std::vector<std::string> grid;
  std::size_t k_pre = 30;
  double beta = 0.0;
  std::size_t repeats = 3;
};

int run_bench(const BenchArgs& a) {
  auto axes = parse_grid(a.grid);
  bench::SweepGrid grid;
  for (const auto& name : split_commas(axes.count("algorithm") ? axes["algorithm"] : "att,ctc,rnnt"))
    grid.algorithms.push_back(parse_algorithm(name));
  for (const auto& k : split_commas(axes.count("k_beam") ? axes["k_beam"] : "1,2,4,8")) {
    std::size_t v = 0;
    auto [p, ec] = std::from_chars(k.data(), k.data() + k.size(), v);
    if (ec != std::errc() || p != k.data() + k.size() || v == 0)
      throw UsageError("--grid: k_beam values must be positive integers, got \"" + k + "\"");
    grid.k_beams.push_back(v);
  }
  grid.weights = bench::parse_weight_choices(axes.count("weights") ? axes["weights"] : "default");
  grid.k_pre = a.k_pre;
  grid.beta = a.beta;
  grid.repeats = a.repeats;

  std::vector<bench::Utterance> utts;
  if (a.models.empty()) {
    utts = bench::synthetic_suite();
  } else {
    for (const auto& p : a.models)
      utts.push_back(bench::make_utterance(p, std::make_shared<const ModelBundle>(load_models(p))));
  }

  std::cout << bench::csv_header() << '\n';
  const auto rows = bench::sweep(grid, utts, [](const bench::BenchRecord& r) {
    std::cout << bench::to_csv_row(r) << std::endl;
  });

  // Beam-score monotonicity is not guaranteed for beam search; report only.
  std::map<std::string, std::vector<const bench::BenchRecord*>> series;
  for (const auto& r : rows) {
    std::ostringstream key;
    key << r.algorithm << ' ' << shortest(r.weights.mu_ctc) << ':' << shortest(r.weights.mu_rnnt) << ':'
        << shortest(r.weights.mu_att);
    series[key.str()].push_back(&r);
  }
  for (auto& [key, recs] : series) {
    std::sort(recs.begin(), recs.end(), [](auto* x, auto* y) { return x->k_beam < y->k_beam; });
    for (std::size_t i = 1; i < recs.size(); ++i) {
      if (recs[i]->mean_joint_score < recs[i - 1]->mean_joint_score)
        std::cerr << "warning: " << key << ": mean joint score drops from k_beam=" << recs[i - 1]->k_beam
                  << " to k_beam=" << recs[i]->k_beam << '\n';
    }
  }
  return kExitOk;
}

int run_weights(const std::vector<int>& epochs) {
  if (epochs.size() != 4) throw UsageError("--epochs needs exactly 4 values");
  const auto w = compute_stage2_weights({epochs[0], epochs[1], epochs[2], epochs[3]});
  std::cout << shortest(w[0]) << ' ' << shortest(w[1]) << ' ' << shortest(w[2]) << ' ' << shortest(w[3]) << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Joint CTC / RNN-T / attention beam search on synthetic posterior models"};
  app.footer(kPresetHelp);
  app.require_subcommand(1);

  DecodeArgs dec;
  auto* decode = app.add_subcommand("decode", "Decode and print the n-best list as JSON (one line per input)");
  dec.source.add_options(decode, true);
  decode->add_option("--algorithm", dec.algorithm, "Driving decoder: att, ctc or rnnt")->required();
  decode->add_option("--k-beam", dec.k_beam, "Main beam size")->capture_default_str();
  decode->add_option("--k-pre", dec.k_pre, "Prebeam size (default 30, or k-beam if larger)");
  decode->add_option("--mu-ctc", dec.mu_ctc, "CTC weight (overrides the preset)");
  decode->add_option("--mu-rnnt", dec.mu_rnnt, "RNN-T weight (overrides the preset)");
  decode->add_option("--mu-att", dec.mu_att, "Attention weight (overrides the preset)");
  decode->add_option("--preset", dec.preset, "Start from a named weight preset");
  decode->add_option("--beta", dec.beta, "Length bonus per token")->capture_default_str();
  decode->add_option("--n-best", dec.n_best, "Hypotheses to print")->capture_default_str();
  decode->add_option("--max-len", dec.max_len, "Maximum output length");
  decode->add_option("--jobs", dec.jobs, "Decode this many inputs in parallel")->capture_default_str();
  decode->footer(kPresetHelp);

  OracleArgs orc;
  auto* oracle_cmd = app.add_subcommand("oracle", "Check scorers and search against brute-force enumeration");
  orc.source.add_options(oracle_cmd, false);
  oracle_cmd->add_option("--max-len", orc.max_len, "Longest output sequence to enumerate")->capture_default_str();

  BenchArgs bch;
  auto* bench_cmd = app.add_subcommand("bench", "Sweep beam sizes and weights, print CSV");
  bench_cmd->add_option("--model", bch.models, "Model bundle JSON (repeatable); default is the synthetic suite");
  bench_cmd->add_option("--grid", bch.grid,
                        "Grid axis as axis=v1,v2 (repeatable, or join axes with ';').\n"
                        "Axes: algorithm (default att,ctc,rnnt), k_beam (default 1,2,4,8),\n"
                        "weights (default: per-algorithm preset; accepts preset names,\n"
                        "rnnt-weight-sweep, or mu_ctc:mu_rnnt:mu_att)");
  bench_cmd->add_option("--k-pre", bch.k_pre, "Prebeam size (raised to k_beam when smaller)")->capture_default_str();
  bench_cmd->add_option("--beta", bch.beta, "Length bonus per token")->capture_default_str();
  bench_cmd->add_option("--repeats", bch.repeats, "Timed repeats per grid point")->capture_default_str();
  bench_cmd->footer(kPresetHelp);

  std::vector<int> epochs;
  auto* weights_cmd = app.add_subcommand("weights", "Stage-two weights from per-decoder epoch counts");
  weights_cmd->add_option("--epochs", epochs, "e1,e2,e3,e4")->required()->delimiter(',')->expected(4);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*decode) return run_decode(dec);
    if (*oracle_cmd) return run_oracle(orc);
    if (*bench_cmd) return run_bench(bch);
    if (*weights_cmd) return run_weights(epochs);
  } catch (const GuardError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitGuard;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}
