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

#include "jointbeam/bench.h"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdlib>
#include <string>

#include "jointbeam/errors.h"

namespace jointbeam::bench {

namespace {

std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

template <typename T>
T parse_number(std::string_view field, const char* name) {
  T value{};
  auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || end != field.data() + field.size())
    throw UsageError(std::string("csv: bad value for ") + name + ": \"" + std::string(field) + "\"");
  return value;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

struct DecodePass {
  double proc_seconds = 0.0;
  double joint_sum = 0.0;
  std::uint64_t checksum = 0;
};

DecodePass decode_all(std::span<const Utterance> utterances, const SearchConfig& cfg) {
  DecodePass pass;
  StableHash hash;
  for (const Utterance& u : utterances) {
    const auto start = std::chrono::steady_clock::now();
    SearchResult r = run_search(*u.models, cfg);
    const auto stop = std::chrono::steady_clock::now();
    pass.proc_seconds += std::chrono::duration<double>(stop - start).count();

    pass.joint_sum += r.nbest.empty() ? kLogZero : r.nbest.front().joint;
    for (char ch : nbest_to_json(r.nbest, u.models->vocab).dump()) hash.add_byte(static_cast<std::uint8_t>(ch));
    hash.add_byte('\n');
  }
  pass.checksum = hash.value();
  return pass;
}

}  // namespace

double real_time_factor(double proc_s, double speech_s) {
  if (!(speech_s > 0.0)) throw UsageError("rtf: speech duration must be > 0");
  return proc_s / speech_s;
}

Utterance make_utterance(std::string name, std::shared_ptr<const ModelBundle> models) {
  if (!models) throw UsageError("utterance: null model bundle");
  const auto frames = models->frames();
  if (!frames) throw UsageError("utterance \"" + name + "\": bundle has no time axis");
  Utterance u;
  u.name = std::move(name);
  u.speech_duration_s = static_cast<double>(*frames) * kFrameShiftSeconds;
  u.models = std::move(models);
  return u;
}

std::vector<Utterance> synthetic_suite() {
  std::vector<Utterance> suite;
  for (std::size_t i = 0; i < 8; ++i) {
    HashBundleOptions o;
    o.seed = 1000 + i;
    o.vocab_size = 8;
    o.frames = 24 + 2 * i;
    o.concentration = 4.0;
    suite.push_back(make_utterance("synthetic-" + std::to_string(i),
                                   std::make_shared<const ModelBundle>(make_hash_bundle(o))));
  }
  return suite;
}

Measurement measure_rtf(std::span<const Utterance> utterances, const SearchConfig& cfg,
                        std::size_t repeats) {
  if (utterances.empty()) throw UsageError("measure_rtf: empty utterance set");
  if (repeats == 0) throw UsageError("measure_rtf: repeats must be >= 1");
  cfg.validate();

  double speech = 0.0;
  for (const Utterance& u : utterances) {
    if (!(u.speech_duration_s > 0.0)) throw UsageError("utterance \"" + u.name + "\": duration must be > 0");
    speech += u.speech_duration_s;
  }

  Measurement m;
  const DecodePass warmup = decode_all(utterances, cfg);
  m.output_checksum = warmup.checksum;

  double rtf_sum = 0.0;
  for (std::size_t r = 0; r < repeats; ++r) {
    const DecodePass pass = decode_all(utterances, cfg);
    if (pass.checksum != warmup.checksum) m.deterministic = false;
    rtf_sum += real_time_factor(pass.proc_seconds, speech);
    m.record.wall_time_s += pass.proc_seconds;
  }

  m.record.algorithm = std::string(algorithm_name(cfg.algorithm));
  m.record.k_beam = cfg.k_beam;
  m.record.k_pre = cfg.k_pre;
  m.record.weights = cfg.weights;
  m.record.mean_rtf = rtf_sum / static_cast<double>(repeats);
  m.record.mean_joint_score = warmup.joint_sum / static_cast<double>(utterances.size());
  m.record.repeats = repeats;
  return m;
}

std::vector<WeightChoice> parse_weight_choices(std::string_view spec) {
  std::vector<WeightChoice> out;
  for (std::string_view item : split(spec, ',')) {
    if (item.empty()) throw UsageError("weights: empty entry in \"" + std::string(spec) + "\"");
    if (item == "default") {
      out.push_back({"default", std::nullopt});
    } else if (item == "rnnt-weight-sweep") {
      // mu_att held at 0.5 while weight moves from CTC to RNN-T.
      const DecoderWeights sweep[] = {
          {0.5, 0.0, 0.5, 0.0}, {0.4, 0.1, 0.5, 0.0}, {0.3, 0.2, 0.5, 0.0},
          {0.2, 0.3, 0.5, 0.0}, {0.1, 0.4, 0.5, 0.0},
      };
      for (const auto& w : sweep) out.push_back({"rnnt-weight-sweep", w});
    } else if (item.find(':') != std::string_view::npos) {
      const auto parts = split(item, ':');
      if (parts.size() != 3) throw UsageError("weights: expected mu_ctc:mu_rnnt:mu_att, got \"" + std::string(item) + "\"");
      DecoderWeights w{parse_number<double>(parts[0], "mu_ctc"), parse_number<double>(parts[1], "mu_rnnt"),
                       parse_number<double>(parts[2], "mu_att"), 0.0};
      w.validate();
      out.push_back({std::string(item), w});
    } else {
      out.push_back({std::string(item), find_weight_preset(item)});
    }
  }
  return out;
}

std::vector<BenchRecord> sweep(const SweepGrid& grid, std::span<const Utterance> utterances,
                               const std::function<void(const BenchRecord&)>& on_row) {
  if (grid.algorithms.empty() || grid.k_beams.empty() || grid.weights.empty())
    throw UsageError("sweep: every grid axis needs at least one value");
  std::vector<BenchRecord> rows;
  for (Algorithm alg : grid.algorithms) {
    for (std::size_t k_beam : grid.k_beams) {
      for (const WeightChoice& choice : grid.weights) {
        SearchConfig cfg;
        cfg.algorithm = alg;
        cfg.weights = choice.weights.value_or(default_weights(alg));
        cfg.weights.beta = grid.beta;
        cfg.k_beam = k_beam;
        cfg.k_pre = std::max(grid.k_pre, k_beam);
        const std::string point = "grid point (algorithm=" + std::string(algorithm_name(alg)) +
                                  ", k_beam=" + std::to_string(k_beam) + ", weights=" + choice.name + ")";
        try {
          rows.push_back(measure_rtf(utterances, cfg, grid.repeats).record);
        } catch (const UsageError& e) {
          throw UsageError(point + ": " + e.what());
        } catch (const Error& e) {
          throw Error(point + ": " + e.what());
        }
        if (on_row) on_row(rows.back());
      }
    }
  }
  return rows;
}

std::string_view csv_header() {
  return "algorithm,k_beam,k_pre,mu_ctc,mu_rnnt,mu_att,beta,mean_rtf,mean_joint_score,wall_time_s,repeats";
}

std::string to_csv_row(const BenchRecord& r) {
  std::string row = r.algorithm;
  for (std::size_t v : {r.k_beam, r.k_pre}) row += "," + std::to_string(v);
  for (double v : {r.weights.mu_ctc, r.weights.mu_rnnt, r.weights.mu_att, r.weights.beta, r.mean_rtf,
                   r.mean_joint_score, r.wall_time_s})
    row += "," + format_double(v);
  row += "," + std::to_string(r.repeats);
  return row;
}

BenchRecord parse_csv_row(std::string_view row) {
  if (!row.empty() && row.back() == '\n') row.remove_suffix(1);
  if (!row.empty() && row.back() == '\r') row.remove_suffix(1);
  const auto f = split(row, ',');
  if (f.size() != 11) throw UsageError("csv: expected 11 fields, got " + std::to_string(f.size()));
  BenchRecord r;
  r.algorithm = std::string(f[0]);
  parse_algorithm(r.algorithm);
  r.k_beam = parse_number<std::size_t>(f[1], "k_beam");
  r.k_pre = parse_number<std::size_t>(f[2], "k_pre");
  r.weights.mu_ctc = parse_number<double>(f[3], "mu_ctc");
  r.weights.mu_rnnt = parse_number<double>(f[4], "mu_rnnt");
  r.weights.mu_att = parse_number<double>(f[5], "mu_att");
  r.weights.beta = parse_number<double>(f[6], "beta");
  r.mean_rtf = parse_number<double>(f[7], "mean_rtf");
  r.mean_joint_score = parse_number<double>(f[8], "mean_joint_score");
  r.wall_time_s = parse_number<double>(f[9], "wall_time_s");
  r.repeats = parse_number<std::size_t>(f[10], "repeats");
  return r;
}

std::size_t edit_distance(const TokenSeq& a, const TokenSeq& b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({sub, prev[j] + 1, cur[j - 1] + 1});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

}  // namespace jointbeam::bench
