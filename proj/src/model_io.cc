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

#include "jointbeam/model_io.h"

#include <fstream>
#include <sstream>
#include <string>

#include "jointbeam/errors.h"

namespace jointbeam {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw LoadError(where + ": " + what);
}

const json& require(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) fail(where, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) fail(where, std::string("missing field \"") + key + "\"");
  return *it;
}

std::size_t get_size(const json& obj, const char* key, const std::string& where) {
  const json& v = require(obj, key, where);
  if (!v.is_number_unsigned()) fail(where + "." + key, "expected a nonnegative integer");
  return v.get<std::size_t>();
}

double get_double(const json& obj, const char* key, const std::string& where) {
  const json& v = require(obj, key, where);
  if (!v.is_number()) fail(where + "." + key, "expected a number");
  return v.get<double>();
}

std::vector<double> get_probs(const json& v, const std::string& where) {
  if (!v.is_array()) fail(where, "expected an array of probabilities");
  std::vector<double> out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) fail(where + "[" + std::to_string(i) + "]", "expected a number");
    out.push_back(v[i].get<double>());
  }
  return out;
}

std::optional<TokenId> get_last(const json& obj, const Vocabulary& vocab, const std::string& where) {
  const json& v = require(obj, "last", where);
  if (v.is_null()) return std::nullopt;
  if (!v.is_string()) fail(where + ".last", "expected a token label or null");
  const std::string label = v.get<std::string>();
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    if (vocab.tokens()[i] == label) return static_cast<TokenId>(i);
  }
  fail(where + ".last", "\"" + label + "\" is not a regular token");
}

json last_to_json(const std::optional<TokenId>& last, const Vocabulary& vocab) {
  return last ? json(vocab.label(*last)) : json(nullptr);
}

template <typename Fn>
auto rethrow_as_load_error(const std::string& where, Fn&& fn) {
  try {
    return fn();
  } catch (const UsageError& e) {
    throw LoadError(where + ": " + e.what());
  }
}

CtcGrid ctc_from_json(const json& j, const Vocabulary& vocab) {
  if (!j.is_array()) fail("ctc_grid", "expected an array of frames");
  std::vector<std::vector<double>> rows;
  for (std::size_t t = 0; t < j.size(); ++t)
    rows.push_back(get_probs(j[t], "ctc_grid[" + std::to_string(t) + "]"));
  return rethrow_as_load_error("ctc_grid", [&] { return CtcGrid::from_probs(vocab.size(), rows); });
}

json ctc_to_json(const CtcGrid& g) {
  json rows = json::array();
  for (std::size_t t = 0; t < g.frames(); ++t) {
    auto row = g.posterior(t);
    rows.push_back(std::vector<double>(row.begin(), row.end()));
  }
  return rows;
}

TransducerModel transducer_from_json(const json& j, const Vocabulary& vocab) {
  const std::string where = "transducer";
  const json& type = require(j, "type", where);
  const std::size_t frames = get_size(j, "frames", where);
  if (type == "hash") {
    const json& seed = require(j, "seed", where);
    if (!seed.is_number_unsigned()) fail(where + ".seed", "expected a nonnegative integer");
    return rethrow_as_load_error(where, [&] {
      return TransducerModel::from_hash(vocab.size(), frames, seed.get<std::uint64_t>(),
                                        get_double(j, "concentration", where));
    });
  }
  if (type != "table") fail(where + ".type", "expected \"table\" or \"hash\"");
  const std::size_t max_len = get_size(j, "max_len", where);
  const json& rows_json = require(j, "rows", where);
  if (!rows_json.is_array()) fail(where + ".rows", "expected an array");
  std::vector<TransducerTableRow> rows;
  for (std::size_t i = 0; i < rows_json.size(); ++i) {
    const std::string rw = where + ".rows[" + std::to_string(i) + "]";
    TransducerTableRow r;
    r.t = get_size(rows_json[i], "t", rw);
    r.s = get_size(rows_json[i], "s", rw);
    r.last = get_last(rows_json[i], vocab, rw);
    r.probs = get_probs(require(rows_json[i], "probs", rw), rw + ".probs");
    rows.push_back(std::move(r));
  }
  return rethrow_as_load_error(where, [&] {
    return TransducerModel::from_table(vocab.size(), frames, max_len, std::move(rows));
  });
}

json transducer_to_json(const TransducerModel& m, const Vocabulary& vocab) {
  json j;
  if (m.kind() == TransducerModel::Kind::kHash) {
    j["type"] = "hash";
    j["frames"] = m.frames();
    j["seed"] = m.seed();
    j["concentration"] = m.concentration();
    return j;
  }
  j["type"] = "table";
  j["frames"] = m.frames();
  j["max_len"] = *m.max_len();
  json rows = json::array();
  for (const auto& r : m.table_rows()) {
    json row;
    row["t"] = r.t;
    row["s"] = r.s;
    row["last"] = last_to_json(r.last, vocab);
    row["probs"] = r.probs;
    rows.push_back(std::move(row));
  }
  j["rows"] = std::move(rows);
  return j;
}

AttentionModel attention_from_json(const json& j, const Vocabulary& vocab) {
  const std::string where = "attention";
  const json& type = require(j, "type", where);
  if (type == "hash") {
    const json& seed = require(j, "seed", where);
    if (!seed.is_number_unsigned()) fail(where + ".seed", "expected a nonnegative integer");
    return rethrow_as_load_error(where, [&] {
      return AttentionModel::from_hash(vocab.size(), seed.get<std::uint64_t>(),
                                       get_double(j, "concentration", where));
    });
  }
  if (type != "table") fail(where + ".type", "expected \"table\" or \"hash\"");
  const std::size_t max_len = get_size(j, "max_len", where);
  const double floor = j.contains("eos_floor") ? get_double(j, "eos_floor", where) : kDefaultEosFloor;
  const json& rows_json = require(j, "rows", where);
  if (!rows_json.is_array()) fail(where + ".rows", "expected an array");
  std::vector<AttentionTableRow> rows;
  for (std::size_t i = 0; i < rows_json.size(); ++i) {
    const std::string rw = where + ".rows[" + std::to_string(i) + "]";
    AttentionTableRow r;
    r.s = get_size(rows_json[i], "s", rw);
    r.last = get_last(rows_json[i], vocab, rw);
    r.probs = get_probs(require(rows_json[i], "probs", rw), rw + ".probs");
    rows.push_back(std::move(r));
  }
  return rethrow_as_load_error(where, [&] {
    return AttentionModel::from_table(vocab.size(), max_len, std::move(rows), floor);
  });
}

json attention_to_json(const AttentionModel& m, const Vocabulary& vocab) {
  json j;
  if (m.kind() == AttentionModel::Kind::kHash) {
    j["type"] = "hash";
    j["seed"] = m.seed();
    j["concentration"] = m.concentration();
    return j;
  }
  j["type"] = "table";
  j["max_len"] = *m.max_len();
  j["eos_floor"] = m.eos_floor();
  json rows = json::array();
  for (const auto& r : m.table_rows()) {
    json row;
    row["s"] = r.s;
    row["last"] = last_to_json(r.last, vocab);
    row["probs"] = r.probs;
    rows.push_back(std::move(row));
  }
  j["rows"] = std::move(rows);
  return j;
}

std::string token_label(std::size_t i) {
  if (i < 26) return std::string(1, static_cast<char>('a' + i));
  return "t" + std::to_string(i);
}

}  // namespace

std::optional<std::size_t> ModelBundle::frames() const {
  if (ctc) return ctc->frames();
  if (transducer) return transducer->frames();
  return std::nullopt;
}

json vocabulary_to_json(const Vocabulary& vocab) {
  return json{{"tokens", vocab.tokens()}, {"blank", vocab.blank_label()}, {"eos", vocab.eos_label()}};
}

Vocabulary vocabulary_from_json(const json& j) {
  const json& tokens = require(j, "tokens", "vocab");
  if (!tokens.is_array()) fail("vocab.tokens", "expected an array of labels");
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (!tokens[i].is_string()) fail("vocab.tokens[" + std::to_string(i) + "]", "expected a string");
    labels.push_back(tokens[i].get<std::string>());
  }
  const json& blank = require(j, "blank", "vocab");
  const json& eos = require(j, "eos", "vocab");
  if (!blank.is_string()) fail("vocab.blank", "expected a string");
  if (!eos.is_string()) fail("vocab.eos", "expected a string");
  return rethrow_as_load_error("vocab", [&] {
    return Vocabulary(std::move(labels), blank.get<std::string>(), eos.get<std::string>());
  });
}

ModelBundle bundle_from_json(const json& j) {
  if (!j.is_object()) fail("bundle", "expected a JSON object");
  ModelBundle b;
  b.vocab = vocabulary_from_json(require(j, "vocab", "bundle"));
  if (j.contains("ctc_grid")) b.ctc = ctc_from_json(j["ctc_grid"], b.vocab);
  if (j.contains("transducer")) b.transducer = transducer_from_json(j["transducer"], b.vocab);
  if (j.contains("attention")) b.attention = attention_from_json(j["attention"], b.vocab);
  if (b.ctc && b.transducer && b.ctc->frames() != b.transducer->frames())
    fail("transducer.frames", "disagrees with ctc_grid frame count (" +
                                  std::to_string(b.transducer->frames()) + " vs " +
                                  std::to_string(b.ctc->frames()) + ")");
  return b;
}

json bundle_to_json(const ModelBundle& b) {
  json j;
  j["vocab"] = vocabulary_to_json(b.vocab);
  if (b.ctc) j["ctc_grid"] = ctc_to_json(*b.ctc);
  if (b.transducer) j["transducer"] = transducer_to_json(*b.transducer, b.vocab);
  if (b.attention) j["attention"] = attention_to_json(*b.attention, b.vocab);
  return j;
}

ModelBundle load_models(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw LoadError(path.string() + ": cannot open");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw LoadError(path.string() + ": " + e.what());
  }
  try {
    return bundle_from_json(j);
  } catch (const LoadError& e) {
    throw LoadError(path.string() + ": " + e.what());
  }
}

std::string dump_models(const ModelBundle& bundle) { return bundle_to_json(bundle).dump(1) + "\n"; }

void save_models(const ModelBundle& bundle, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(path.string() + ": cannot open for writing");
  out << dump_models(bundle);
}

ModelBundle make_hash_bundle(const HashBundleOptions& o) {
  if (o.vocab_size == 0) throw UsageError("hash bundle: vocab_size must be positive");
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < o.vocab_size; ++i) labels.push_back(token_label(i));
  ModelBundle b;
  b.vocab = Vocabulary(std::move(labels));
  // Distinct per-model seeds so the three decoders disagree.
  if (o.with_ctc) b.ctc = CtcGrid::from_hash(o.vocab_size, o.frames, o.seed * 3 + 0, o.concentration);
  if (o.with_transducer)
    b.transducer = TransducerModel::from_hash(o.vocab_size, o.frames, o.seed * 3 + 1, o.concentration);
  if (o.with_attention) b.attention = AttentionModel::from_hash(o.vocab_size, o.seed * 3 + 2, o.concentration);
  return b;
}

}  // namespace jointbeam
