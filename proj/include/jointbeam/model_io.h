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

#ifndef JOINTBEAM_MODEL_IO_H_
#define JOINTBEAM_MODEL_IO_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "json.hpp"
#include "jointbeam/models.h"
#include "jointbeam/vocabulary.h"

namespace jointbeam {

// Everything a decode needs for one utterance. Any model may be absent.
struct ModelBundle {
  Vocabulary vocab;
  std::optional<CtcGrid> ctc;
  std::optional<TransducerModel> transducer;
  std::optional<AttentionModel> attention;

  // Frame count shared by the CTC grid and the transducer, if either exists.
  std::optional<std::size_t> frames() const;

  friend bool operator==(const ModelBundle&, const ModelBundle&) = default;
};

nlohmann::json vocabulary_to_json(const Vocabulary& vocab);
// Throws LoadError.
Vocabulary vocabulary_from_json(const nlohmann::json& j);

// Bundle layout:
//   {"vocab": {...},
//    "ctc_grid": [[p(tok0), ..., p(blank)], ...],            frames first
//    "transducer": {"type": "table", "frames": T, "max_len": S,
//                   "rows": [{"t", "s", "last", "probs"}, ...]}
//                | {"type": "hash", "frames": T, "seed": n, "concentration": c},
//    "attention":  {"type": "table", "max_len": S, "eos_floor": f,
//                   "rows": [{"s", "last", "probs"}, ...]}
//                | {"type": "hash", "seed": n, "concentration": c}}
// Probabilities are linear; "last" is a token label or null; frames and
// prefix lengths are 0-based. Throws LoadError naming the offending field.
ModelBundle bundle_from_json(const nlohmann::json& j);
nlohmann::json bundle_to_json(const ModelBundle& bundle);

ModelBundle load_models(const std::filesystem::path& path);
// Canonical text form; save(load(save(x))) is byte-identical.
std::string dump_models(const ModelBundle& bundle);
void save_models(const ModelBundle& bundle, const std::filesystem::path& path);

struct HashBundleOptions {
  std::uint64_t seed = 1;
  std::size_t vocab_size = 4;
  std::size_t frames = 8;
  double concentration = 4.0;
  bool with_ctc = true;
  bool with_transducer = true;
  bool with_attention = true;
};

// Hash-backed bundle built on the fly. Token labels are "a", "b", ...; the
// three models use seeds derived from options.seed.
ModelBundle make_hash_bundle(const HashBundleOptions& options);

}  // namespace jointbeam

#endif  // JOINTBEAM_MODEL_IO_H_
