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

#include "jointbeam/hypothesis.h"

#include <cmath>
#include <string>

#include "jointbeam/errors.h"

namespace jointbeam {

void DecoderWeights::validate() const {
  for (double mu : {mu_ctc, mu_rnnt, mu_att}) {
    if (!std::isfinite(mu) || mu < 0.0)
      throw UsageError("decoder weights must be finite and nonnegative");
  }
  if (!std::isfinite(beta)) throw UsageError("length penalty must be finite");
  if (!(uses_ctc() || uses_rnnt() || uses_att()))
    throw UsageError("at least one decoder weight must be positive");
}

const std::vector<WeightPreset>& weight_presets() {
  static const std::vector<WeightPreset> presets = {
      {"att-driven-default", {0.3, 0.3, 0.4, 0.0}},
      {"ctc-driven-default", {0.1, 0.4, 0.5, 0.0}},
      {"rnnt-driven-default", {0.1, 0.4, 0.5, 0.0}},
      {"ctc-rnnt", {0.3, 0.7, 0.0, 0.0}},
      {"ctc-att", {0.3, 0.0, 0.7, 0.0}},
      {"rnnt-att", {0.0, 0.5, 0.5, 0.0}},
  };
  return presets;
}

DecoderWeights find_weight_preset(std::string_view name) {
  std::string valid;
  for (const auto& p : weight_presets()) {
    if (p.name == name) return p.weights;
    if (!valid.empty()) valid += ", ";
    valid += p.name;
  }
  throw UsageError("unknown weight preset \"" + std::string(name) + "\" (valid: " + valid + ")");
}

namespace {

LogProb weighted(double mu, const std::optional<LogProb>& score, const char* name) {
  if (mu == 0.0) return 0.0;
  if (!score) throw UsageError(std::string("joint_score: ") + name + " weight is nonzero but score is missing");
  return mu * *score;
}

}  // namespace

LogProb joint_score(const DecoderScores& scores, std::size_t length, const DecoderWeights& w) {
  return weighted(w.mu_ctc, scores.ctc, "ctc") + weighted(w.mu_rnnt, scores.rnnt, "rnnt") +
         weighted(w.mu_att, scores.att, "att") + w.beta * static_cast<double>(length);
}

}  // namespace jointbeam
