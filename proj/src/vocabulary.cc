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

#include "jointbeam/vocabulary.h"

#include "jointbeam/errors.h"

namespace jointbeam {

Vocabulary::Vocabulary(std::vector<std::string> tokens, std::string blank_label,
                       std::string eos_label)
    : tokens_(std::move(tokens)),
      blank_label_(std::move(blank_label)),
      eos_label_(std::move(eos_label)) {
  if (blank_label_ == eos_label_)
    throw UsageError("vocabulary: blank and eos labels must differ");
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    const std::string& label = tokens_[i];
    if (label == blank_label_ || label == eos_label_)
      throw UsageError("vocabulary: token " + std::to_string(i) + " (\"" + label +
                       "\") collides with a reserved symbol");
    if (!index_.emplace(label, static_cast<TokenId>(i)).second)
      throw UsageError("vocabulary: duplicate token \"" + label + "\"");
  }
  index_.emplace(blank_label_, blank_id());
  index_.emplace(eos_label_, eos_id());
}

const std::string& Vocabulary::label(TokenId id) const {
  if (is_regular(id)) return tokens_[static_cast<std::size_t>(id)];
  if (id == blank_id()) return blank_label_;
  if (id == eos_id()) return eos_label_;
  throw UsageError("vocabulary: token id " + std::to_string(id) + " out of range");
}

TokenId Vocabulary::id(std::string_view label) const {
  auto it = index_.find(std::string(label));
  if (it == index_.end())
    throw UsageError("vocabulary: unknown label \"" + std::string(label) + "\"");
  return it->second;
}

void Vocabulary::check_sequence(const TokenSeq& seq) const {
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (!is_regular(seq[i]))
      throw UsageError("token sequence: position " + std::to_string(i) +
                       " holds non-regular id " + std::to_string(seq[i]));
  }
}

}  // namespace jointbeam
