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

#ifndef JOINTBEAM_VOCABULARY_H_
#define JOINTBEAM_VOCABULARY_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace jointbeam {

using TokenId = std::int32_t;

// Sequence of regular token indices; never contains blank or eos.
using TokenSeq = std::vector<TokenId>;

// Regular tokens are dense indices [0, size()). Blank and eos are implicit
// indices appended after them: blank = size(), eos = size() + 1.
class Vocabulary {
 public:
  Vocabulary() = default;
  explicit Vocabulary(std::vector<std::string> tokens,
                      std::string blank_label = "<blk>",
                      std::string eos_label = "<eos>");

  std::size_t size() const { return tokens_.size(); }
  TokenId blank_id() const { return static_cast<TokenId>(tokens_.size()); }
  TokenId eos_id() const { return static_cast<TokenId>(tokens_.size() + 1); }

  bool is_regular(TokenId id) const {
    return id >= 0 && static_cast<std::size_t>(id) < tokens_.size();
  }

  const std::vector<std::string>& tokens() const { return tokens_; }
  const std::string& blank_label() const { return blank_label_; }
  const std::string& eos_label() const { return eos_label_; }

  // Label for any id in [0, size() + 1]. Throws UsageError otherwise.
  const std::string& label(TokenId id) const;
  // Inverse of label(). Throws UsageError for unknown labels.
  TokenId id(std::string_view label) const;

  // Throws UsageError unless every element is a regular token.
  void check_sequence(const TokenSeq& seq) const;

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
    return a.tokens_ == b.tokens_ && a.blank_label_ == b.blank_label_ &&
           a.eos_label_ == b.eos_label_;
  }

 private:
  std::vector<std::string> tokens_;
  std::string blank_label_ = "<blk>";
  std::string eos_label_ = "<eos>";
  std::unordered_map<std::string, TokenId> index_;
};

}  // namespace jointbeam

#endif  // JOINTBEAM_VOCABULARY_H_
