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

#ifndef JOINTBEAM_ALIGNMENT_H_
#define JOINTBEAM_ALIGNMENT_H_

#include <vector>

#include "jointbeam/vocabulary.h"

namespace jointbeam {

enum class AlignmentKind { kCtc, kRnnt };

// Frame-level (CTC, length T) or lattice (RNN-T, length T + S with exactly T
// blanks) label sequence over V plus blank.
struct Alignment {
  AlignmentKind kind = AlignmentKind::kCtc;
  TokenId blank = 0;
  std::vector<TokenId> labels;
};

// Merges each run of identical non-blank labels, then drops blanks.
// Throws UsageError if a.kind is not kCtc.
TokenSeq ctc_collapse(const Alignment& a);

// Drops blanks, keeps repeats. Throws UsageError if a.kind is not kRnnt.
TokenSeq rnnt_collapse(const Alignment& a);

}  // namespace jointbeam

#endif  // JOINTBEAM_ALIGNMENT_H_
