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

#include "jointbeam/alignment.h"

#include "jointbeam/errors.h"

namespace jointbeam {

TokenSeq ctc_collapse(const Alignment& a) {
  if (a.kind != AlignmentKind::kCtc) throw UsageError("ctc_collapse: not a CTC alignment");
  TokenSeq out;
  TokenId prev = a.blank;
  for (TokenId z : a.labels) {
    if (z != a.blank && z != prev) out.push_back(z);
    prev = z;
  }
  return out;
}

TokenSeq rnnt_collapse(const Alignment& a) {
  if (a.kind != AlignmentKind::kRnnt) throw UsageError("rnnt_collapse: not an RNN-T alignment");
  TokenSeq out;
  for (TokenId z : a.labels) {
    if (z != a.blank) out.push_back(z);
  }
  return out;
}

}  // namespace jointbeam
