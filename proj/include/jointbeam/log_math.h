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

#ifndef JOINTBEAM_LOG_MATH_H_
#define JOINTBEAM_LOG_MATH_H_

#include <cmath>
#include <limits>
#include <span>

namespace jointbeam {

// Natural-log probability. -infinity means probability exactly zero.
using LogProb = double;

inline constexpr LogProb kLogZero = -std::numeric_limits<double>::infinity();
inline constexpr LogProb kLogOne = 0.0;

// log(exp(a) + exp(b)) without overflow; exact when either side is -inf.
inline LogProb log_add(LogProb a, LogProb b) {
  if (a < b) std::swap(a, b);
  if (b == kLogZero) return a;
  return a + std::log1p(std::exp(b - a));
}

// log(p) with log(0) = -inf.
inline LogProb safe_log(double p) { return p > 0.0 ? std::log(p) : kLogZero; }

// log(sum_i exp(values[i])) using a max shift. Throws UsageError on empty input.
LogProb log_sum_exp(std::span<const LogProb> values);

}  // namespace jointbeam

#endif  // JOINTBEAM_LOG_MATH_H_
