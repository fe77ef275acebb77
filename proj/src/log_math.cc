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

#include "jointbeam/log_math.h"

#include <algorithm>

#include "jointbeam/errors.h"

namespace jointbeam {

LogProb log_sum_exp(std::span<const LogProb> values) {
  if (values.empty()) throw UsageError("log_sum_exp: empty input");
  const LogProb max = *std::max_element(values.begin(), values.end());
  if (max == kLogZero) return kLogZero;
  double sum = 0.0;
  for (LogProb v : values) sum += std::exp(v - max);
  return max + std::log(sum);
}

}  // namespace jointbeam
