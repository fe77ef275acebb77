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

#include "jointbeam/stage_weights.h"

#include <string>

#include "jointbeam/errors.h"

namespace jointbeam {

std::array<double, 4> compute_stage2_weights(const std::array<int, 4>& epochs) {
  double total = 0.0;
  for (int e : epochs) {
    if (e < 1) throw UsageError("epochs must be positive, got " + std::to_string(e));
    total += e;
  }
  std::array<double, 4> w{};
  for (std::size_t i = 0; i < 4; ++i) w[i] = epochs[i] / total;
  return w;
}

}  // namespace jointbeam
