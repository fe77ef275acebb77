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

#ifndef JOINTBEAM_STAGE_WEIGHTS_H_
#define JOINTBEAM_STAGE_WEIGHTS_H_

#include <array>

namespace jointbeam {

// Second-stage training weights (ctc, rnnt, att, mlm): each first-stage
// best-validation epoch divided by their sum. Throws UsageError for epochs < 1.
std::array<double, 4> compute_stage2_weights(const std::array<int, 4>& epochs);

}  // namespace jointbeam

#endif  // JOINTBEAM_STAGE_WEIGHTS_H_
