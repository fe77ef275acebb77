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

#ifndef JOINTBEAM_ERRORS_H_
#define JOINTBEAM_ERRORS_H_

#include <cstdint>
#include <stdexcept>
#include <string>

namespace jointbeam {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller violated a precondition (bad argument, missing model, wrong cache).
class UsageError : public Error {
 public:
  using Error::Error;
};

// Model bundle or vocabulary failed to parse or validate.
class LoadError : public Error {
 public:
  using Error::Error;
};

// Brute-force enumeration refused because the instance exceeds its guard.
class GuardError : public Error {
 public:
  GuardError(const std::string& what, double instance_size, double limit)
      : Error(what + ": instance size " + std::to_string(instance_size) +
              " exceeds limit " + std::to_string(limit)),
        instance_size_(instance_size),
        limit_(limit) {}

  double instance_size() const { return instance_size_; }
  double limit() const { return limit_; }

 private:
  double instance_size_;
  double limit_;
};

}  // namespace jointbeam

#endif  // JOINTBEAM_ERRORS_H_
