// Copyright 2026 The btq Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef BTQ_TESTS_HELPERS_HPP
#define BTQ_TESTS_HELPERS_HPP

#include <optional>

#include "btq/error.hpp"

// Runs f and returns the code of the btq::Error it throws, if any.
template <class F>
std::optional<btq::ErrorCode> error_code_of(F&& f) {
  try {
    f();
  } catch (const btq::Error& e) {
    return e.code();
  }
  return std::nullopt;
}

#define EXPECT_BTQ_ERROR(expr, code) EXPECT_EQ(error_code_of([&] { (void)(expr); }), (code))

#endif  // BTQ_TESTS_HELPERS_HPP
