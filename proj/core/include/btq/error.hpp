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

#ifndef BTQ_ERROR_HPP
#define BTQ_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace btq {

enum class ErrorCode {
  InvalidModulus,
  UnderResolved,
  NonFiniteIntegrand,
  UnknownSelector,
  LevelInvalid,
  NotPositiveDefinite,
  DimensionMismatch,
  OracleMissing,
  KernelZero,
  NonFiniteLog,
  IllConditioned,
  RankDeficient,
  ConfigInvalid,
  IoError,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised by the surjectivity check; carries the measured numerical rank.
class RankDeficientError : public Error {
 public:
  RankDeficientError(int rank, int expected)
      : Error(ErrorCode::RankDeficient,
              "rank " + std::to_string(rank) + " < " + std::to_string(expected)),
        rank_(rank),
        expected_(expected) {}

  int rank() const noexcept { return rank_; }
  int expected() const noexcept { return expected_; }

 private:
  int rank_;
  int expected_;
};

}  // namespace btq

#endif  // BTQ_ERROR_HPP
