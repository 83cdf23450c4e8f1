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

#ifndef BTQ_LEVEL_STORE_HPP
#define BTQ_LEVEL_STORE_HPP

#include <map>
#include <memory>

#include "btq/section_space.hpp"

namespace btq {

/// Builds and memoizes one Level per m for a fixed model.
///
/// Not thread-safe: call get() for every level up front before sharing the
/// store across threads.
class LevelStore {
 public:
  explicit LevelStore(KahlerModel model, int base_resolution = 0)
      : model_(model), base_resolution_(base_resolution) {}

  const KahlerModel& model() const noexcept { return model_; }
  /// max(base_resolution, default_resolution(model, m)).
  int resolution_for(int m) const;
  const Level& get(int m);

 private:
  KahlerModel model_;
  int base_resolution_;
  std::map<int, std::unique_ptr<Level>> levels_;
};

}  // namespace btq

#endif  // BTQ_LEVEL_STORE_HPP
