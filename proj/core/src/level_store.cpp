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

#include "btq/level_store.hpp"

#include <algorithm>

namespace btq {

int LevelStore::resolution_for(int m) const {
  return std::max(base_resolution_, default_resolution(model_, m));
}

const Level& LevelStore::get(int m) {
  auto it = levels_.find(m);
  if (it == levels_.end()) {
    it = levels_.emplace(m, std::make_unique<Level>(make_level(model_, m, resolution_for(m)))).first;
  }
  return *it->second;
}

}  // namespace btq
