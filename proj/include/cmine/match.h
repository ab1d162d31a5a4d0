// Copyright 2026 The cmine Authors.
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

#ifndef CMINE_MATCH_H_
#define CMINE_MATCH_H_

#include <cstddef>
#include <set>
#include <string>

namespace cmine {

// One annotated concept occurrence. Offsets are UTF-8 byte offsets into the
// document, end-exclusive; surface is exactly that slice.
struct Match {
  std::size_t start_char = 0;
  std::size_t end_char = 0;
  std::string surface;
  std::string concept_id;
  // Display name of the concept (its preferred term).
  std::string matched_term;
  // The dictionary synonym whose normalized form fired.
  std::string fired_term;
  std::set<std::string> semantic_types;
  std::string bucket;
  bool negated = false;

  friend bool operator==(const Match&, const Match&) = default;
};

}  // namespace cmine

#endif  // CMINE_MATCH_H_
