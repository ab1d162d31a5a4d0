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

#ifndef CMINE_PORTER_STEMMER_H_
#define CMINE_PORTER_STEMMER_H_

#include <string>
#include <string_view>

namespace cmine {

// Porter (1980) suffix stripping, original rule set (ABLI->ABLE, no LOGI
// rule). Input is expected lowercase. Words of one or two bytes are returned
// unchanged. Non-letter bytes count as consonants.
std::string porter_stem(std::string_view word);

}  // namespace cmine

#endif  // CMINE_PORTER_STEMMER_H_
