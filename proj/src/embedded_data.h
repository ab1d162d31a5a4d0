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

// Data files compiled into the library so the tool works without a data dir.

#ifndef CMINE_SRC_EMBEDDED_DATA_H_
#define CMINE_SRC_EMBEDDED_DATA_H_

#include <string_view>

namespace cmine::embedded {

// data/stopwords_en.txt
std::string_view stopwords_en();
// data/negex_triggers.txt
std::string_view negex_triggers();

}  // namespace cmine::embedded

#endif  // CMINE_SRC_EMBEDDED_DATA_H_
