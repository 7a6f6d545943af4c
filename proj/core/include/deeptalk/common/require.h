// Copyright (c) 2026 The DeepTalk Toolkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DEEPTALK_COMMON_REQUIRE_H_
#define DEEPTALK_COMMON_REQUIRE_H_

#include <stdexcept>
#include <string>

namespace deeptalk {

[[noreturn]] inline void Fail(const std::string& message) {
  throw std::runtime_error(message);
}

inline void Require(bool condition, const std::string& message) {
  if (!condition) Fail(message);
}

}  // namespace deeptalk

#endif  // DEEPTALK_COMMON_REQUIRE_H_
