// Copyright 2026 The Authors.
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


#ifndef P3_TESTS_EXPECT_ERROR_HPP_
#define P3_TESTS_EXPECT_ERROR_HPP_

#include <string>

#include "doctest.h"
#include "p3/error.hpp"

// Asserts that `expr` throws p3::Error carrying `expected_code`.
#define CHECK_P3_ERROR(expr, expected_code)                        \
  do {                                                             \
    bool thrown_ = false;                                          \
    try {                                                          \
      (void)(expr);                                                \
    } catch (const p3::Error& e_) {                                \
      thrown_ = true;                                              \
      CHECK_MESSAGE(e_.code() == (expected_code), std::string(e_.what()));\
    }                                                              \
    CHECK_MESSAGE(thrown_, "expected p3::Error from " #expr);      \
  } while (0)

#endif  // P3_TESTS_EXPECT_ERROR_HPP_
