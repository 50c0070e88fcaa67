// Copyright 2026 The MDRD Authors. All Rights Reserved.
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

#ifndef MDRD_ERROR_HPP_
#define MDRD_ERROR_HPP_

#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

namespace mdrd {

/// Base class of every failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shapes or widths that do not line up.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Malformed, truncated or inconsistent files.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Bad configuration values or command-line usage.
class ConfigError : public Error {
 public:
  using Error::Error;
};

namespace detail {

template <typename... Args>
std::string concat(Args&&... args) {
  std::ostringstream os;
  (os << ... << std::forward<Args>(args));
  return os.str();
}

}  // namespace detail

template <typename E = Error, typename... Args>
[[noreturn]] void fail(Args&&... args) {
  throw E(detail::concat(std::forward<Args>(args)...));
}

}  // namespace mdrd

#endif  // MDRD_ERROR_HPP_
