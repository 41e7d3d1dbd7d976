// Copyright 2026 The pan-gate Authors
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

#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace pan {

/// Malformed text input. `line()` is 1-based when the input is line-oriented.
class ParseError : public std::runtime_error
{
  public:
    explicit ParseError(const std::string& what, std::optional<std::size_t> line = std::nullopt)
      : std::runtime_error(line ? "line " + std::to_string(*line) + ": " + what : what)
      , line_(line)
    {
    }

    std::optional<std::size_t> line() const noexcept { return line_; }

  private:
    std::optional<std::size_t> line_;
};

/// Violated precondition or semantic invariant on otherwise well-formed input.
class DomainError : public std::invalid_argument
{
  public:
    using std::invalid_argument::invalid_argument;
};

} // namespace pan
