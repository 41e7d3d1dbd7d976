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

#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

namespace pan {

/// ISD/AS identity. Zero in either position is a wildcard and only valid
/// inside policy patterns.
struct IsdAs {
    std::uint32_t isd = 0;
    std::uint64_t as_id = 0;

    constexpr bool is_concrete() const noexcept { return isd != 0 && as_id != 0; }
    constexpr bool is_full_wildcard() const noexcept { return isd == 0 && as_id == 0; }

    std::string to_string() const;

    friend constexpr auto operator<=>(const IsdAs&, const IsdAs&) = default;
};

/// Parses `<isd>-<as>`. Throws ParseError naming the offending token.
IsdAs parse_isd_as(std::string_view text);

/// Wildcard-aware match of a pattern against a concrete identity.
constexpr bool matches(const IsdAs& pattern, const IsdAs& concrete) noexcept
{
    return (pattern.isd == 0 || pattern.isd == concrete.isd) &&
           (pattern.as_id == 0 || pattern.as_id == concrete.as_id);
}

} // namespace pan

template <>
struct std::hash<pan::IsdAs> {
    std::size_t operator()(const pan::IsdAs& ia) const noexcept
    {
        return std::hash<std::uint64_t>{}((static_cast<std::uint64_t>(ia.isd) << 48) ^ ia.as_id);
    }
};
