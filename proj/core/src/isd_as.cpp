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

#include "pan/isd_as.hpp"

#include "pan/errors.hpp"

#include <charconv>
#include <limits>

namespace pan {

namespace {

template <class T>
T parse_number(std::string_view token, std::string_view full)
{
    if (token.empty()) {
        throw ParseError("empty component in ISD-AS '" + std::string(full) + "'");
    }
    for (char c : token) {
        if (c < '0' || c > '9') {
            throw ParseError("invalid token '" + std::string(token) + "' in ISD-AS '" + std::string(full) + "'");
        }
    }
    T value{};
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size()) {
        throw ParseError("out of range token '" + std::string(token) + "' in ISD-AS '" + std::string(full) + "'");
    }
    return value;
}

} // namespace

std::string IsdAs::to_string() const
{
    return std::to_string(isd) + "-" + std::to_string(as_id);
}

IsdAs parse_isd_as(std::string_view text)
{
    if (text.empty()) {
        throw ParseError("empty ISD-AS");
    }
    auto dash = text.find('-');
    if (dash == std::string_view::npos) {
        throw ParseError("missing '-' in ISD-AS '" + std::string(text) + "'");
    }
    IsdAs out;
    out.isd = parse_number<std::uint32_t>(text.substr(0, dash), text);
    out.as_id = parse_number<std::uint64_t>(text.substr(dash + 1), text);
    return out;
}

} // namespace pan
