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

#include "pan/resolver/scion_address.hpp"

#include "pan/errors.hpp"

#include <charconv>

namespace pan::resolver {

namespace {

std::uint16_t parse_port(std::string_view text, std::string_view full)
{
    unsigned value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size() || value < 1 || value > 65535) {
        throw ParseError("invalid port in SCION address '" + std::string(full) + "'");
    }
    return static_cast<std::uint16_t>(value);
}

} // namespace

std::string ScionAddress::to_string() const
{
    std::string out = id.to_string() + ",";
    const bool v6 = host.find(':') != std::string::npos;
    if (port) {
        out += v6 ? "[" + host + "]" : host;
        out += ":" + std::to_string(*port);
    } else {
        out += host;
    }
    return out;
}

ScionAddress parse_scion_address(std::string_view text)
{
    auto comma = text.find(',');
    if (comma == std::string_view::npos) {
        throw ParseError("missing ',' in SCION address '" + std::string(text) + "'");
    }
    ScionAddress out;
    out.id = parse_isd_as(text.substr(0, comma));
    if (!out.id.is_concrete()) {
        throw ParseError("SCION address '" + std::string(text) + "' must not contain wildcards");
    }
    auto rest = text.substr(comma + 1);
    if (!rest.empty() && rest.front() == '[') {
        auto close = rest.find(']');
        if (close == std::string_view::npos) {
            throw ParseError("unterminated '[' in SCION address '" + std::string(text) + "'");
        }
        out.host = std::string(rest.substr(1, close - 1));
        auto tail = rest.substr(close + 1);
        if (!tail.empty()) {
            if (tail.front() != ':') {
                throw ParseError("unexpected text after host in SCION address '" + std::string(text) + "'");
            }
            out.port = parse_port(tail.substr(1), text);
        }
    } else {
        auto colon = rest.find(':');
        // More than one ':' without brackets is a bare IPv6 literal.
        if (colon != std::string_view::npos && rest.find(':', colon + 1) == std::string_view::npos) {
            out.host = std::string(rest.substr(0, colon));
            out.port = parse_port(rest.substr(colon + 1), text);
        } else {
            out.host = std::string(rest);
        }
    }
    if (out.host.empty()) {
        throw ParseError("empty host in SCION address '" + std::string(text) + "'");
    }
    for (char c : out.host) {
        if (c == ' ' || c == '\t' || c == ',' || c == '/') {
            throw ParseError("invalid host in SCION address '" + std::string(text) + "'");
        }
    }
    return out;
}

ScionAddress parse_txt(std::string_view record)
{
    constexpr std::string_view prefix = "scion=";
    if (!record.starts_with(prefix)) {
        throw ParseError("TXT record lacks 'scion=' prefix");
    }
    return parse_scion_address(record.substr(prefix.size()));
}

} // namespace pan::resolver
