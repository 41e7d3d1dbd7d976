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

#include "pan/isd_as.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace pan::resolver {

/// Concrete ISD-AS plus a host (IP or name) reachable inside that AS.
struct ScionAddress {
    IsdAs id;
    std::string host;
    std::optional<std::uint16_t> port;

    /// `2-5,192.0.2.7:8443`
    std::string to_string() const;

    friend bool operator==(const ScionAddress&, const ScionAddress&) = default;
};

/// Parses `<isd>-<as>,<host>[:<port>]`. IPv6 hosts with a port use brackets.
ScionAddress parse_scion_address(std::string_view text);

/// Parses a DNS TXT payload of the form `scion=<isd>-<as>,<host>[:<port>]`.
ScionAddress parse_txt(std::string_view record);

} // namespace pan::resolver
