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

#include "pan/clock.hpp"
#include "pan/path.hpp"
#include "pan/resolver/scion_address.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <variant>

namespace pan::proxy {

enum class ModeValue { opportunistic, strict };
enum class ModeOrigin { global_default, per_site_user, header_imposed };

struct Mode {
    ModeValue value = ModeValue::opportunistic;
    ModeOrigin origin = ModeOrigin::global_default;
    std::optional<Timestamp> expires_at; // header-imposed only

    bool strict() const noexcept { return value == ModeValue::strict; }
};

std::string_view to_string(ModeValue value);
std::string_view to_string(ModeOrigin origin);
std::optional<ModeValue> parse_mode_value(std::string_view text);

struct PanVia {
    Path path;
    resolver::ScionAddress address;
};

struct LegacyFallback {};

struct Blocked {
    std::string reason;
};

using Decision = std::variant<PanVia, LegacyFallback, Blocked>;

/// Routing decision for one request.
struct RequestPlan {
    Decision decision = LegacyFallback{};
    bool policy_compliant = true;
    Mode mode;
    std::string host;
    std::string page_id;

    bool via_pan() const noexcept { return std::holds_alternative<PanVia>(decision); }
    bool via_legacy() const noexcept { return std::holds_alternative<LegacyFallback>(decision); }
    bool blocked() const noexcept { return std::holds_alternative<Blocked>(decision); }
    const PanVia* pan() const noexcept { return std::get_if<PanVia>(&decision); }
    std::string_view block_reason() const noexcept
    {
        auto* b = std::get_if<Blocked>(&decision);
        return b ? std::string_view(b->reason) : std::string_view{};
    }
};

} // namespace pan::proxy
