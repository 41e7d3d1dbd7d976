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
#include "pan/path.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pan::policy {

enum class Action { allow, deny };

struct AclEntry {
    Action action = Action::allow;
    IsdAs pattern;

    friend bool operator==(const AclEntry&, const AclEntry&) = default;
};

enum class Metric { latency, bandwidth, hops, carbon, mtu };
enum class Direction { asc, desc };

struct OrderKey {
    Metric metric = Metric::latency;
    Direction direction = Direction::asc;

    friend bool operator==(const OrderKey&, const OrderKey&) = default;
};

/// Parsed path policy: first-match ACL over hop identities plus ordering keys.
/// The last ACL entry is always a full wildcard (the default action).
struct Policy {
    std::vector<AclEntry> acl{AclEntry{Action::allow, IsdAs{}}};
    std::vector<OrderKey> orderings;
    std::optional<std::string> name;

    friend bool operator==(const Policy&, const Policy&) = default;
};

/// Line-oriented grammar:
///
///     # comment
///     - 3-0                 deny every AS in ISD 3
///     + 0-0                 allow everything else
///     order latency asc     metrics: latency bandwidth hops carbon mtu
///
/// Throws ParseError with the 1-based line number.
Policy parse(std::string_view text);

/// Canonical text form; `parse(render(p)) == p` modulo `name`.
std::string render(const Policy& policy);

/// First-matching ACL entry for a single concrete hop.
Action decide(const Policy& policy, const IsdAs& hop);

/// True iff no hop of the path is denied.
bool is_compliant(const Policy& policy, const Path& path);

/// Filters non-compliant paths and orders the rest by the policy's keys
/// (first key dominates), breaking ties by hop sequence.
std::vector<Path> evaluate(const Policy& policy, std::span<const Path> paths);

/// Concatenates ACLs and orderings; only the last policy's default entry
/// survives and later duplicate ordering metrics are dropped.
/// Throws DomainError on an empty list.
Policy combine(std::span<const Policy> policies);

double metric_value(const Path& path, Metric metric);

std::string_view to_string(Metric metric);
std::string_view to_string(Direction direction);
std::optional<Metric> parse_metric(std::string_view text);

} // namespace pan::policy
