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

#include "pan/policy/policy.hpp"

#include "pan/errors.hpp"

#include <algorithm>
#include <array>
#include <sstream>

namespace pan::policy {

namespace {

constexpr std::array<std::pair<Metric, std::string_view>, 5> kMetricNames{{
    {Metric::latency, "latency"},
    {Metric::bandwidth, "bandwidth"},
    {Metric::hops, "hops"},
    {Metric::carbon, "carbon"},
    {Metric::mtu, "mtu"},
}};

std::string_view trim(std::string_view s)
{
    constexpr std::string_view ws = " \t\r\f\v";
    auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) {
        return {};
    }
    auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_ws(std::string_view s)
{
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) {
            ++i;
        }
        auto start = i;
        while (i < s.size() && s[i] != ' ' && s[i] != '\t') {
            ++i;
        }
        if (i > start) {
            out.push_back(s.substr(start, i - start));
        }
    }
    return out;
}

bool is_default_entry(const AclEntry& e) { return e.pattern.is_full_wildcard(); }

void ensure_default(Policy& p)
{
    if (p.acl.empty() || !is_default_entry(p.acl.back())) {
        p.acl.push_back(AclEntry{Action::allow, IsdAs{}});
    }
}

} // namespace

std::string_view to_string(Metric metric)
{
    for (const auto& [m, name] : kMetricNames) {
        if (m == metric) {
            return name;
        }
    }
    return "unknown";
}

std::string_view to_string(Direction direction) { return direction == Direction::asc ? "asc" : "desc"; }

std::optional<Metric> parse_metric(std::string_view text)
{
    for (const auto& [m, name] : kMetricNames) {
        if (name == text) {
            return m;
        }
    }
    return std::nullopt;
}

Policy parse(std::string_view text)
{
    Policy out;
    out.acl.clear();
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto eol = text.find('\n', pos);
        auto raw = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;

        if (auto hash = raw.find('#'); hash != std::string_view::npos) {
            raw = raw.substr(0, hash);
        }
        auto line = trim(raw);
        if (line.empty()) {
            continue;
        }

        if (line.front() == '+' || line.front() == '-') {
            auto pattern_text = trim(line.substr(1));
            AclEntry entry;
            entry.action = line.front() == '+' ? Action::allow : Action::deny;
            try {
                entry.pattern = parse_isd_as(pattern_text);
            } catch (const ParseError& e) {
                throw ParseError(std::string("malformed pattern: ") + e.what(), line_no);
            }
            out.acl.push_back(entry);
            continue;
        }

        auto tokens = split_ws(line);
        if (tokens.front() != "order") {
            throw ParseError("unknown directive '" + std::string(tokens.front()) + "'", line_no);
        }
        if (tokens.size() != 3) {
            throw ParseError("expected 'order <metric> <asc|desc>'", line_no);
        }
        auto metric = parse_metric(tokens[1]);
        if (!metric) {
            throw ParseError("unknown metric '" + std::string(tokens[1]) + "'", line_no);
        }
        Direction dir;
        if (tokens[2] == "asc") {
            dir = Direction::asc;
        } else if (tokens[2] == "desc") {
            dir = Direction::desc;
        } else {
            throw ParseError("unknown direction '" + std::string(tokens[2]) + "'", line_no);
        }
        if (std::any_of(out.orderings.begin(), out.orderings.end(),
                        [&](const OrderKey& k) { return k.metric == *metric; })) {
            throw ParseError("duplicate order metric '" + std::string(tokens[1]) + "'", line_no);
        }
        out.orderings.push_back(OrderKey{*metric, dir});
    }
    ensure_default(out);
    return out;
}

std::string render(const Policy& policy)
{
    std::ostringstream out;
    for (const auto& e : policy.acl) {
        out << (e.action == Action::allow ? "+ " : "- ") << e.pattern.to_string() << '\n';
    }
    for (const auto& k : policy.orderings) {
        out << "order " << to_string(k.metric) << ' ' << to_string(k.direction) << '\n';
    }
    return out.str();
}

Action decide(const Policy& policy, const IsdAs& hop)
{
    for (const auto& e : policy.acl) {
        if (matches(e.pattern, hop)) {
            return e.action;
        }
    }
    // Unreachable for parsed policies; a hand-built one without a default denies.
    return Action::deny;
}

bool is_compliant(const Policy& policy, const Path& path)
{
    return std::all_of(path.hops().begin(), path.hops().end(),
                       [&](const HopMeta& hop) { return decide(policy, hop.id) == Action::allow; });
}

double metric_value(const Path& path, Metric metric)
{
    const auto& m = path.meta();
    switch (metric) {
    case Metric::latency:
        return m.latency_ms;
    case Metric::bandwidth:
        return m.bandwidth_mbps;
    case Metric::hops:
        return static_cast<double>(m.hop_count);
    case Metric::carbon:
        return m.carbon_g_per_gb;
    case Metric::mtu:
        return static_cast<double>(m.mtu_bytes);
    }
    return 0.0;
}

std::vector<Path> evaluate(const Policy& policy, std::span<const Path> paths)
{
    std::vector<Path> out;
    for (const auto& p : paths) {
        if (is_compliant(policy, p)) {
            out.push_back(p);
        }
    }
    std::stable_sort(out.begin(), out.end(), [&](const Path& a, const Path& b) {
        for (const auto& key : policy.orderings) {
            auto va = metric_value(a, key.metric);
            auto vb = metric_value(b, key.metric);
            if (va != vb) {
                return key.direction == Direction::asc ? va < vb : va > vb;
            }
        }
        return hop_sequence_less(a, b);
    });
    return out;
}

Policy combine(std::span<const Policy> policies)
{
    if (policies.empty()) {
        throw DomainError("combine: empty policy list");
    }
    Policy out;
    out.acl.clear();
    for (std::size_t i = 0; i < policies.size(); ++i) {
        const auto& acl = policies[i].acl;
        const bool last = i + 1 == policies.size();
        auto end = acl.end();
        if (!last && !acl.empty() && is_default_entry(acl.back())) {
            --end;
        }
        out.acl.insert(out.acl.end(), acl.begin(), end);
        for (const auto& key : policies[i].orderings) {
            if (std::none_of(out.orderings.begin(), out.orderings.end(),
                             [&](const OrderKey& k) { return k.metric == key.metric; })) {
                out.orderings.push_back(key);
            }
        }
    }
    ensure_default(out);
    if (policies.size() == 1) {
        out.name = policies.front().name;
    }
    return out;
}

} // namespace pan::policy
