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

#include "pan/proxy/gateway.hpp"

#include "pan/errors.hpp"
#include "pan/log.hpp"

namespace pan::proxy {

std::string_view to_string(ModeValue value) { return value == ModeValue::strict ? "strict" : "opportunistic"; }

std::string_view to_string(ModeOrigin origin)
{
    switch (origin) {
    case ModeOrigin::global_default:
        return "global-default";
    case ModeOrigin::per_site_user:
        return "per-site-user";
    case ModeOrigin::header_imposed:
        return "header-imposed";
    }
    return "global-default";
}

std::optional<ModeValue> parse_mode_value(std::string_view text)
{
    while (!text.empty() && (text.back() == '\n' || text.back() == '\r' || text.back() == ' ')) {
        text.remove_suffix(1);
    }
    while (!text.empty() && text.front() == ' ') {
        text.remove_prefix(1);
    }
    if (text == "strict") {
        return ModeValue::strict;
    }
    if (text == "opportunistic") {
        return ModeValue::opportunistic;
    }
    return std::nullopt;
}

Gateway::Gateway(std::shared_ptr<const pathdb::Topology> topology, std::unique_ptr<resolver::Resolver> resolver,
                 policy::Policy policy, const Clock& clock, GatewayOptions options)
  : topology_(std::move(topology))
  , resolver_(std::move(resolver))
  , clock_(clock)
  , pathdb_(topology_, clock_, options.pathdb)
  , emu_(topology_, options.emu)
  , stats_(options.ewma_alpha, clock.now())
  , policy_(std::make_shared<const policy::Policy>(std::move(policy)))
  , global_mode_(options.global_mode)
{
    if (!resolver_) {
        throw DomainError("Gateway requires a resolver");
    }
}

Mode Gateway::effective_mode(const std::string& host, Timestamp now) const
{
    if (auto entry = resolver_->strict_entry(host, now)) {
        return Mode{ModeValue::strict, ModeOrigin::header_imposed, entry->expires_at};
    }
    std::lock_guard lock(mode_mutex_);
    if (auto it = host_modes_.find(host); it != host_modes_.end()) {
        return Mode{it->second, ModeOrigin::per_site_user, std::nullopt};
    }
    return Mode{global_mode_, ModeOrigin::global_default, std::nullopt};
}

RequestPlan Gateway::plan_request(const std::string& host, const std::string& page_id, Timestamp now)
{
    RequestPlan plan;
    plan.host = host;
    plan.page_id = page_id;
    try {
        plan.mode = effective_mode(host, now);
        // In-flight requests keep the policy snapshot they were planned with.
        auto active = policy();
        return plan_unchecked(std::move(plan), *active, now);
    } catch (const std::exception& e) {
        log::error("planning request for '{}' failed: {}", host, e.what());
        plan.policy_compliant = true;
        if (plan.mode.strict()) {
            plan.decision = Blocked{"internal"};
        } else {
            plan.decision = LegacyFallback{};
        }
        return plan;
    }
}

RequestPlan Gateway::plan_unchecked(RequestPlan plan, const policy::Policy& active, Timestamp now)
{
    const bool strict = plan.mode.strict();
    auto resolution = resolver_->resolve(plan.host, now);
    if (!resolution.scion_capable()) {
        plan.decision = strict ? Decision{Blocked{"no-pan-connectivity"}} : Decision{LegacyFallback{}};
        return plan;
    }
    const auto& address = *resolution.address;
    auto path_set = pathdb_.lookup(address.id);
    if (path_set->paths.empty()) {
        plan.decision = strict ? Decision{Blocked{"no-path"}} : Decision{LegacyFallback{}};
        return plan;
    }
    auto compliant = policy::evaluate(active, path_set->paths);
    if (!compliant.empty()) {
        plan.decision = PanVia{compliant.front(), address};
        plan.policy_compliant = true;
        return plan;
    }
    plan.policy_compliant = false;
    plan.decision = strict ? Decision{Blocked{"no-compliant-path"}} : Decision{LegacyFallback{}};
    return plan;
}

std::shared_ptr<const policy::Policy> Gateway::policy() const
{
    std::lock_guard lock(policy_mutex_);
    return policy_;
}

void Gateway::set_policy(policy::Policy policy)
{
    auto next = std::make_shared<const policy::Policy>(std::move(policy));
    std::lock_guard lock(policy_mutex_);
    policy_ = std::move(next);
}

void Gateway::set_policy_text(std::string_view text) { set_policy(policy::parse(text)); }

ModeValue Gateway::global_mode() const
{
    std::lock_guard lock(mode_mutex_);
    return global_mode_;
}

void Gateway::set_global_mode(ModeValue value)
{
    std::lock_guard lock(mode_mutex_);
    global_mode_ = value;
}

std::optional<ModeValue> Gateway::host_mode(const std::string& host) const
{
    std::lock_guard lock(mode_mutex_);
    auto it = host_modes_.find(host);
    if (it == host_modes_.end()) {
        return std::nullopt;
    }
    return it->second;
}

void Gateway::set_host_mode(const std::string& host, std::optional<ModeValue> value)
{
    std::lock_guard lock(mode_mutex_);
    if (value) {
        host_modes_[host] = *value;
    } else {
        host_modes_.erase(host);
    }
}

std::map<std::string, ModeValue> Gateway::host_modes() const
{
    std::lock_guard lock(mode_mutex_);
    return host_modes_;
}

void Gateway::record_completion(const RequestPlan& plan, stats::Timing timing, std::uint64_t bytes)
{
    stats_.record(plan, timing, bytes);
    pages_.record(plan);
}

PathsView Gateway::candidate_paths(const std::string& host, Timestamp now)
{
    PathsView view;
    view.host = host;
    view.resolution = resolver_->resolve(host, now);
    if (!view.resolution.scion_capable()) {
        return view;
    }
    auto active = policy();
    auto set = pathdb_.lookup(view.resolution.address->id);
    view.paths = set->paths;
    for (const auto& p : view.paths) {
        view.compliant.push_back(policy::is_compliant(*active, p));
    }
    auto ordered = policy::evaluate(*active, view.paths);
    if (!ordered.empty()) {
        view.selected = ordered.front();
    }
    return view;
}

} // namespace pan::proxy
