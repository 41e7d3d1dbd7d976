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
#include "pan/emu/transport.hpp"
#include "pan/pathdb/path_db.hpp"
#include "pan/policy/policy.hpp"
#include "pan/proxy/page_report.hpp"
#include "pan/proxy/request_plan.hpp"
#include "pan/resolver/resolver.hpp"
#include "pan/stats/stats.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pan::proxy {

struct GatewayOptions {
    ModeValue global_mode = ModeValue::opportunistic;
    pathdb::PathDbOptions pathdb;
    emu::EmuOptions emu;
    double ewma_alpha = stats::kDefaultEwmaAlpha;
};

/// Candidate paths for a host with per-path compliance under the active policy.
struct PathsView {
    std::string host;
    resolver::Resolution resolution;
    std::vector<Path> paths; // path service order
    std::vector<bool> compliant;
    std::optional<Path> selected;
};

/// Shared state behind the proxy endpoint and the control API: resolver,
/// path service, active policy, modes, stats and page reports.
class Gateway
{
  public:
    Gateway(std::shared_ptr<const pathdb::Topology> topology, std::unique_ptr<resolver::Resolver> resolver,
            policy::Policy policy, const Clock& clock, GatewayOptions options = {});

    /// Never throws: internal failures fall back to legacy (opportunistic)
    /// or block with reason "internal" (strict).
    RequestPlan plan_request(const std::string& host, const std::string& page_id, Timestamp now);
    RequestPlan plan_request(const std::string& host, const std::string& page_id)
    {
        return plan_request(host, page_id, clock_.now());
    }

    /// Header-imposed strictness beats a per-site setting, which beats the
    /// global default.
    Mode effective_mode(const std::string& host, Timestamp now) const;

    std::shared_ptr<const policy::Policy> policy() const;
    std::string policy_text() const { return policy::render(*policy()); }
    void set_policy(policy::Policy policy);
    /// Throws ParseError and keeps the current policy on failure.
    void set_policy_text(std::string_view text);

    ModeValue global_mode() const;
    void set_global_mode(ModeValue value);
    std::optional<ModeValue> host_mode(const std::string& host) const;
    /// nullopt clears the per-site setting.
    void set_host_mode(const std::string& host, std::optional<ModeValue> value);
    std::map<std::string, ModeValue> host_modes() const;

    /// Books a finished request into stats and the page aggregator.
    void record_completion(const RequestPlan& plan, stats::Timing timing, std::uint64_t bytes);

    PageReport classify_page(const std::string& page_id) const { return pages_.classify_page(page_id); }
    stats::Stats stats() const { return stats_.snapshot(); }

    PathsView candidate_paths(const std::string& host, Timestamp now);

    const Clock& clock() const noexcept { return clock_; }
    const pathdb::Topology& topology() const noexcept { return *topology_; }
    resolver::Resolver& resolver() noexcept { return *resolver_; }
    pathdb::PathDb& pathdb() noexcept { return pathdb_; }
    emu::EmuNetwork& emu() noexcept { return emu_; }
    PageAggregator& pages() noexcept { return pages_; }

  private:
    RequestPlan plan_unchecked(RequestPlan plan, const policy::Policy& policy, Timestamp now);

    std::shared_ptr<const pathdb::Topology> topology_;
    std::unique_ptr<resolver::Resolver> resolver_;
    const Clock& clock_;
    pathdb::PathDb pathdb_;
    emu::EmuNetwork emu_;
    stats::StatsRecorder stats_;
    PageAggregator pages_;

    mutable std::mutex policy_mutex_;
    std::shared_ptr<const policy::Policy> policy_;

    mutable std::mutex mode_mutex_;
    ModeValue global_mode_;
    std::map<std::string, ModeValue> host_modes_;
};

} // namespace pan::proxy
