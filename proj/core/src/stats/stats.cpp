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

#include "pan/stats/stats.hpp"

#include "pan/errors.hpp"

#include <json.hpp>

namespace pan::stats {

StatsRecorder::StatsRecorder(double alpha, Timestamp since) : alpha_(alpha)
{
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw DomainError("EWMA alpha must be in (0, 1]");
    }
    stats_.since = since;
}

void StatsRecorder::record(const proxy::RequestPlan& plan, Timing timing, std::uint64_t bytes)
{
    std::lock_guard lock(mutex_);
    ++stats_.records;
    auto& host = stats_.per_host[plan.host];
    if (!plan.policy_compliant) {
        ++host.non_compliant;
    }
    if (const auto* pan = plan.pan()) {
        ++host.requests_pan;
        auto& path = stats_.per_path[pan->path.fingerprint_hex()];
        if (path.uses == 0) {
            path.path = pan->path.to_string();
            path.ewma_latency_ms = timing.total_ms;
        } else {
            path.ewma_latency_ms = alpha_ * timing.total_ms + (1.0 - alpha_) * path.ewma_latency_ms;
        }
        ++path.uses;
        path.bytes += bytes;
    } else if (plan.via_legacy()) {
        ++host.requests_legacy;
    } else {
        ++host.requests_blocked;
    }
}

Stats StatsRecorder::snapshot() const
{
    std::lock_guard lock(mutex_);
    return stats_;
}

std::string to_json(const Stats& stats)
{
    using nlohmann::json;
    json doc;
    doc["since"] = to_unix_seconds(stats.since);
    doc["records"] = stats.records;
    json hosts = json::object();
    for (const auto& [host, c] : stats.per_host) {
        hosts[host] = {{"requests_pan", c.requests_pan},
                       {"requests_legacy", c.requests_legacy},
                       {"requests_blocked", c.requests_blocked},
                       {"non_compliant", c.non_compliant}};
    }
    doc["per_host"] = std::move(hosts);
    json paths = json::object();
    for (const auto& [fp, c] : stats.per_path) {
        paths[fp] = {{"path", c.path}, {"uses", c.uses}, {"ewma_latency_ms", c.ewma_latency_ms}, {"bytes", c.bytes}};
    }
    doc["per_path"] = std::move(paths);
    return doc.dump(2);
}

} // namespace pan::stats
