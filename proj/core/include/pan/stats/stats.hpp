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
#include "pan/proxy/request_plan.hpp"

#include <cstdint>
#include <map>
#include <mutex>
#include <string>

namespace pan::stats {

struct HostCounters {
    std::uint64_t requests_pan = 0;
    std::uint64_t requests_legacy = 0;
    std::uint64_t requests_blocked = 0;
    std::uint64_t non_compliant = 0;

    std::uint64_t total() const noexcept { return requests_pan + requests_legacy + requests_blocked; }
    friend bool operator==(const HostCounters&, const HostCounters&) = default;
};

struct PathCounters {
    std::string path; // human-readable hop sequence
    std::uint64_t uses = 0;
    double ewma_latency_ms = 0.0;
    std::uint64_t bytes = 0;

    friend bool operator==(const PathCounters&, const PathCounters&) = default;
};

struct Stats {
    std::map<std::string, HostCounters> per_host;
    std::map<std::string, PathCounters> per_path; // keyed by path fingerprint (hex)
    Timestamp since;
    std::uint64_t records = 0;

    friend bool operator==(const Stats&, const Stats&) = default;
};

struct Timing {
    double connect_ms = 0.0;
    double total_ms = 0.0;
};

inline constexpr double kDefaultEwmaAlpha = 0.3;

/// Session-local path usage and performance accounting.
class StatsRecorder
{
  public:
    /// Throws DomainError unless alpha is in (0, 1].
    explicit StatsRecorder(double alpha = kDefaultEwmaAlpha, Timestamp since = Timestamp{});

    void record(const proxy::RequestPlan& plan, Timing timing, std::uint64_t bytes);
    Stats snapshot() const;
    double alpha() const noexcept { return alpha_; }

  private:
    double alpha_;
    mutable std::mutex mutex_;
    Stats stats_;
};

std::string to_json(const Stats& stats);

} // namespace pan::stats
