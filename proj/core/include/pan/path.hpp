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
#include <set>
#include <span>
#include <string>
#include <vector>

namespace pan {

struct GeoCoord {
    double lat = 0.0;
    double lon = 0.0;

    friend bool operator==(const GeoCoord&, const GeoCoord&) = default;
};

/// Decoration of a single AS hop as announced during path discovery.
struct HopMeta {
    IsdAs id;
    double latency_ms = 0.0; // one-way contribution
    double bandwidth_mbps = 1000.0;
    std::uint32_t mtu_bytes = 1500;
    std::optional<GeoCoord> geo;
    double carbon_g_per_gb = 0.0;

    /// Throws DomainError when a field is out of range.
    void validate() const;

    friend bool operator==(const HopMeta&, const HopMeta&) = default;
};

inline constexpr std::uint32_t kMinMtuBytes = 576;

struct PathMetadata {
    double latency_ms = 0.0;
    double bandwidth_mbps = 0.0;
    std::uint32_t mtu_bytes = 0;
    double carbon_g_per_gb = 0.0;
    std::size_t hop_count = 0;
    std::set<std::uint32_t> isds;

    /// Round-trip estimate: latency is modelled one-way.
    double rtt_ms() const noexcept { return 2.0 * latency_ms; }

    friend bool operator==(const PathMetadata&, const PathMetadata&) = default;
};

/// Sum latency and carbon, min bandwidth and MTU. Throws DomainError on an
/// empty hop list.
PathMetadata aggregate_metadata(std::span<const HopMeta> hops);

/// Immutable simple path, source AS first. Metadata is derived on construction.
class Path
{
  public:
    /// Throws DomainError if hops are empty, repeat an AS, contain a wildcard
    /// or carry invalid decoration.
    explicit Path(std::vector<HopMeta> hops);

    const std::vector<HopMeta>& hops() const noexcept { return hops_; }
    const PathMetadata& meta() const noexcept { return meta_; }
    const IsdAs& src() const noexcept { return hops_.front().id; }
    const IsdAs& dst() const noexcept { return hops_.back().id; }

    std::vector<IsdAs> sequence() const;
    bool traverses_isd(std::uint32_t isd) const { return meta_.isds.contains(isd); }

    /// Stable 64-bit hash of the hop IsdAs sequence.
    std::uint64_t fingerprint() const noexcept { return fingerprint_; }
    std::string fingerprint_hex() const;

    /// `1-1>1-2>2-5`
    std::string to_string() const;

    friend bool operator==(const Path& a, const Path& b) { return a.hops_ == b.hops_; }

  private:
    std::vector<HopMeta> hops_;
    PathMetadata meta_;
    std::uint64_t fingerprint_ = 0;
};

/// Lexicographic comparison of hop sequences by (isd, as).
bool hop_sequence_less(const Path& a, const Path& b);

std::uint64_t fingerprint_sequence(std::span<const IsdAs> sequence) noexcept;

} // namespace pan
