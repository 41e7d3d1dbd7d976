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

#include "pan/path.hpp"

#include "pan/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <unordered_set>

namespace pan {

void HopMeta::validate() const
{
    if (!id.is_concrete()) {
        throw DomainError("hop " + id.to_string() + " is not a concrete ISD-AS");
    }
    if (!(latency_ms >= 0.0) || !std::isfinite(latency_ms)) {
        throw DomainError("hop " + id.to_string() + ": latency_ms must be >= 0");
    }
    if (!(bandwidth_mbps > 0.0)) {
        throw DomainError("hop " + id.to_string() + ": bandwidth_mbps must be > 0");
    }
    if (mtu_bytes < kMinMtuBytes) {
        throw DomainError("hop " + id.to_string() + ": mtu_bytes must be >= 576");
    }
    if (!(carbon_g_per_gb >= 0.0)) {
        throw DomainError("hop " + id.to_string() + ": carbon_g_per_gb must be >= 0");
    }
    if (geo && (geo->lat < -90.0 || geo->lat > 90.0 || geo->lon < -180.0 || geo->lon > 180.0)) {
        throw DomainError("hop " + id.to_string() + ": geo coordinates out of range");
    }
}

PathMetadata aggregate_metadata(std::span<const HopMeta> hops)
{
    if (hops.empty()) {
        throw DomainError("aggregate_metadata: empty hop list");
    }
    PathMetadata meta;
    meta.bandwidth_mbps = hops.front().bandwidth_mbps;
    meta.mtu_bytes = hops.front().mtu_bytes;
    for (const auto& hop : hops) {
        meta.latency_ms += hop.latency_ms;
        meta.carbon_g_per_gb += hop.carbon_g_per_gb;
        meta.bandwidth_mbps = std::min(meta.bandwidth_mbps, hop.bandwidth_mbps);
        meta.mtu_bytes = std::min(meta.mtu_bytes, hop.mtu_bytes);
        meta.isds.insert(hop.id.isd);
    }
    meta.hop_count = hops.size();
    return meta;
}

std::uint64_t fingerprint_sequence(std::span<const IsdAs> sequence) noexcept
{
    // FNV-1a over the fixed-width encoding of each hop.
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](std::uint64_t v, int bytes) {
        for (int i = 0; i < bytes; ++i) {
            h ^= (v >> (8 * i)) & 0xff;
            h *= 0x100000001b3ULL;
        }
    };
    for (const auto& ia : sequence) {
        mix(ia.isd, 4);
        mix(ia.as_id, 8);
    }
    return h;
}

Path::Path(std::vector<HopMeta> hops) : hops_(std::move(hops))
{
    if (hops_.empty()) {
        throw DomainError("path must have at least one hop");
    }
    std::unordered_set<IsdAs> seen;
    for (const auto& hop : hops_) {
        hop.validate();
        if (!seen.insert(hop.id).second) {
            throw DomainError("path repeats AS " + hop.id.to_string());
        }
    }
    meta_ = aggregate_metadata(hops_);
    auto seq = sequence();
    fingerprint_ = fingerprint_sequence(seq);
}

std::vector<IsdAs> Path::sequence() const
{
    std::vector<IsdAs> out;
    out.reserve(hops_.size());
    for (const auto& hop : hops_) {
        out.push_back(hop.id);
    }
    return out;
}

std::string Path::fingerprint_hex() const
{
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fingerprint_));
    return buf;
}

std::string Path::to_string() const
{
    std::string out;
    for (const auto& hop : hops_) {
        if (!out.empty()) {
            out += '>';
        }
        out += hop.id.to_string();
    }
    return out;
}

bool hop_sequence_less(const Path& a, const Path& b)
{
    return std::lexicographical_compare(a.hops().begin(), a.hops().end(), b.hops().begin(), b.hops().end(),
                                        [](const HopMeta& x, const HopMeta& y) { return x.id < y.id; });
}

} // namespace pan
