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

#include "pan/pathdb/path_db.hpp"

#include "pan/errors.hpp"

#include <algorithm>
#include <unordered_set>

namespace pan::pathdb {

Path decorate(const Topology& topo, const std::vector<IsdAs>& sequence)
{
    std::vector<HopMeta> hops;
    hops.reserve(sequence.size());
    for (std::size_t i = 0; i < sequence.size(); ++i) {
        const auto& info = topo.as_info(sequence[i]);
        HopMeta hop{info.id, info.latency_ms, info.bandwidth_mbps, info.mtu_bytes, info.geo, info.carbon_g_per_gb};
        if (i > 0) {
            const auto& adj = topo.neighbors(sequence[i - 1]);
            auto it = std::find_if(adj.begin(), adj.end(), [&](const auto& a) { return a.neighbor == sequence[i]; });
            if (it == adj.end()) {
                throw DomainError("no link between " + sequence[i - 1].to_string() + " and " + sequence[i].to_string());
            }
            hop.latency_ms += it->link.latency_ms;
            hop.bandwidth_mbps = std::min(hop.bandwidth_mbps, it->link.bandwidth_mbps);
            hop.mtu_bytes = std::min(hop.mtu_bytes, it->link.mtu_bytes);
        }
        hops.push_back(std::move(hop));
    }
    return Path(std::move(hops));
}

std::vector<Path> enumerate_paths(const Topology& topo, const IsdAs& src, const IsdAs& dst, std::size_t max_hops,
                                  std::size_t max_paths)
{
    if (!topo.contains(src) || !topo.contains(dst)) {
        throw DomainError("enumerate_paths: unknown endpoint " + (topo.contains(src) ? dst : src).to_string());
    }
    if (max_hops < 1 || max_paths < 1) {
        throw DomainError("enumerate_paths: max_hops and max_paths must be >= 1");
    }
    std::vector<Path> out;
    if (src == dst) {
        out.push_back(decorate(topo, {src}));
        return out;
    }

    // Iterative DFS; each frame remembers the next neighbour index to try.
    std::vector<IsdAs> stack{src};
    std::vector<std::size_t> cursor{0};
    std::unordered_set<IsdAs> on_path{src};
    while (!stack.empty()) {
        const auto& adj = topo.neighbors(stack.back());
        auto& next = cursor.back();
        if (next >= adj.size() || stack.size() >= max_hops) {
            on_path.erase(stack.back());
            stack.pop_back();
            cursor.pop_back();
            continue;
        }
        const auto candidate = adj[next++].neighbor;
        if (on_path.contains(candidate)) {
            continue;
        }
        if (candidate == dst) {
            auto seq = stack;
            seq.push_back(dst);
            out.push_back(decorate(topo, seq));
            continue;
        }
        stack.push_back(candidate);
        cursor.push_back(0);
        on_path.insert(candidate);
    }

    std::sort(out.begin(), out.end(), [](const Path& a, const Path& b) {
        if (a.meta().latency_ms != b.meta().latency_ms) {
            return a.meta().latency_ms < b.meta().latency_ms;
        }
        return hop_sequence_less(a, b);
    });
    if (out.size() > max_paths) {
        out.erase(out.begin() + static_cast<std::ptrdiff_t>(max_paths), out.end());
    }
    return out;
}

PathDb::PathDb(std::shared_ptr<const Topology> topology, const Clock& clock, PathDbOptions options)
  : topology_(std::move(topology))
  , clock_(clock)
  , options_(options)
{
    if (!topology_) {
        throw DomainError("PathDb requires a topology");
    }
}

std::shared_ptr<const PathSet> PathDb::lookup(const IsdAs& src, const IsdAs& dst)
{
    const auto now = clock_.now();
    const auto key = std::make_pair(src, dst);
    {
        std::lock_guard lock(mutex_);
        auto it = cache_.find(key);
        if (it != cache_.end() && now - it->second->fetched_at < options_.ttl) {
            return it->second;
        }
    }

    auto fresh = std::make_shared<PathSet>();
    fresh->src = src;
    fresh->dst = dst;
    fresh->fetched_at = now;
    if (topology_->contains(src) && topology_->contains(dst)) {
        fresh->paths = enumerate_paths(*topology_, src, dst, options_.max_hops, options_.max_paths);
    }
    enumerations_.fetch_add(1);

    std::lock_guard lock(mutex_);
    auto& slot = cache_[key];
    if (!slot || slot->fetched_at <= fresh->fetched_at) {
        slot = fresh;
    }
    return slot;
}

} // namespace pan::pathdb
