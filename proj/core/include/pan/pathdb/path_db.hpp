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
#include "pan/pathdb/topology.hpp"

#include <atomic>
#include <chrono>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <utility>
#include <vector>

namespace pan::pathdb {

inline constexpr std::size_t kDefaultMaxHops = 8;
inline constexpr std::size_t kDefaultMaxPaths = 128;

/// All simple paths from src to dst of at most max_hops hops, ordered by
/// latency then hop sequence, truncated to max_paths.
std::vector<Path> enumerate_paths(const Topology& topo, const IsdAs& src, const IsdAs& dst,
                                  std::size_t max_hops = kDefaultMaxHops,
                                  std::size_t max_paths = kDefaultMaxPaths);

/// Decorates a hop sequence with per-AS and incoming-link metadata.
Path decorate(const Topology& topo, const std::vector<IsdAs>& sequence);

struct PathSet {
    IsdAs src;
    IsdAs dst;
    std::vector<Path> paths;
    Timestamp fetched_at;
};

struct PathDbOptions {
    std::chrono::seconds ttl{60};
    std::size_t max_hops = kDefaultMaxHops;
    std::size_t max_paths = kDefaultMaxPaths;
};

/// Stand-in for the local AS path service. Results are cached per (src, dst)
/// for `ttl`; concurrent lookups may see the previous set while a refresh is
/// being computed but never a partial one.
class PathDb
{
  public:
    PathDb(std::shared_ptr<const Topology> topology, const Clock& clock, PathDbOptions options = {});

    std::shared_ptr<const PathSet> lookup(const IsdAs& src, const IsdAs& dst);
    std::shared_ptr<const PathSet> lookup(const IsdAs& dst) { return lookup(topology_->local_as(), dst); }

    const Topology& topology() const noexcept { return *topology_; }
    const PathDbOptions& options() const noexcept { return options_; }

    /// Number of enumerations performed so far (cache misses).
    std::size_t enumerations() const noexcept { return enumerations_.load(); }

  private:
    std::shared_ptr<const Topology> topology_;
    const Clock& clock_;
    PathDbOptions options_;
    std::mutex mutex_;
    std::map<std::pair<IsdAs, IsdAs>, std::shared_ptr<const PathSet>> cache_;
    std::atomic<std::size_t> enumerations_{0};
};

} // namespace pan::pathdb
