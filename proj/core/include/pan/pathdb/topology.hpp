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

#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <vector>

namespace pan::pathdb {

/// Per-AS decoration defaults applied to every hop through the AS.
struct AsInfo {
    IsdAs id;
    double latency_ms = 0.0;
    double bandwidth_mbps = 1000.0;
    std::uint32_t mtu_bytes = 1500;
    double carbon_g_per_gb = 0.0;
    std::optional<GeoCoord> geo;
};

/// Undirected inter-AS link.
struct Link {
    IsdAs a;
    IsdAs b;
    double latency_ms = 0.0;
    double bandwidth_mbps = 1000.0;
    std::uint32_t mtu_bytes = 1500;
};

/// Static AS-level topology. Validated on construction and immutable after.
class Topology
{
  public:
    /// Throws DomainError on dangling link endpoints, self or duplicate links,
    /// wildcard identities, or a local AS that is not declared.
    Topology(IsdAs local_as, std::vector<AsInfo> ases, std::vector<Link> links);

    const IsdAs& local_as() const noexcept { return local_as_; }
    const std::map<IsdAs, AsInfo>& ases() const noexcept { return ases_; }
    const std::vector<Link>& links() const noexcept { return links_; }

    bool contains(const IsdAs& id) const { return ases_.contains(id); }
    const AsInfo& as_info(const IsdAs& id) const;

    struct Adjacent {
        IsdAs neighbor;
        Link link;
    };
    /// Neighbours sorted by IsdAs.
    const std::vector<Adjacent>& neighbors(const IsdAs& id) const;

  private:
    IsdAs local_as_;
    std::map<IsdAs, AsInfo> ases_;
    std::vector<Link> links_;
    std::map<IsdAs, std::vector<Adjacent>> adjacency_;
};

/// Reads the JSON topology document. Syntax errors carry the byte offset;
/// semantic errors surface as DomainError.
Topology load_topology(std::istream& source);
Topology load_topology_file(const std::filesystem::path& file);

} // namespace pan::pathdb
