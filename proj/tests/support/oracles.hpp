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

// Brute-force reference implementations. These deliberately avoid the
// production code paths they check: no DFS, no policy::decide, no
// PathMetadata aggregation.

#include "pan/path.hpp"
#include "pan/pathdb/topology.hpp"
#include "pan/policy/policy.hpp"

#include <random>
#include <set>
#include <vector>

namespace pan::testing {

using Sequence = std::vector<IsdAs>;

/// Every simple src->dst sequence of at most max_hops nodes, found by
/// trying all ordered selections of distinct intermediate nodes.
std::set<Sequence> brute_force_simple_paths(const pathdb::Topology& topo, const IsdAs& src, const IsdAs& dst,
                                            std::size_t max_hops);

/// First-match ACL filter over every hop plus lexicographic key sort with a
/// hop-sequence tiebreak, recomputing metrics from raw hop data.
std::vector<Sequence> brute_force_evaluate(const policy::Policy& policy, const std::vector<Path>& paths);

std::vector<Sequence> sequences(const std::vector<Path>& paths);

struct RandomTopologyParams {
    std::size_t min_ases = 2;
    std::size_t max_ases = 8;
    double link_probability = 0.45;
    std::uint32_t max_isd = 4;
};

pathdb::Topology random_topology(std::mt19937_64& rng, const RandomTopologyParams& params = {});
policy::Policy random_policy(std::mt19937_64& rng, const pathdb::Topology& topo);

/// Fixed fixture graphs (chain, diamond, ring, clique, star, ladder...).
std::vector<pathdb::Topology> fixture_topologies();

} // namespace pan::testing
