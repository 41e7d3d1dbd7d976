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

#include "pan/clock.hpp"
#include "pan/pathdb/path_db.hpp"
#include "pan/policy/policy.hpp"
#include "pan/proxy/gateway.hpp"
#include "pan/resolver/resolver.hpp"

#include <benchmark/benchmark.h>

#include <iterator>
#include <memory>
#include <random>

namespace {

using namespace pan;

/// Complete graph over n ASes spread across four ISDs.
pathdb::Topology clique(std::size_t n)
{
    std::vector<pathdb::AsInfo> ases;
    for (std::size_t i = 0; i < n; ++i) {
        pathdb::AsInfo info;
        info.id = {static_cast<std::uint32_t>(1 + i % 4), 10 + i};
        info.latency_ms = static_cast<double>(i % 7);
        ases.push_back(info);
    }
    std::vector<pathdb::Link> links;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            links.push_back({ases[i].id, ases[j].id, static_cast<double>((i * 31 + j * 17) % 23)});
        }
    }
    return pathdb::Topology(ases[0].id, ases, links);
}

void BM_EnumeratePaths(benchmark::State& state)
{
    const auto topo = clique(static_cast<std::size_t>(state.range(0)));
    const auto dst = std::prev(topo.ases().end())->first;
    for (auto _ : state) {
        benchmark::DoNotOptimize(pathdb::enumerate_paths(topo, topo.local_as(), dst));
    }
}
BENCHMARK(BM_EnumeratePaths)->DenseRange(4, 8, 2);

void BM_PolicyEvaluate(benchmark::State& state)
{
    const auto topo = clique(7);
    const auto dst = std::prev(topo.ases().end())->first;
    const auto paths = pathdb::enumerate_paths(topo, topo.local_as(), dst, 8, 100000);
    const auto policy = policy::parse("- 3-0\n+ 1-0\n+ 2-0\n- 4-12\norder latency asc\norder hops desc\n");
    for (auto _ : state) {
        benchmark::DoNotOptimize(policy::evaluate(policy, paths));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(paths.size()));
}
BENCHMARK(BM_PolicyEvaluate);

void BM_PolicyParse(benchmark::State& state)
{
    const std::string text = "# geofence\n- 3-0\n- 4-0\n+ 1-0\n+ 2-0\norder latency asc\norder carbon asc\n";
    for (auto _ : state) {
        benchmark::DoNotOptimize(policy::parse(text));
    }
}
BENCHMARK(BM_PolicyParse);

void BM_PlanRequest(benchmark::State& state)
{
    static const ManualClock clock(from_unix_seconds(1000));
    auto topo = std::make_shared<const pathdb::Topology>(clique(8));
    const auto dst = std::prev(topo->ases().end())->first;
    std::map<std::string, resolver::ScionAddress> hosts{{"pan.bench", {dst, "127.0.0.1", 1}}};
    auto res = std::make_unique<resolver::Resolver>(hosts, std::make_shared<resolver::FixtureTxtSource>());
    proxy::Gateway gw(topo, std::move(res), policy::parse("- 3-0\norder latency asc\n"), clock);
    const std::vector<std::string> names{"pan.bench", "legacy.bench"};
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(gw.plan_request(names[i++ % names.size()], "page"));
    }
}
BENCHMARK(BM_PlanRequest);

} // namespace

BENCHMARK_MAIN();
