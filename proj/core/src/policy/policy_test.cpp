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

#include "pan/errors.hpp"
#include "pan/pathdb/path_db.hpp"
#include "pan/policy/policy.hpp"

#include "oracles.hpp"
#include "testbed.hpp"

#include <gtest/gtest.h>

#include <random>

namespace pan::policy {
namespace {

using testing::Sequence;

std::vector<Path> all_paths(const pathdb::Topology& topo)
{
    std::vector<Path> out;
    for (const auto& [dst, info] : topo.ases()) {
        auto paths = pathdb::enumerate_paths(topo, topo.local_as(), dst, 8, 100000);
        out.insert(out.end(), paths.begin(), paths.end());
    }
    return out;
}

HopMeta hop(std::uint32_t isd, std::uint64_t as, double lat)
{
    HopMeta h;
    h.id = {isd, as};
    h.latency_ms = lat;
    return h;
}

TEST(PolicyParseTest, GeofenceExample)
{
    auto p = parse("- 3-0\n+ 0-0");
    ASSERT_EQ(p.acl.size(), 2u);
    EXPECT_EQ(p.acl[0], (AclEntry{Action::deny, {3, 0}}));
    EXPECT_EQ(p.acl[1], (AclEntry{Action::allow, {0, 0}}));
    EXPECT_TRUE(p.orderings.empty());
    EXPECT_EQ(decide(p, {3, 300}), Action::deny);
    EXPECT_EQ(decide(p, {1, 300}), Action::allow);
}

TEST(PolicyParseTest, DefaultEntryAppended)
{
    auto p = parse("order latency asc");
    ASSERT_EQ(p.acl.size(), 1u);
    EXPECT_EQ(p.acl[0], (AclEntry{Action::allow, {0, 0}}));
    ASSERT_EQ(p.orderings.size(), 1u);
    EXPECT_EQ(p.orderings[0], (OrderKey{Metric::latency, Direction::asc}));

    EXPECT_EQ(parse("").acl, (std::vector<AclEntry>{{Action::allow, {}}}));
    auto deny_all = parse("- 0-0");
    EXPECT_EQ(deny_all.acl, (std::vector<AclEntry>{{Action::deny, {}}}));
    // A wildcard default that is not last still gets a trailing default.
    auto mid = parse("- 0-0\n+ 1-0");
    EXPECT_EQ(mid.acl.size(), 3u);
}

TEST(PolicyParseTest, CommentsAndWhitespace)
{
    auto p = parse("# header\n\n  -   3-0   # no ISD 3\n\t+ 1-110\norder  bandwidth\tdesc\r\norder hops asc\n");
    ASSERT_EQ(p.acl.size(), 3u);
    EXPECT_EQ(p.acl[1], (AclEntry{Action::allow, {1, 110}}));
    ASSERT_EQ(p.orderings.size(), 2u);
    EXPECT_EQ(p.orderings[0], (OrderKey{Metric::bandwidth, Direction::desc}));
    EXPECT_EQ(p.orderings[1], (OrderKey{Metric::hops, Direction::asc}));
}

std::optional<std::size_t> error_line(const std::string& text)
{
    try {
        parse(text);
    } catch (const ParseError& e) {
        return e.line();
    }
    return std::nullopt;
}

TEST(PolicyParseTest, ErrorsCarryLineNumbers)
{
    EXPECT_EQ(error_line("order warp asc"), 1u);
    EXPECT_EQ(error_line("+ 1-0\n\nfrobnicate 3"), 3u);
    EXPECT_EQ(error_line("# ok\n- 3-x"), 2u);
    EXPECT_EQ(error_line("+"), 1u);
    EXPECT_EQ(error_line("order latency sideways"), 1u);
    EXPECT_EQ(error_line("order latency"), 1u);
    EXPECT_EQ(error_line("order latency asc\norder latency desc"), 2u);
    EXPECT_EQ(error_line("+ 1-0\n- 2-0"), std::nullopt);
}

TEST(PolicyParseTest, RenderRoundTrips)
{
    std::mt19937_64 rng(3);
    for (int i = 0; i < 300; ++i) {
        auto topo = testing::random_topology(rng);
        auto p = testing::random_policy(rng, topo);
        auto text = render(p);
        auto reparsed = parse(text);
        EXPECT_EQ(reparsed.acl, p.acl) << text;
        EXPECT_EQ(reparsed.orderings, p.orderings) << text;
        EXPECT_EQ(render(reparsed), text);
    }
}

TEST(PolicyParseTest, MetricNames)
{
    for (auto m : {Metric::latency, Metric::bandwidth, Metric::hops, Metric::carbon, Metric::mtu}) {
        EXPECT_EQ(parse_metric(to_string(m)), m);
    }
    EXPECT_EQ(parse_metric("speed"), std::nullopt);
}

TEST(PolicyEvaluateTest, AllowAllKeepsDefaultOrder)
{
    auto topo = pathdb::load_topology_file(testing::fixture("config/topology.json"));
    auto paths = pathdb::enumerate_paths(topo, topo.local_as(), parse_isd_as("2-210"));
    auto out = evaluate(parse("+ 0-0"), paths);
    ASSERT_EQ(out.size(), paths.size());
    // No ordering keys: ties broken by hop sequence alone.
    for (std::size_t i = 1; i < out.size(); ++i) {
        EXPECT_TRUE(hop_sequence_less(out[i - 1], out[i]));
    }
    EXPECT_TRUE(evaluate(parse("+ 0-0"), std::vector<Path>{}).empty());
}

TEST(PolicyEvaluateTest, GeofenceOnDiamond)
{
    auto topo = pathdb::load_topology_file(testing::fixture("config/topology.json"));
    auto paths = pathdb::enumerate_paths(topo, topo.local_as(), parse_isd_as("2-200"));
    ASSERT_EQ(paths.size(), 2u);
    auto p = parse("- 3-0\n+ 0-0");
    auto out = evaluate(p, paths);
    ASSERT_EQ(out.size(), 1u);
    EXPECT_FALSE(out[0].traverses_isd(3));
    EXPECT_EQ(testing::sequences(out), testing::brute_force_evaluate(p, paths));
}

TEST(PolicyEvaluateTest, OrdersByLatency)
{
    std::vector<Path> paths{Path({hop(1, 1, 0), hop(1, 2, 30)}), Path({hop(1, 1, 0), hop(1, 3, 10)}),
                            Path({hop(1, 1, 0), hop(1, 4, 20)})};
    auto out = evaluate(parse("order latency asc"), paths);
    ASSERT_EQ(out.size(), 3u);
    EXPECT_DOUBLE_EQ(out[0].meta().latency_ms, 10);
    EXPECT_DOUBLE_EQ(out[1].meta().latency_ms, 20);
    EXPECT_DOUBLE_EQ(out[2].meta().latency_ms, 30);
    auto desc = evaluate(parse("order latency desc"), paths);
    EXPECT_DOUBLE_EQ(desc[0].meta().latency_ms, 30);
}

TEST(PolicyEvaluateTest, MatchesBruteForceOracle)
{
    std::mt19937_64 rng(77);
    std::size_t nonempty = 0;
    for (int trial = 0; trial < 250; ++trial) {
        auto topo = testing::random_topology(rng);
        auto paths = all_paths(topo);
        auto p = testing::random_policy(rng, topo);
        auto got = evaluate(p, paths);
        ASSERT_EQ(testing::sequences(got), testing::brute_force_evaluate(p, paths)) << render(p);
        nonempty += got.empty() ? 0 : 1;
    }
    EXPECT_GT(nonempty, 100u);
}

TEST(PolicyEvaluateTest, SubsetIdempotentAndMonotone)
{
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 200; ++trial) {
        auto topo = testing::random_topology(rng);
        auto paths = all_paths(topo);
        auto p = testing::random_policy(rng, topo);
        auto once = evaluate(p, paths);
        auto twice = evaluate(p, once);
        EXPECT_EQ(testing::sequences(once), testing::sequences(twice));
        for (const auto& q : once) {
            EXPECT_NE(std::find(paths.begin(), paths.end(), q), paths.end());
            EXPECT_TRUE(is_compliant(p, q));
        }
        if (!p.orderings.empty()) {
            const auto key = p.orderings.front();
            for (std::size_t i = 1; i < once.size(); ++i) {
                auto a = metric_value(once[i - 1], key.metric);
                auto b = metric_value(once[i], key.metric);
                EXPECT_TRUE(key.direction == Direction::asc ? a <= b : a >= b);
            }
        }
    }
}

TEST(PolicyEvaluateTest, GeofencingSoundness)
{
    std::mt19937_64 rng(1234);
    for (int trial = 0; trial < 200; ++trial) {
        auto topo = testing::random_topology(rng);
        auto paths = all_paths(topo);
        auto p = testing::random_policy(rng, topo);
        const std::uint32_t banned = 1 + rng() % 4;
        p.acl.insert(p.acl.begin(), AclEntry{Action::deny, {banned, 0}});
        for (const auto& q : evaluate(p, paths)) {
            EXPECT_FALSE(q.traverses_isd(banned));
        }
    }
}

TEST(PolicyCombineTest, GeofencePlusCarbon)
{
    std::vector<Policy> parts{parse("- 3-0\n+ 0-0"), parse("order carbon asc")};
    auto c = combine(parts);
    EXPECT_EQ(c.acl, (std::vector<AclEntry>{{Action::deny, {3, 0}}, {Action::allow, {}}}));
    EXPECT_EQ(c.orderings, (std::vector<OrderKey>{{Metric::carbon, Direction::asc}}));

    auto topo = pathdb::load_topology_file(testing::fixture("config/topology.json"));
    auto out = evaluate(c, pathdb::enumerate_paths(topo, topo.local_as(), parse_isd_as("2-210")));
    ASSERT_FALSE(out.empty());
    for (const auto& q : out) {
        EXPECT_FALSE(q.traverses_isd(3));
    }
}

TEST(PolicyCombineTest, EarlierDefaultsDroppedAndDuplicateMetricsSkipped)
{
    std::vector<Policy> parts{parse("+ 1-0\norder latency asc"), parse("- 1-110\n- 0-0\norder latency desc\norder hops asc")};
    auto c = combine(parts);
    EXPECT_EQ(c.acl, (std::vector<AclEntry>{{Action::allow, {1, 0}}, {Action::deny, {1, 110}}, {Action::deny, {}}}));
    EXPECT_EQ(c.orderings,
              (std::vector<OrderKey>{{Metric::latency, Direction::asc}, {Metric::hops, Direction::asc}}));
}

TEST(PolicyCombineTest, SingleElementIdentity)
{
    auto p = parse("- 2-0\norder mtu desc");
    std::vector<Policy> one{p};
    EXPECT_EQ(combine(one), p);
    EXPECT_THROW(combine(std::vector<Policy>{}), DomainError);
}

TEST(PolicyCombineTest, AllowAllTwiceEqualsAllowAll)
{
    std::mt19937_64 rng(42);
    std::vector<Policy> twice{parse("+ 0-0"), parse("+ 0-0")};
    auto c = combine(twice);
    for (int trial = 0; trial < 50; ++trial) {
        auto topo = testing::random_topology(rng);
        auto paths = all_paths(topo);
        EXPECT_EQ(testing::sequences(evaluate(c, paths)), testing::brute_force_evaluate(parse("+ 0-0"), paths));
    }
}

} // namespace
} // namespace pan::policy
