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

#include "http_client.hpp"
#include "testbed.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>
#include <thread>

namespace pan::testing {
namespace {

using namespace std::chrono_literals;

std::string file_contents(const std::string& relative)
{
    std::ifstream in(fixture("www") / relative, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

TestbedOptions basic_options()
{
    TestbedOptions o;
    o.pan_hosts = {{"www.pan.test", parse_isd_as("2-200")}};
    o.legacy_hosts = {"ads.legacy.test"};
    o.policy_text = "order latency asc";
    return o;
}

TEST(ProxyServerTest, GetOverPanPath)
{
    Testbed bed(basic_options());
    auto r = proxy_get(bed.proxy(), "http://www.pan.test/index.html");
    EXPECT_EQ(r.status, 200);
    EXPECT_EQ(r.headers.get("X-PAN-Status"), "pan");
    EXPECT_EQ(r.headers.get("X-PAN-Compliant"), "true");
    auto path = r.headers.get("X-PAN-Path");
    ASSERT_TRUE(path);
    EXPECT_NE(path->find("3-300"), std::string_view::npos); // lowest-latency branch
    EXPECT_EQ(r.body, file_contents("index.html"));

    auto audit = bed.gateway().emu().audit().snapshot();
    ASSERT_EQ(audit.size(), 1u);
    EXPECT_GT(audit[0].bytes_out, 0u);
    EXPECT_GT(audit[0].bytes_in, r.body.size());
    EXPECT_TRUE(audit[0].closed);
    EXPECT_EQ(bed.gateway().stats().per_host.at("www.pan.test").requests_pan, 1u);
}

TEST(ProxyServerTest, BinaryBodyIntact)
{
    Testbed bed(basic_options());
    auto r = proxy_get(bed.proxy(), "http://www.pan.test/blob.bin");
    EXPECT_EQ(r.status, 200);
    EXPECT_EQ(r.body, file_contents("blob.bin"));
}

TEST(ProxyServerTest, LegacyFallbackForIpOnlyHost)
{
    Testbed bed(basic_options());
    auto r = proxy_get(bed.proxy(), "http://ads.legacy.test/js/app.js");
    EXPECT_EQ(r.status, 200);
    EXPECT_EQ(r.headers.get("X-PAN-Status"), "legacy");
    EXPECT_FALSE(r.headers.contains("X-PAN-Path"));
    EXPECT_EQ(r.body, file_contents("js/app.js"));
    EXPECT_TRUE(bed.gateway().emu().audit().snapshot().empty());
}

TEST(ProxyServerTest, StrictModeBlocksLegacyHost)
{
    auto o = basic_options();
    o.mode = proxy::ModeValue::strict;
    Testbed bed(o);
    auto r = proxy_get(bed.proxy(), "http://ads.legacy.test/js/app.js");
    EXPECT_EQ(r.status, 502);
    EXPECT_EQ(r.headers.get("X-PAN-Blocked"), "no-pan-connectivity");
    EXPECT_EQ(r.headers.get("X-PAN-Status"), "blocked");
    EXPECT_TRUE(bed.origin("ads.legacy.test").access_log().empty());

    auto ok = proxy_get(bed.proxy(), "http://www.pan.test/index.html");
    EXPECT_EQ(ok.status, 200);
    EXPECT_EQ(ok.headers.get("X-PAN-Status"), "pan");
}

TEST(ProxyServerTest, NonCompliantFallbackIsMarked)
{
    auto o = basic_options();
    o.policy_text = "- 2-0";
    Testbed bed(o);
    auto r = proxy_get(bed.proxy(), "http://www.pan.test/index.html");
    EXPECT_EQ(r.status, 200);
    EXPECT_EQ(r.headers.get("X-PAN-Status"), "legacy");
    EXPECT_EQ(r.headers.get("X-PAN-Compliant"), "false");

    bed.gateway().set_global_mode(proxy::ModeValue::strict);
    auto blocked = proxy_get(bed.proxy(), "http://www.pan.test/index.html");
    EXPECT_EQ(blocked.status, 502);
    EXPECT_EQ(blocked.headers.get("X-PAN-Blocked"), "no-compliant-path");
}

std::unique_ptr<origin::OriginServer> static_origin(std::optional<std::int64_t> max_age = std::nullopt)
{
    origin::OriginConfig cfg;
    cfg.root = fixture("www");
    cfg.strict_max_age_s = max_age;
    auto o = std::make_unique<origin::OriginServer>(cfg);
    o->start();
    return o;
}

TEST(ProxyServerTest, PanFailureFallsBackOrBlocks)
{
    auto legacy = static_origin();
    auto o = basic_options();
    o.extra_static = {{"flaky.pan.test", {parse_isd_as("2-200"), "127.0.0.1", closed_port()}}};
    o.extra_legacy = {{"flaky.pan.test", {"127.0.0.1", legacy->port()}}};
    Testbed bed(o);
    auto r = proxy_get(bed.proxy(), "http://flaky.pan.test/index.html");
    EXPECT_EQ(r.status, 200);
    EXPECT_EQ(r.headers.get("X-PAN-Status"), "legacy");

    bed.gateway().set_host_mode("flaky.pan.test", proxy::ModeValue::strict);
    auto s = proxy_get(bed.proxy(), "http://flaky.pan.test/index.html");
    EXPECT_EQ(s.status, 502);
    EXPECT_EQ(s.headers.get("X-PAN-Blocked"), "pan-unreachable");
    auto page = bed.gateway().classify_page("flaky.pan.test");
    EXPECT_EQ(page.via_legacy, 1u);
    EXPECT_EQ(page.blocked, 1u);
}

TEST(ProxyServerTest, LegacyConnectFailures)
{
    Blackhole hole;
    auto o = basic_options();
    o.upstream_timeout = 400ms;
    o.extra_legacy = {{"refused.test", {"127.0.0.1", closed_port()}}, {"slow.test", hole.endpoint()}};
    Testbed bed(o);
    auto refused = proxy_get(bed.proxy(), "http://refused.test/");
    EXPECT_EQ(refused.status, 502);
    EXPECT_EQ(refused.headers.get("X-PAN-Status"), "legacy");
    auto slow = proxy_get(bed.proxy(), "http://slow.test/");
    EXPECT_EQ(slow.status, 504);
    EXPECT_GE(slow.elapsed_ms, 400.0);
}

TEST(ProxyServerTest, MalformedRequestsGet400)
{
    Testbed bed(basic_options());
    EXPECT_EQ(fetch(bed.proxy(), "GET", "/relative/path").status, 400);
    EXPECT_EQ(fetch(bed.proxy(), "GET", "https://www.pan.test/").status, 400);
    auto garbage = raw_exchange(bed.proxy(), "THIS IS NOT HTTP\r\n\r\n");
    EXPECT_TRUE(garbage.starts_with("HTTP/1.1 400")) << garbage;
    auto bad_connect = raw_exchange(bed.proxy(), "CONNECT :x HTTP/1.1\r\n\r\n");
    EXPECT_TRUE(bad_connect.starts_with("HTTP/1.1 400")) << bad_connect;
}

TEST(ProxyServerTest, KeepAliveServesSequentialRequests)
{
    Testbed bed(basic_options());
    auto out = raw_exchange(bed.proxy(),
                            "GET http://www.pan.test/css/site.css HTTP/1.1\r\nHost: www.pan.test\r\n\r\n"
                            "GET http://ads.legacy.test/css/print.css HTTP/1.1\r\nHost: ads.legacy.test\r\n"
                            "Connection: close\r\n\r\n");
    auto first = out.find("HTTP/1.1 200");
    auto second = out.find("HTTP/1.1 200", first + 1);
    ASSERT_NE(first, std::string::npos);
    ASSERT_NE(second, std::string::npos) << out;
    EXPECT_NE(out.find(file_contents("css/site.css")), std::string::npos);
    EXPECT_NE(out.find(file_contents("css/print.css")), std::string::npos);
    EXPECT_NE(out.find("X-PAN-Status: legacy"), std::string::npos);
}

std::string connect_and_get(const net::Endpoint& proxy, const std::string& authority, const std::string& host,
                            const std::string& path, std::string* established = nullptr)
{
    auto sock = net::connect_tcp(proxy.host, proxy.port, 5s);
    sock.write_all(std::string("CONNECT " + authority + " HTTP/1.1\r\nHost: " + authority + "\r\n\r\n"));
    std::string buf;
    char tmp[4096];
    while (buf.find("\r\n\r\n") == std::string::npos) {
        auto n = sock.read_some(tmp);
        if (n <= 0) {
            return buf;
        }
        buf.append(tmp, static_cast<std::size_t>(n));
    }
    auto head_end = buf.find("\r\n\r\n") + 4;
    if (established) {
        *established = buf.substr(0, head_end);
    }
    if (!buf.starts_with("HTTP/1.1 200")) {
        return {};
    }
    sock.write_all(std::string("GET " + path + " HTTP/1.1\r\nHost: " + host + "\r\nConnection: close\r\n\r\n"));
    std::string resp = buf.substr(head_end);
    for (auto n = sock.read_some(tmp); n > 0; n = sock.read_some(tmp)) {
        resp.append(tmp, static_cast<std::size_t>(n));
    }
    return resp;
}

TEST(ProxyServerTest, ConnectTunnelsLegacyAndPan)
{
    Testbed bed(basic_options());
    std::string head;
    auto legacy = connect_and_get(bed.proxy(), "ads.legacy.test:80", "ads.legacy.test", "/js/app.js", &head);
    EXPECT_NE(head.find("X-PAN-Status: legacy"), std::string::npos) << head;
    EXPECT_TRUE(legacy.starts_with("HTTP/1.1 200"));
    EXPECT_NE(legacy.find(file_contents("js/app.js")), std::string::npos);

    auto pan = connect_and_get(bed.proxy(), "www.pan.test:443", "www.pan.test", "/js/vendor.js", &head);
    EXPECT_NE(head.find("X-PAN-Status: pan"), std::string::npos) << head;
    EXPECT_NE(pan.find(file_contents("js/vendor.js")), std::string::npos);

    auto audit = bed.gateway().emu().audit().snapshot();
    ASSERT_EQ(audit.size(), 1u);
    EXPECT_GT(audit[0].bytes_in, file_contents("js/vendor.js").size());
    // Tunnels are booked once the relay winds down, which may trail the client's EOF.
    auto stats = bed.gateway().stats();
    for (int i = 0; i < 200 && stats.per_host.size() < 2; ++i) {
        std::this_thread::sleep_for(10ms);
        stats = bed.gateway().stats();
    }
    ASSERT_EQ(stats.per_host.size(), 2u);
    EXPECT_EQ(stats.per_host.at("www.pan.test").requests_pan, 1u);
    EXPECT_EQ(stats.per_host.at("ads.legacy.test").requests_legacy, 1u);
}

TEST(ProxyServerTest, ConnectBlockedInStrictMode)
{
    auto o = basic_options();
    o.mode = proxy::ModeValue::strict;
    Testbed bed(o);
    std::string head;
    auto body = connect_and_get(bed.proxy(), "ads.legacy.test:443", "ads.legacy.test", "/", &head);
    EXPECT_TRUE(head.starts_with("HTTP/1.1 502")) << head;
    EXPECT_NE(head.find("X-PAN-Blocked: no-pan-connectivity"), std::string::npos);
    EXPECT_TRUE(body.empty());
}

TEST(ProxyServerTest, StrictHeaderOnlyTrustedOverPan)
{
    auto o = basic_options();
    o.strict_max_age = 600;
    Testbed bed(o);
    auto now = bed.gateway().clock().now();
    proxy_get(bed.proxy(), "http://www.pan.test/index.html");
    EXPECT_TRUE(bed.gateway().resolver().is_strict("www.pan.test", now));
    auto mode = bed.gateway().effective_mode("www.pan.test", bed.gateway().clock().now());
    EXPECT_EQ(mode.origin, proxy::ModeOrigin::header_imposed);
}

TEST(ProxyServerTest, LegacyHeaderOnlyAdvertises)
{
    // The host is reachable over legacy only; its Strict-SCION header must not
    // create an obligation, but does trigger rediscovery.
    auto with_header = static_origin(600);
    auto o = basic_options();
    o.extra_legacy = {{"adv.test", {"127.0.0.1", with_header->port()}}};
    Testbed bed(o);
    auto r = proxy_get(bed.proxy(), "http://adv.test/index.html");
    EXPECT_EQ(r.status, 200);
    EXPECT_EQ(r.headers.get("X-PAN-Status"), "legacy");
    EXPECT_EQ(r.headers.get("Strict-SCION"), "max-age=600");
    EXPECT_FALSE(bed.gateway().resolver().is_strict("adv.test", bed.gateway().clock().now()));
}

TEST(ProxyServerTest, PageIdFromHeaderRefererOrHost)
{
    Testbed bed(basic_options());
    proxy_get(bed.proxy(), "http://www.pan.test/index.html", {{"X-PAN-Page", "news"}});
    proxy_get(bed.proxy(), "http://ads.legacy.test/js/app.js", {{"Referer", "http://www.pan.test/index.html"}});
    proxy_get(bed.proxy(), "http://ads.legacy.test/js/vendor.js");
    EXPECT_EQ(bed.gateway().classify_page("news").total, 1u);
    EXPECT_EQ(bed.gateway().classify_page("www.pan.test").total, 1u);
    EXPECT_EQ(bed.gateway().classify_page("ads.legacy.test").total, 1u);
}

TEST(ProxyServerTest, ForwardsRequestBodies)
{
    Testbed bed(basic_options());
    auto r = fetch(bed.proxy(), "POST", "http://www.pan.test/index.html", {{"Host", "www.pan.test"}}, "a=1&b=2");
    // The static origin has no POST handler; the status is relayed as-is.
    EXPECT_NE(r.status, 0);
    EXPECT_NE(r.status, 502);
    auto log = bed.origin("www.pan.test").access_log();
    ASSERT_EQ(log.size(), 1u);
    EXPECT_TRUE(log[0].starts_with("POST /index.html"));
}

TEST(ProxyServerTest, StopsWithOpenConnections)
{
    auto bed = std::make_unique<Testbed>(basic_options());
    auto idle = net::connect_tcp("127.0.0.1", bed->proxy().port, 1s);
    const auto start = std::chrono::steady_clock::now();
    bed.reset();
    EXPECT_LT(std::chrono::steady_clock::now() - start, 2s);
}

} // namespace
} // namespace pan::testing
