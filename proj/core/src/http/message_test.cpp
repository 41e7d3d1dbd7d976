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
#include "pan/http/message.hpp"

#include <gtest/gtest.h>

#include <algorithm>

namespace pan::http {
namespace {

/// Serves a fixed byte string in small pieces.
class ScriptedStream final : public net::ByteStream
{
  public:
    explicit ScriptedStream(std::string data, std::size_t piece = 7) : data_(std::move(data)), piece_(piece) {}

    std::ptrdiff_t read(std::span<char> buf) override
    {
        auto n = std::min({buf.size(), piece_, data_.size() - pos_});
        std::copy_n(data_.data() + pos_, n, buf.data());
        pos_ += n;
        return static_cast<std::ptrdiff_t>(n);
    }
    bool write(std::span<const char>) override { return true; }
    void shutdown_write() override {}
    void close() override {}

  private:
    std::string data_;
    std::size_t piece_;
    std::size_t pos_ = 0;
};

TEST(HeadersTest, CaseInsensitiveAndOrdered)
{
    Headers h;
    h.add("Content-Type", "text/html");
    h.add("X-A", "1");
    h.add("x-a", "2");
    EXPECT_EQ(h.get("content-type"), "text/html");
    EXPECT_EQ(h.get("X-A"), "1");
    h.set("X-a", "3");
    EXPECT_EQ(h.fields().size(), 2u);
    EXPECT_EQ(h.get("x-A"), "3");
    h.remove("CONTENT-TYPE");
    EXPECT_FALSE(h.contains("Content-Type"));
}

TEST(HeadersTest, StripsHopByHop)
{
    Headers h;
    h.add("Connection", "keep-alive, X-Private");
    h.add("Keep-Alive", "timeout=5");
    h.add("Proxy-Connection", "keep-alive");
    h.add("Proxy-Authorization", "Basic abc");
    h.add("Upgrade", "h2c");
    h.add("X-Private", "secret");
    h.add("Accept", "*/*");
    h.strip_hop_by_hop();
    ASSERT_EQ(h.fields().size(), 1u);
    EXPECT_EQ(h.fields()[0].name, "Accept");
}

TEST(HeadersTest, Tokens)
{
    EXPECT_TRUE(has_token("keep-alive, Close", "close"));
    EXPECT_FALSE(has_token("closed", "close"));
    EXPECT_TRUE(iequals("ABC", "abc"));
    EXPECT_FALSE(iequals("ab", "abc"));
}

TEST(MessageTest, ParsesRequestHead)
{
    auto req = parse_request_head("GET http://www.pan.test/a?b=1 HTTP/1.1\r\nHost: www.pan.test\r\n"
                                  "X-Folded:  spaced  \r\n\r\n");
    EXPECT_EQ(req.method, "GET");
    EXPECT_EQ(req.target, "http://www.pan.test/a?b=1");
    EXPECT_EQ(req.version, "HTTP/1.1");
    EXPECT_EQ(req.headers.get("host"), "www.pan.test");
    EXPECT_EQ(req.headers.get("x-folded"), "spaced");
    auto again = parse_request_head(serialize(req));
    EXPECT_EQ(again.target, req.target);
    EXPECT_EQ(again.headers.fields().size(), 2u);
}

TEST(MessageTest, RejectsMalformedHeads)
{
    for (const char* bad : {"GET\r\n\r\n", "GET / HTTP/1.1 extra\r\n\r\n", "GET / FTP/1.0\r\n\r\n",
                            "GET / HTTP/1.1\r\nNoColon\r\n\r\n", "GET / HTTP/1.1\r\n: empty\r\n\r\n",
                            "GET / HTTP/1.1\r\nBad Name: x\r\n\r\n"}) {
        EXPECT_THROW(parse_request_head(bad), ParseError) << bad;
    }
    EXPECT_THROW(parse_response_head("HTTP/1.1 abc OK\r\n\r\n"), ParseError);
    EXPECT_THROW(parse_response_head("HTTP/1.1 99 Low\r\n\r\n"), ParseError);
}

TEST(MessageTest, ParsesResponseHead)
{
    auto resp = parse_response_head("HTTP/1.1 404 Not Found\r\nContent-Length: 3\r\n\r\n");
    EXPECT_EQ(resp.status, 404);
    EXPECT_EQ(resp.reason, "Not Found");
    auto no_reason = parse_response_head("HTTP/1.0 204\r\n\r\n");
    EXPECT_EQ(no_reason.status, 204);
    EXPECT_EQ(reason_phrase(502), "Bad Gateway");
    EXPECT_EQ(reason_phrase(504), "Gateway Timeout");
}

TEST(MessageTest, Framing)
{
    RequestHead get = parse_request_head("GET / HTTP/1.1\r\n\r\n");
    EXPECT_EQ(request_framing(get).kind, Framing::none);
    RequestHead post = parse_request_head("POST / HTTP/1.1\r\nContent-Length: 12\r\n\r\n");
    EXPECT_EQ(request_framing(post).kind, Framing::content_length);
    EXPECT_EQ(request_framing(post).length, 12u);
    RequestHead chunked = parse_request_head("POST / HTTP/1.1\r\nTransfer-Encoding: chunked\r\n\r\n");
    EXPECT_EQ(request_framing(chunked).kind, Framing::chunked);
    RequestHead bad = parse_request_head("POST / HTTP/1.1\r\nContent-Length: -3\r\n\r\n");
    EXPECT_THROW(request_framing(bad), ParseError);

    auto r200 = parse_response_head("HTTP/1.1 200 OK\r\n\r\n");
    EXPECT_EQ(response_framing(r200, "GET").kind, Framing::until_close);
    EXPECT_EQ(response_framing(r200, "HEAD").kind, Framing::none);
    auto r304 = parse_response_head("HTTP/1.1 304 Not Modified\r\nContent-Length: 10\r\n\r\n");
    EXPECT_EQ(response_framing(r304, "GET").kind, Framing::none);
}

TEST(BufferedReaderTest, ReadsHeadAndLengthBody)
{
    ScriptedStream s("HTTP/1.1 200 OK\r\nContent-Length: 5\r\n\r\nhelloEXTRA");
    BufferedReader r(s);
    auto head = r.read_head();
    ASSERT_TRUE(head);
    auto resp = parse_response_head(*head);
    std::string body;
    ASSERT_TRUE(read_body_raw(r, response_framing(resp, "GET"), body));
    EXPECT_EQ(body, "hello");
    EXPECT_EQ(r.take_buffered().substr(0, 1), "E");
}

TEST(BufferedReaderTest, ReadsChunkedBodyVerbatim)
{
    const std::string wire = "4\r\nWiki\r\n5;ext=1\r\npedia\r\n0\r\nTrailer: x\r\n\r\n";
    ScriptedStream s(wire, 3);
    BufferedReader r(s);
    std::string body;
    ASSERT_TRUE(read_body_raw(r, {Framing::chunked, 0}, body));
    EXPECT_EQ(body, wire);
}

TEST(BufferedReaderTest, HandlesEofAndTruncation)
{
    ScriptedStream empty("");
    BufferedReader r1(empty);
    EXPECT_FALSE(r1.read_head());

    ScriptedStream partial("GET / HTTP/1.1\r\nHost: x\r\n");
    BufferedReader r2(partial);
    EXPECT_THROW(r2.read_head(), ParseError);

    ScriptedStream short_body("abc");
    BufferedReader r3(short_body);
    std::string out;
    EXPECT_FALSE(read_body_raw(r3, {Framing::content_length, 10}, out));

    ScriptedStream tail("until the end");
    BufferedReader r4(tail);
    out.clear();
    EXPECT_TRUE(read_body_raw(r4, {Framing::until_close, 0}, out));
    EXPECT_EQ(out, "until the end");
}

TEST(BufferedReaderTest, RejectsOversizedHead)
{
    std::string huge = "GET / HTTP/1.1\r\nX: " + std::string(BufferedReader::kMaxHeadBytes, 'a') + "\r\n\r\n";
    ScriptedStream s(huge, 4096);
    BufferedReader r(s);
    EXPECT_THROW(r.read_head(), ParseError);
}

TEST(UrlTest, ParsesAbsoluteForm)
{
    auto u = parse_absolute_url("http://www.pan.test:8080/a/b?c=d");
    EXPECT_EQ(u.scheme, "http");
    EXPECT_EQ(u.host, "www.pan.test");
    EXPECT_EQ(u.port, 8080);
    EXPECT_EQ(u.path, "/a/b?c=d");
    auto bare = parse_absolute_url("HTTP://Example.test");
    EXPECT_EQ(bare.host, "example.test");
    EXPECT_EQ(bare.port, 80);
    EXPECT_EQ(bare.path, "/");
    auto v6 = parse_absolute_url("http://[::1]:81/x");
    EXPECT_EQ(v6.host, "::1");
    EXPECT_EQ(v6.port, 81);
    for (const char* bad : {"/relative", "https://secure.test/", "http://", "http://host:99999/", "ftp://x/"}) {
        EXPECT_THROW(parse_absolute_url(bad), ParseError) << bad;
    }
}

TEST(UrlTest, SplitsAuthority)
{
    EXPECT_EQ(split_authority("example.test:443", 80), (net::Endpoint{"example.test", 443}));
    EXPECT_EQ(split_authority("example.test", 443), (net::Endpoint{"example.test", 443}));
    EXPECT_EQ(split_authority("[2001:db8::1]:8443", 443), (net::Endpoint{"2001:db8::1", 8443}));
    EXPECT_THROW(split_authority("", 443), ParseError);
    EXPECT_THROW(split_authority("host:abc", 443), ParseError);
}

} // namespace
} // namespace pan::http
