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

#include "pan/net/socket.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pan::http {

/// Ordered header list with case-insensitive lookup.
class Headers
{
  public:
    struct Field {
        std::string name;
        std::string value;
    };

    std::optional<std::string_view> get(std::string_view name) const;
    bool contains(std::string_view name) const { return get(name).has_value(); }
    void add(std::string name, std::string value);
    /// Replaces every field with this name by a single one.
    void set(std::string name, std::string value);
    void remove(std::string_view name);

    /// Removes hop-by-hop fields, including any listed in `Connection`.
    void strip_hop_by_hop();

    const std::vector<Field>& fields() const noexcept { return fields_; }

  private:
    std::vector<Field> fields_;
};

bool iequals(std::string_view a, std::string_view b);
/// True if a comma-separated header value lists `token` (case-insensitive).
bool has_token(std::string_view list, std::string_view token);

struct RequestHead {
    std::string method;
    std::string target;
    std::string version = "HTTP/1.1";
    Headers headers;
};

struct ResponseHead {
    std::string version = "HTTP/1.1";
    int status = 200;
    std::string reason = "OK";
    Headers headers;
};

/// Throw ParseError on malformed input.
RequestHead parse_request_head(std::string_view text);
ResponseHead parse_response_head(std::string_view text);

std::string serialize(const RequestHead& head);
std::string serialize(const ResponseHead& head);

std::string_view reason_phrase(int status);

/// Buffered reader over a ByteStream that can hand back unread bytes.
class BufferedReader
{
  public:
    static constexpr std::size_t kMaxHeadBytes = 64 * 1024;

    explicit BufferedReader(net::ByteStream& stream) : stream_(stream) {}

    /// Reads through the blank line ending a message head. Returns nullopt on
    /// EOF before the first byte. Throws ParseError when truncated or too big.
    std::optional<std::string> read_head();

    /// Appends exactly n bytes to `out`; false on premature EOF or error.
    bool read_exact(std::size_t n, std::string& out);
    /// Reads one CRLF-terminated line (terminator included).
    bool read_line(std::string& out, std::size_t limit = 8192);
    /// Appends everything until EOF; false on a read error.
    bool read_to_eof(std::string& out);

    std::string take_buffered();

  private:
    bool fill();

    net::ByteStream& stream_;
    std::string buf_;
    std::size_t pos_ = 0;
};

enum class Framing { none, content_length, chunked, until_close };

struct BodyFraming {
    Framing kind = Framing::none;
    std::size_t length = 0;
};

BodyFraming request_framing(const RequestHead& head);
BodyFraming response_framing(const ResponseHead& head, std::string_view request_method);

/// Reads the body bytes exactly as framed on the wire (chunk syntax kept).
bool read_body_raw(BufferedReader& reader, BodyFraming framing, std::string& out);

struct Url {
    std::string scheme;
    std::string host;
    std::uint16_t port = 80;
    std::string path = "/";
};

/// Parses an absolute-form `http://host[:port]/path?query` target.
Url parse_absolute_url(std::string_view target);

/// Splits an authority `host[:port]`, handling bracketed IPv6.
net::Endpoint split_authority(std::string_view authority, std::uint16_t default_port);

} // namespace pan::http
